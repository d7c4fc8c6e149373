"""Exact 2-colorability: general search, brute-force oracle, the prescribed-color
reduction for the two-part construction, and cluster feasibility."""

from .clusters import ClusterInstance, cluster_feasible, contract
from .core import (
    BRUTE_FORCE_MAX_N,
    DecisionResult,
    Status,
    brute_force_two_colorable,
    is_two_colorable,
)
from .prescribed import (
    PrescribedInstance,
    Reduction,
    ReductionFailure,
    sparse_forest_condition_holds,
    random_prescribed_instance,
    reduce_to_prescribed,
    solve_prescribed,
)

__all__ = [
    "BRUTE_FORCE_MAX_N",
    "ClusterInstance",
    "DecisionResult",
    "PrescribedInstance",
    "Reduction",
    "ReductionFailure",
    "Status",
    "brute_force_two_colorable",
    "cluster_feasible",
    "contract",
    "is_two_colorable",
    "sparse_forest_condition_holds",
    "random_prescribed_instance",
    "reduce_to_prescribed",
    "solve_prescribed",
]
