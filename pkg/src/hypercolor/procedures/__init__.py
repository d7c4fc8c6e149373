"""Executable degree filters, family peeling, k-partite reduction, witness
trees and the staged non-colorability procedure."""

from .degrees import HighDegreeSplit, km1_threshold, km2_delta_max, split_high_degree_km1, split_high_degree_km2
from .families import FamilyExtraction, InvariantReport, check_family_invariants, extract_families, family_count
from .partite import (
    Bucket,
    Constants,
    PartiteHypergraph,
    ReductionFailed,
    bucket_thresholds,
    degree_buckets,
    degree_window_holds,
    k_partite_reduction,
    random_partite_hypergraph,
    regularize_degrees,
    select_bucket,
)
from .stages import (
    COLORABLE,
    INCONCLUSIVE,
    NON_COLORABLE,
    PipelineRun,
    StageLedger,
    StageOutcome,
    prove_non_colorable,
    run_stages,
    stage_batches,
    stage_count,
)
from .witness import (
    ActivityThresholds,
    PrefixIndex,
    WitnessCheck,
    WitnessFailure,
    WitnessTree,
    check_activity,
    grow_witness_tree,
    random_batches,
    verify_witness,
)
