"""Repeated witness-tree growth and the final cluster test over all stage choices."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..decider import ClusterInstance, Status, cluster_feasible, is_two_colorable
from ..generators import PerturbationSpec, derive_seed, make_rng, sample_perturbation
from ..hypergraph import Hypergraph, is_proper
from .partite import Constants, PartiteHypergraph, k_partite_reduction, regularize_degrees
from .witness import ActivityThresholds, PrefixIndex, WitnessFailure, WitnessTree, grow_witness_tree

NON_COLORABLE = "non_2_colorable"
COLORABLE = "colorable"
INCONCLUSIVE = "inconclusive"


def stage_count(constants: Constants, n: int, k: int, ell: int, alpha: float, epsilon: float) -> int:
    """``floor(c5 l^-k n^((l/(l-1))(alpha - eps/2)))``, at least 1."""
    t = constants.c5 * ell ** (-k) * n ** (ell / (ell - 1) * (alpha - epsilon / 2))
    return max(1, math.floor(t))


@dataclass(frozen=True)
class StageOutcome:
    success: bool
    s_sets: tuple[frozenset[int], ...] = ()
    failure: str = ""
    removed_edges: int = 0
    tree: WitnessTree | None = None

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "s_sets": [sorted(s) for s in self.s_sets],
            "failure": self.failure,
            "removed_edges": self.removed_edges,
            "tree": self.tree.to_json() if self.tree else None,
        }


@dataclass(frozen=True)
class StageLedger:
    t: int
    stages: tuple[StageOutcome, ...]
    verdict: str
    choices_total: int = 0
    choices_tried: int = 0
    sampled: bool = False
    witness: tuple[int, ...] | None = None
    cross_check: bool | None = None
    final: Hypergraph | None = None
    stats: dict = field(default_factory=dict)

    @property
    def successes(self) -> int:
        return sum(s.success for s in self.stages)

    def cluster_sets(self) -> list[tuple[frozenset[int], ...]]:
        return [s.s_sets for s in self.stages if s.success]

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "successes": self.successes,
            "verdict": self.verdict,
            "choices_total": self.choices_total,
            "choices_tried": self.choices_tried,
            "sampled": self.sampled,
            "cross_check": self.cross_check,
            "witness": list(self.witness) if self.witness is not None else None,
            "stages": [s.to_json() for s in self.stages],
            **self.stats,
        }


def _edges(rows) -> np.ndarray:
    return np.asarray(rows, dtype=np.int64)


def run_stages(
    ph: PartiteHypergraph,
    stage_batches: Sequence[Sequence[np.ndarray]],
    final_batch: np.ndarray,
    thresholds: ActivityThresholds,
    choice_cap: int = 2**20,
    sample_size: int = 1024,
    seed: int = 0,
    budget: int | None = None,
    cross_check: bool = True,
) -> StageLedger:
    """Grow one tree per stage, then look for a proper coloring of the whole
    instance with one chosen neighborhood per successful stage monochromatic.

    After each success every edge meeting one of its neighborhoods is removed,
    so neighborhoods from different stages are disjoint.  If no choice admits
    a proper coloring of ``H + all batches + final_batch``, the instance is
    not 2-colorable.  Choices are enumerated exhaustively up to
    ``choice_cap`` and otherwise ``sample_size`` of them are sampled; an
    unsuccessful sample is inconclusive.
    """
    current = ph
    outcomes = []
    for batches in stage_batches:
        try:
            tree = grow_witness_tree(current, batches, thresholds, PrefixIndex(current))
        except WitnessFailure as exc:
            outcomes.append(StageOutcome(False, failure=str(exc)))
            continue
        touched = set().union(*tree.s_sets)
        before = current.hypergraph.num_edges
        current = current.with_edges_removed_at(touched)
        outcomes.append(StageOutcome(True, tree.s_sets, "", before - current.hypergraph.num_edges, tree))

    extra = [_edges(b) for batches in stage_batches for b in batches if len(b)]
    if len(final_batch):
        extra.append(_edges(final_batch))
    full = ph.hypergraph
    for rows in extra:
        full = full.with_edges(rows)

    t = len(stage_batches)
    sets = [o.s_sets for o in outcomes if o.success]
    if not sets:
        return StageLedger(t, tuple(outcomes), INCONCLUSIVE, final=full)
    total = math.prod(len(s) for s in sets)
    sampled = total > choice_cap
    if sampled:
        rng = make_rng(seed, 7)
        choices = (tuple(int(rng.integers(len(s))) for s in sets) for _ in range(sample_size))
    else:
        choices = product(*[range(len(s)) for s in sets])
    tried = 0
    for choice in choices:
        tried += 1
        inst = ClusterInstance.build(full.n, [s[j] for s, j in zip(sets, choice)], full.edges)
        res = cluster_feasible(inst, budget=budget)
        if res.status is Status.COLORABLE:
            assert is_proper(full, res.witness)
            return StageLedger(t, tuple(outcomes), COLORABLE, total, tried, sampled, res.witness, final=full)
    if sampled:
        return StageLedger(t, tuple(outcomes), INCONCLUSIVE, total, tried, True, final=full)
    check = None
    if cross_check:
        check = is_two_colorable(full, budget=budget).status is Status.NOT_COLORABLE
    return StageLedger(t, tuple(outcomes), NON_COLORABLE, total, tried, False, None, check, final=full)


@dataclass(frozen=True)
class PipelineRun:
    ledger: StageLedger
    partite: PartiteHypergraph
    thresholds: ActivityThresholds
    batch_size: int

    def to_json(self) -> dict:
        return {
            "alpha": self.partite.alpha,
            "constants": self.partite.constants.to_json() if self.partite.constants else None,
            "retained_edges": self.partite.hypergraph.num_edges,
            "source_edges": self.partite.source_edges,
            "activity": list(self.thresholds.delta),
            "extension": list(self.thresholds.extension),
            "batch_size": self.batch_size,
            **self.ledger.to_json(),
        }


def stage_batches(n: int, k: int, ell: int, t: int, batch_size: int, seed: int):
    """``t`` stages of ``k-2`` uniform batches plus one final batch, independently seeded."""
    def draw(*keys):
        return sample_perturbation(n, PerturbationSpec.fixed(batch_size, ell, derive_seed(seed, *keys)))

    stages = [[draw(0, i, j) for j in range(k - 2)] for i in range(t)]
    return stages, draw(1)


def prove_non_colorable(
    h: Hypergraph,
    epsilon: float,
    ell: int,
    rho: float,
    seed: int,
    trials: int = 20,
    max_stages: int = 64,
    budget: int | None = None,
) -> PipelineRun:
    """k-partite reduction, degree regularization, then the staged procedure
    with ``rho n^(l eps/2)`` random l-sets split evenly across all batches."""
    ph0 = k_partite_reduction(h, trials, derive_seed(seed, 2))
    ph, _ = regularize_degrees(ph0, epsilon, ell)
    thresholds = ActivityThresholds.from_constants(ph, epsilon, ell)
    t = min(max_stages, stage_count(ph.constants, ph.n, ph.k, ell, ph.alpha, epsilon))
    total = rho * h.n ** (ell * epsilon / 2)
    size = max(1, math.ceil(total / (t * (ph.k - 2) + 1)))
    stages, final = stage_batches(h.n, ph.k, ell, t, size, seed)
    ledger = run_stages(ph, stages, final, thresholds, seed=seed, budget=budget)
    return PipelineRun(ledger, ph, thresholds, size)
