"""Greedy peeling of a graph into families of vertices with disjoint neighborhoods."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hypergraph import Hypergraph, InputError


@dataclass(frozen=True)
class FamilyExtraction:
    """Families ``F_j`` with the degree ``d_i`` and neighborhood of each member.

    ``working_removed[j]`` counts edges deleted from the working copy while
    building family j; ``permanent_removed[j]`` counts edges deleted from the
    graph afterwards with the family itself.
    """

    n: int
    delta: float
    ell: int
    families: tuple[tuple[int, ...], ...]
    degrees: tuple[tuple[int, ...], ...]
    neighborhoods: tuple[tuple[frozenset[int], ...], ...]
    precondition_failed: bool
    working_removed: tuple[int, ...] = ()
    permanent_removed: tuple[int, ...] = ()
    stats: dict = field(default_factory=dict)

    @property
    def target_families(self) -> int:
        return family_count(self.n, self.delta)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "ell": self.ell,
            "precondition_failed": self.precondition_failed,
            "families": [list(f) for f in self.families],
            "degrees": [list(d) for d in self.degrees],
            "neighborhoods": [[sorted(s) for s in fam] for fam in self.neighborhoods],
            "working_removed": list(self.working_removed),
            "permanent_removed": list(self.permanent_removed),
        }


def family_count(n: int, delta: float) -> int:
    return max(1, math.floor(0.5 * n ** (1 - delta)))


def _adjacency(g: Hypergraph) -> list[set[int]]:
    if g.arities not in ((), (2,)):
        raise InputError("family extraction needs a graph (2-edges only)")
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, w in g.block(2).tolist() if g.num_edges else ():
        adj[u].add(w)
        adj[w].add(u)
    return adj


def _max_degree_vertex(adj: list[set[int]]) -> int:
    deg = np.fromiter((len(a) for a in adj), dtype=np.int64, count=len(adj))
    return int(np.argmax(deg))  # argmax returns the smallest index on ties


def _drop_vertex(adj: list[set[int]], v: int) -> int:
    nbrs = adj[v]
    for u in nbrs:
        adj[u].discard(v)
    adj[v] = set()
    return len(nbrs)


def extract_families(g: Hypergraph, delta: float, ell: int) -> FamilyExtraction:
    """Peel up to ``max(1, floor(n^(1-delta)/2))`` families from ``g``.

    For each family, on a working copy: take the vertex of maximum degree
    (smallest index on ties), record its degree and neighborhood, delete every
    edge touching that neighborhood, and repeat while the squared degrees sum
    to less than ``n^(2-delta)/4``.  The family and its edges are then removed
    from ``g`` for good.  If ``g`` has fewer than ``n^(2-delta)`` edges the
    run still proceeds but is flagged.
    """
    n = g.n
    adj = _adjacency(g)
    precondition_failed = g.num_edges < n ** (2 - delta) * (1 - 1e-9)
    quota = 0.25 * n ** (2 - delta)
    families, degrees, neighborhoods, working, permanent = [], [], [], [], []
    for _ in range(family_count(n, delta)):
        work = [set(a) for a in adj]
        fam, degs, nbhd = [], [], []
        removed = 0
        square_sum = 0
        while square_sum < quota:
            v = _max_degree_vertex(work)
            d = len(work[v])
            if d == 0:
                break
            nv = frozenset(work[v])
            fam.append(v)
            degs.append(d)
            nbhd.append(nv)
            square_sum += d * d
            for u in nv:
                removed += _drop_vertex(work, u)
        if not fam:
            break
        families.append(tuple(fam))
        degrees.append(tuple(degs))
        neighborhoods.append(tuple(nbhd))
        working.append(removed)
        permanent.append(sum(_drop_vertex(adj, v) for v in fam))
    return FamilyExtraction(
        n, float(delta), int(ell), tuple(families), tuple(degrees), tuple(neighborhoods),
        bool(precondition_failed), tuple(working), tuple(permanent),
    )


@dataclass(frozen=True)
class InvariantReport:
    degree_floor: bool
    power_sum: bool
    disjoint_neighborhoods: bool
    disjoint_families: bool
    working_budget: bool
    permanent_budget: bool

    @property
    def all_hold(self) -> bool:
        return all(vars(self).values())

    def failures(self) -> list[str]:
        return [k for k, v in vars(self).items() if not v]


def check_family_invariants(fx: FamilyExtraction) -> InvariantReport:
    """Re-check the extraction's guarantees from its recorded data."""
    n, delta, ell = fx.n, fx.delta, fx.ell
    floor = 0.5 * n ** (1 - delta)
    power_bound = n ** (ell - (ell - 1) * delta) / 2**ell
    # relative slack guards float rounding in the exact boundary cases
    tol = 1e-9
    degree_floor = all(d >= floor * (1 - tol) for degs in fx.degrees for d in degs)
    power_sum = all(sum(d**ell for d in degs) >= power_bound * (1 - tol) for degs in fx.degrees)
    disjoint_nbhd = True
    for fam in fx.neighborhoods:
        seen: set[int] = set()
        for s in fam:
            if seen & s:
                disjoint_nbhd = False
            seen |= s
    seen_v: set[int] = set()
    disjoint_fam = True
    for fam in fx.families:
        if seen_v & set(fam):
            disjoint_fam = False
        seen_v |= set(fam)
    quota = 0.25 * n ** (2 - delta)
    # the working copy loses at most d_i^2 edges per pick, the last pick included
    working_budget = all(
        w <= sum(d * d for d in degs) and sum(d * d for d in degs[:-1]) < quota
        for w, degs in zip(fx.working_removed, fx.degrees)
    )
    permanent_budget = all(sum(degs) <= n for degs in fx.degrees)
    return InvariantReport(degree_floor, power_sum, disjoint_nbhd, disjoint_fam, working_budget, permanent_budget)
