"""Prescribed-color instances: single vertices with a forced color plus 2-edges.

The random sets added to the two-part construction reduce to such an
instance once X is colored 1 and Y colored 2; it is then solved exactly by
breadth-first 2-coloring.
"""

from __future__ import annotations

import time
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from ..generators import PerturbationSpec, XYZConstruction, derive_seed, make_rng, sample_perturbation
from ..hypergraph import InputError
from .core import DecisionResult, Status


@dataclass(frozen=True)
class PrescribedInstance:
    """Color prescriptions ``(vertex, color)`` and 2-edges on ``range(n)``.

    A vertex may carry both colors; that makes the instance infeasible but
    is not an input error.
    """

    n: int
    prescriptions: tuple[tuple[int, int], ...] = ()
    pair_edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        for v, c in self.prescriptions:
            if not 0 <= v < self.n or c not in (1, 2):
                raise InputError(f"bad prescription {v} -> {c}")
        for u, w in self.pair_edges:
            if not (0 <= u < w < self.n):
                raise InputError(f"pair edges must be sorted distinct pairs in range, got {(u, w)}")

    @classmethod
    def build(
        cls, n: int, prescriptions: Iterable[tuple[int, int]] = (), pairs: Iterable[Iterable[int]] = ()
    ) -> PrescribedInstance:
        pres = tuple(sorted({(int(v), int(c)) for v, c in prescriptions}))
        edges = frozenset(tuple(sorted(int(x) for x in p)) for p in pairs)
        return cls(n, pres, edges)

    def colors_of(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for v, c in self.prescriptions:
            out.setdefault(v, set()).add(c)
        return out


@dataclass(frozen=True)
class Reduction:
    """Outcome of mapping random ell-sets onto the Z part of the construction."""

    instance: PrescribedInstance
    discarded: int = 0
    prescribed_one: int = 0
    prescribed_two: int = 0
    pair_sources: int = 0

    def compose(self, xyz: XYZConstruction, solution: DecisionResult) -> np.ndarray:
        """Full coloring: X -> 1, Y -> 2, Z as in ``solution``."""
        z = np.asarray(solution.witness, dtype=np.int64)[xyz.z.start : xyz.z.stop]
        return xyz.canonical_coloring(z)


class ReductionFailure(Exception):
    """Some random set lies entirely inside X or entirely inside Y."""

    def __init__(self, inside_x: int, inside_y: int):
        super().__init__(f"{inside_x} random sets inside X, {inside_y} inside Y")
        self.inside_x = inside_x
        self.inside_y = inside_y


def reduce_to_prescribed(xyz: XYZConstruction, r: np.ndarray | Iterable[Iterable[int]]) -> Reduction:
    """Turn random sets ``r`` into a prescribed-color instance on ``range(n)``.

    With X colored 1 and Y colored 2: sets meeting both X and Y are already
    satisfied; a set made of ell-1 vertices of Y (of X) and one vertex v of Z
    prescribes color 1 (color 2) to v; any other set keeps only the pair of
    its two smallest Z vertices.  Z is ordered by vertex index.
    """
    rows = np.asarray(r if isinstance(r, np.ndarray) else [sorted(e) for e in r], dtype=np.int64)
    if rows.size == 0:
        return Reduction(PrescribedInstance(xyz.n))
    in_x = (rows >= xyz.x.start) & (rows < xyz.x.stop)
    in_y = (rows >= xyz.y.start) & (rows < xyz.y.stop)
    in_z = rows >= xyz.z.start
    ell = rows.shape[1]
    all_x = int(in_x.all(axis=1).sum())
    all_y = int(in_y.all(axis=1).sum())
    if all_x or all_y:
        raise ReductionFailure(all_x, all_y)
    both = in_x.any(axis=1) & in_y.any(axis=1)
    nz = in_z.sum(axis=1)
    prescriptions: set[tuple[int, int]] = set()
    pairs: set[tuple[int, int]] = set()
    n_one = n_two = n_pairs = 0
    for row, b, z_count, ys in zip(rows.tolist(), both, nz, in_y.sum(axis=1)):
        if b:
            continue
        zs = sorted(v for v in row if v >= xyz.z.start)
        if z_count == 1:
            # the other ell-1 vertices lie all in Y or all in X
            color = 1 if ys == ell - 1 else 2
            prescriptions.add((zs[0], color))
            n_one += color == 1
            n_two += color == 2
        else:
            pairs.add((zs[0], zs[1]))
            n_pairs += 1
    inst = PrescribedInstance(xyz.n, tuple(sorted(prescriptions)), frozenset(pairs))
    return Reduction(inst, int(both.sum()), n_one, n_two, n_pairs)


def _adjacency(inst: PrescribedInstance) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for u, w in inst.pair_edges:
        adj.setdefault(u, []).append(w)
        adj.setdefault(w, []).append(u)
    return adj


def solve_prescribed(inst: PrescribedInstance) -> DecisionResult:
    """Exact: a coloring honoring all prescriptions with no monochromatic pair."""
    t0 = time.perf_counter()
    color = np.zeros(inst.n, dtype=np.int8)
    for v, c in inst.prescriptions:
        if color[v] and color[v] != c:
            return DecisionResult(Status.NOT_COLORABLE, None, 0, time.perf_counter() - t0,
                                  {"conflict": "prescription", "vertex": v})
        color[v] = c
    adj = _adjacency(inst)
    sources = [v for v, _ in inst.prescriptions] + sorted(adj)
    visits = 0
    seen = np.zeros(inst.n, dtype=bool)
    for s in sources:
        if seen[s]:
            continue
        if not color[s]:
            color[s] = 1
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            visits += 1
            for w in adj.get(u, ()):
                if color[w] == color[u]:
                    return DecisionResult(Status.NOT_COLORABLE, None, visits, time.perf_counter() - t0,
                                          {"conflict": "edge", "edge": (min(u, w), max(u, w))})
                if not seen[w]:
                    color[w] = 3 - color[u]
                    seen[w] = True
                    queue.append(w)
    color[color == 0] = 1
    return DecisionResult(Status.COLORABLE, tuple(int(c) for c in color), visits, time.perf_counter() - t0)


def sparse_forest_condition_holds(inst: PrescribedInstance) -> bool:
    """No doubly prescribed vertex, the pair graph is a forest, and each tree
    carries at most one prescribed vertex.

    This is the sufficient condition for feasibility that holds almost surely
    in the sparse regime; :func:`solve_prescribed` decides feasibility itself.
    """
    colors = inst.colors_of()
    if any(len(cs) > 1 for cs in colors.values()):
        return False
    parent = list(range(inst.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, w in inst.pair_edges:
        ru, rw = find(u), find(w)
        if ru == rw:
            return False
        parent[ru] = rw
    roots = [find(v) for v in colors]
    return len(roots) == len(set(roots))


def random_prescribed_instance(n: int, p1: float, p2: float, p3: float, seed: int) -> PrescribedInstance:
    """Each vertex prescribed color i with probability p_i (independently),
    each pair an edge with probability p3."""
    rng = make_rng(seed)
    ones = np.flatnonzero(rng.random(n) < p1)
    twos = np.flatnonzero(rng.random(n) < p2)
    pairs = sample_perturbation(n, PerturbationSpec.bernoulli(p3, 2, derive_seed(seed, 1)))
    pres = [(int(v), 1) for v in ones] + [(int(v), 2) for v in twos]
    return PrescribedInstance(n, tuple(sorted(pres)), frozenset(map(tuple, pairs.tolist())))
