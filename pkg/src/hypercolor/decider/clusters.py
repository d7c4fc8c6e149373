"""Feasibility of 2-colorings that keep prescribed vertex clusters monochromatic."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..hypergraph import Hypergraph, InputError
from .core import DecisionResult, Status, is_two_colorable

EXHAUSTIVE_MAX_CLUSTERS = 30


@dataclass(frozen=True)
class ClusterInstance:
    """Disjoint clusters ``A_1..A_t`` and edges on ``range(n)``."""

    n: int
    clusters: tuple[frozenset[int], ...]
    r_edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for a in self.clusters:
            if seen & a:
                raise InputError(f"clusters overlap on {sorted(seen & a)}")
            seen |= a
        if seen and not (0 <= min(seen) and max(seen) < self.n):
            raise InputError("cluster vertex out of range")

    @classmethod
    def build(cls, n: int, clusters: Iterable[Iterable[int]], edges: Iterable[Iterable[int]]) -> ClusterInstance:
        return cls(
            n,
            tuple(frozenset(int(v) for v in a) for a in clusters),
            tuple(tuple(sorted(int(v) for v in e)) for e in edges),
        )


def contract(inst: ClusterInstance) -> tuple[Hypergraph | None, np.ndarray]:
    """Merge each cluster into one vertex.

    Returns the contracted hypergraph (None if some edge falls inside a single
    cluster) and the map from original vertex to contracted vertex.  Cluster i
    becomes vertex i; the remaining vertices follow in index order.
    """
    t = len(inst.clusters)
    image = np.full(inst.n, -1, dtype=np.int64)
    for i, a in enumerate(inst.clusters):
        image[list(a)] = i
    free = np.flatnonzero(image < 0)
    image[free] = t + np.arange(len(free))
    edges = []
    for e in inst.r_edges:
        img = sorted({int(image[v]) for v in e})
        if len(img) < 2:
            return None, image
        edges.append(img)
    return Hypergraph(t + len(free), edges), image


def cluster_feasible(inst: ClusterInstance, mode: str = "contract", budget: int | None = None) -> DecisionResult:
    """Is there a proper coloring of the edges with every cluster monochromatic?

    ``contract`` decides the contracted hypergraph once; ``exhaustive`` tries
    each of the ``2^t`` cluster colorings in turn (t <= 30).  The witness is a
    coloring of ``range(n)``.
    """
    h, image = contract(inst)
    if h is None:
        return DecisionResult(Status.NOT_COLORABLE, stats={"edge_inside_cluster": True})
    t = len(inst.clusters)
    if mode == "contract":
        res = is_two_colorable(h, budget=budget)
    elif mode == "exhaustive":
        if t > EXHAUSTIVE_MAX_CLUSTERS:
            raise InputError(f"exhaustive mode limited to {EXHAUSTIVE_MAX_CLUSTERS} clusters, got {t}")
        res = DecisionResult(Status.NOT_COLORABLE)
        nodes = 0
        for pattern in product((1, 2), repeat=t):
            res = is_two_colorable(h, budget=budget, fixed=dict(enumerate(pattern)))
            nodes += res.nodes
            if res.status is not Status.NOT_COLORABLE:
                break
        res = DecisionResult(res.status, res.witness, nodes, res.seconds)
    else:
        raise InputError(f"unknown mode {mode!r}")
    if res.witness is None:
        return res
    contracted = np.asarray(res.witness, dtype=np.int64)
    witness = tuple(int(c) for c in contracted[image])
    return DecisionResult(res.status, witness, res.nodes, res.seconds, {"cluster_colors": list(contracted[:t].tolist())})
