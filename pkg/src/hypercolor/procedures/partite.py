"""k-partite subhypergraphs and the dyadic regularization of (k-1)-tuple degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..generators import make_rng
from ..hypergraph import Hypergraph, InputError


class ReductionFailed(Exception):
    """No (k-1)-tuple survives the low-degree cut."""


@dataclass(frozen=True)
class Constants:
    """Edge-density constants derived from an actual edge count.

    ``c1 = |E| / n^(k-eps)``; each later one is fixed by the previous.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    @classmethod
    def from_counts(cls, edges: int, n: int, k: int, epsilon: float, ell: int) -> Constants:
        c1 = edges / n ** (k - epsilon)
        c2 = c1 / 2
        c3 = math.factorial(k) / k**k * c2
        c4 = c3 / 2
        c5 = c4 * min(c4 / (4 * (ell - 1)), 1 / 8)
        return cls(c1, c2, c3, c4, c5)

    def to_json(self) -> dict:
        return dict(vars(self))


@dataclass(frozen=True, eq=False)
class PartiteHypergraph:
    """A k-uniform hypergraph with a vertex partition ``V_1..V_k``.

    ``parts[v]`` is the 0-based part of vertex v (-1 for unused vertices).
    ``alpha`` and ``constants`` are set once degrees have been regularized.
    """

    hypergraph: Hypergraph
    parts: np.ndarray
    k: int
    source_edges: int
    alpha: float | None = None
    constants: Constants | None = None

    @property
    def n(self) -> int:
        return self.hypergraph.n

    @property
    def retained_fraction(self) -> float:
        return self.hypergraph.num_edges / self.source_edges if self.source_edges else 0.0

    def part(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.parts == i)

    def ordered_rows(self) -> np.ndarray:
        """Edges with column i holding the vertex from ``V_{i+1}``."""
        rows = self.hypergraph.block(self.k)
        if rows.shape[0] == 0:
            return np.empty((0, self.k), dtype=np.int64)
        idx = np.argsort(self.parts[rows], axis=1, kind="stable")
        return np.take_along_axis(rows, idx, axis=1)

    def is_partite(self) -> bool:
        rows = self.hypergraph.block(self.k)
        if rows.shape[0] == 0:
            return self.hypergraph.num_edges == 0
        labels = np.sort(self.parts[rows], axis=1)
        return self.hypergraph.arities == (self.k,) and bool((labels == np.arange(self.k)).all())

    def with_edges_removed_at(self, vertices) -> PartiteHypergraph:
        return replace(self, hypergraph=self.hypergraph.without_vertices(vertices))


def k_partite_reduction(h: Hypergraph, trials: int, seed: int, k: int | None = None) -> PartiteHypergraph:
    """Best of ``trials`` uniform random k-partitions by number of edges meeting
    every part exactly once; only those edges are kept."""
    if trials < 1:
        raise InputError("trials must be at least 1")
    if k is None:
        if len(h.arities) != 1:
            raise InputError("need a k-uniform hypergraph or an explicit k")
        k = h.arities[0]
    rows = h.block(k)
    rng = make_rng(seed)
    best_labels, best_mask, best = None, None, -1
    for _ in range(trials):
        labels = rng.integers(0, k, size=h.n)
        if rows.shape[0]:
            mask = (np.sort(labels[rows], axis=1) == np.arange(k)).all(axis=1)
        else:
            mask = np.zeros(0, dtype=bool)
        count = int(mask.sum())
        if count > best:
            best_labels, best_mask, best = labels, mask, count
    kept = Hypergraph._trusted(h.n, {k: rows[best_mask]} if best else {})
    return PartiteHypergraph(kept, best_labels, k, rows.shape[0])


def random_partite_hypergraph(
    part_size: int, k: int, degree: int, seed: int, density: float = 1.0
) -> PartiteHypergraph:
    """Synthetic k-partite hypergraph with every nonzero (k-1)-tuple degree equal.

    Parts are consecutive blocks of ``part_size`` vertices.  Each tuple of
    ``V_1 x ... x V_{k-1}`` is kept with probability ``density`` and then
    joined to ``degree`` distinct random vertices of ``V_k``.
    """
    if not 1 <= degree <= part_size:
        raise InputError("degree must lie in 1..part_size")
    n = k * part_size
    rng = make_rng(seed)
    grids = np.meshgrid(*[np.arange(part_size)] * (k - 1), indexing="ij")
    heads = np.column_stack([g.ravel() + i * part_size for i, g in enumerate(grids)])
    heads = heads[rng.random(len(heads)) < density]
    lasts = np.argsort(rng.random((len(heads), part_size)), axis=1)[:, :degree] + (k - 1) * part_size
    rows = np.column_stack([np.repeat(heads, degree, axis=0), lasts.reshape(-1, 1)])
    h = Hypergraph._trusted(n, {k: np.sort(rows, axis=1)} if len(rows) else {})
    parts = np.repeat(np.arange(k), part_size)
    return PartiteHypergraph(h, parts, k, h.num_edges)


# -- degree regularization --------------------------------------------------


def head_degrees(ph: PartiteHypergraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct ``V_1 x ... x V_{k-1}`` heads, their degrees, and each edge's head index."""
    rows = ph.ordered_rows()
    heads, inverse, counts = np.unique(rows[:, : ph.k - 1], axis=0, return_inverse=True, return_counts=True)
    return heads, counts, inverse.ravel()


@dataclass(frozen=True)
class Bucket:
    index: int
    tuples: int
    edges: int
    threshold: float
    ratio: float


def bucket_thresholds(n: int, epsilon: float, ell: int, c4: float, indices) -> np.ndarray:
    """Normalized per-class thresholds ``2^(-i/(l-1))/D1 + 2^(i(l-2)/(l-1))/D2``."""
    i = np.asarray(indices, dtype=float)
    d1 = 4 * (ell - 1) / c4 * n ** (-(1 - epsilon) / (ell - 1))
    d2 = 8 * n ** ((ell - 2) * (1 - epsilon / 2) / (ell - 1))
    return 2 ** (-i / (ell - 1)) / d1 + 2 ** (i * (ell - 2) / (ell - 1)) / d2


def select_bucket(edge_counts: dict[int, int], thresholds: dict[int, float]) -> int:
    """Class with the largest edge-fraction to threshold ratio; smallest index on ties."""
    total = sum(edge_counts.values())
    best, best_ratio = None, -math.inf
    for i in sorted(edge_counts):
        ratio = edge_counts[i] / total / thresholds[i]
        if ratio > best_ratio:
            best, best_ratio = i, ratio
    if best is None:
        raise ReductionFailed("no nonempty degree class")
    return best


def degree_buckets(degrees: np.ndarray) -> dict[int, tuple[int, int]]:
    """Dyadic class ``i`` (degrees in ``[2^i, 2^(i+1))``) -> (tuple count, edges through)."""
    degrees = np.asarray(degrees, dtype=np.int64)
    degrees = degrees[degrees > 0]
    cls = np.floor(np.log2(degrees)).astype(np.int64)
    # guard log2 rounding at exact powers of two
    cls[2 ** (cls + 1) <= degrees] += 1
    cls[2**cls > degrees] -= 1
    out = {}
    for i in np.unique(cls).tolist():
        sel = cls == i
        out[int(i)] = (int(sel.sum()), int(degrees[sel].sum()))
    return out


def regularize_degrees(
    ph: PartiteHypergraph, epsilon: float, ell: int, constants: Constants | None = None
) -> tuple[PartiteHypergraph, list[Bucket]]:
    """Keep only edges through (k-1)-tuples of one dyadic degree class.

    Tuples of degree below ``c4 n^(1-eps)`` are cut first.  The class maximizing
    its share of the remaining edges divided by its threshold is selected, and
    ``alpha`` is set by ``2^i = n^(1-alpha)``.  Returns the result and the
    per-class table used for the choice.
    """
    n, k = ph.n, ph.k
    if constants is None:
        constants = Constants.from_counts(ph.source_edges, n, k, epsilon, ell)
    if ph.hypergraph.num_edges == 0 or constants.c4 <= 0:
        raise ReductionFailed("no edges to regularize")
    rows = ph.ordered_rows()
    _, deg, inv = head_degrees(ph)
    edge_deg = deg[inv]
    keep = edge_deg >= constants.c4 * n ** (1 - epsilon)
    if not keep.any():
        raise ReductionFailed("every (k-1)-tuple falls below the low-degree cut")
    table = degree_buckets(deg[deg >= constants.c4 * n ** (1 - epsilon)])
    idx = sorted(table)
    thr = dict(zip(idx, bucket_thresholds(n, epsilon, ell, constants.c4, idx).tolist()))
    chosen = select_bucket({i: table[i][1] for i in idx}, thr)
    total = sum(e for _, e in table.values())
    buckets = [Bucket(i, table[i][0], table[i][1], thr[i], table[i][1] / total / thr[i]) for i in idx]
    sel = keep & (edge_deg >= 2**chosen) & (edge_deg < 2 ** (chosen + 1))
    kept = Hypergraph._trusted(n, {k: np.sort(rows[sel], axis=1)})
    alpha = 1 - chosen * math.log(2) / math.log(n)
    return replace(ph, hypergraph=kept, alpha=alpha, constants=constants), buckets


def degree_window_holds(ph: PartiteHypergraph) -> bool:
    """Every nonzero head degree lies in ``[n^(1-alpha), 2 n^(1-alpha)]``."""
    if ph.alpha is None:
        return False
    if ph.hypergraph.num_edges == 0:
        return True
    _, deg, _ = head_degrees(ph)
    lo = ph.n ** (1 - ph.alpha)
    return bool(((deg >= lo * (1 - 1e-9)) & (deg <= 2 * lo * (1 + 1e-9))).all())
