"""High-degree (k-1)- and (k-2)-tuple filters for k-uniform hypergraphs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..hypergraph import Hypergraph, InputError


@dataclass(frozen=True)
class HighDegreeSplit:
    """Tuples clearing a degree bound and the number of edges through any of them."""

    tuples: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    edge_count: int
    bound: float

    def __len__(self) -> int:
        return len(self.tuples)

    def exceeds(self, edge_bound: float) -> bool:
        """Whether at least ``edge_bound`` edges pass through the listed tuples."""
        return self.edge_count >= edge_bound


def _uniform_rows(h: Hypergraph, k: int | None) -> tuple[np.ndarray, int]:
    if k is None:
        if not h.is_uniform():
            raise InputError("hypergraph is not uniform; pass k")
        k = h.arities[0] if h.arities else 0
    return h.block(k) if k else np.empty((0, 0), dtype=np.int64), k


def _split(h: Hypergraph, k: int, r: int, keep) -> HighDegreeSplit:
    rows = h.block(k)
    if rows.shape[0] == 0:
        return HighDegreeSplit((), (), 0, 0.0)
    counts: dict[tuple[int, ...], int] = {}
    subs = []
    for cols in combinations(range(k), r):
        sub = rows[:, cols]
        subs.append(sub)
        uniq, cnt = np.unique(sub, axis=0, return_counts=True)
        for row, c in zip(map(tuple, uniq.tolist()), cnt.tolist()):
            counts[row] = counts.get(row, 0) + c
    high = sorted(t for t, d in counts.items() if keep(d))
    if not high:
        return HighDegreeSplit((), (), 0, 0.0)
    high_arr = np.array(high, dtype=np.int64)
    through = np.zeros(rows.shape[0], dtype=bool)
    for sub in subs:
        # lexicographic membership test of each row's sub-tuple in the sorted high list
        pos = np.searchsorted(_keys(high_arr, h.n), _keys(sub, h.n))
        pos = np.minimum(pos, len(high) - 1)
        through |= (high_arr[pos] == sub).all(axis=1)
    return HighDegreeSplit(tuple(high), tuple(counts[t] for t in high), int(through.sum()), 0.0)


def _keys(rows: np.ndarray, n: int) -> np.ndarray:
    # base-n codes; object dtype once they would overflow int64
    base = n if n ** rows.shape[1] < 2**62 else None
    if base is None:
        return np.array([tuple(r) for r in rows.tolist()], dtype=object)
    weights = base ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def split_high_degree_km1(h: Hypergraph, threshold: float, k: int | None = None) -> HighDegreeSplit:
    """(k-1)-tuples of degree strictly above ``threshold``."""
    _, k = _uniform_rows(h, k)
    if k < 2:
        return HighDegreeSplit((), (), 0, threshold)
    out = _split(h, k, k - 1, lambda d: d > threshold)
    return HighDegreeSplit(out.tuples, out.degrees, out.edge_count, threshold)


def split_high_degree_km2(h: Hypergraph, delta_max: float, k: int | None = None) -> HighDegreeSplit:
    """(k-2)-tuples of degree at least ``n^(2 - delta_max)``."""
    _, k = _uniform_rows(h, k)
    if k and k < 3:
        raise InputError("(k-2)-tuple degrees need k >= 3")
    bound = float(h.n) ** (2 - delta_max)
    if not h.num_edges:
        return HighDegreeSplit((), (), 0, bound)
    out = _split(h, k, k - 2, lambda d: d >= bound)
    return HighDegreeSplit(out.tuples, out.degrees, out.edge_count, bound)


def km1_threshold(n: int, epsilon: float) -> float:
    return float(n) ** (1 - epsilon / 2)


def km2_delta_max(epsilon: float, ell: int) -> float:
    return ell * epsilon / (2 * (ell - 1))
