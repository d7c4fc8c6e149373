"""Finite hypergraphs with mixed edge arities.

Vertices are the integers ``0..n-1``.  Edges are stored per arity as integer
arrays whose rows are sorted vertex tuples, which keeps perturbed instances
with hundreds of thousands of edges cheap to copy and to hand to the search
kernel.
"""

from __future__ import annotations

import io
from collections.abc import Iterable, Iterator, Mapping, Sequence
from itertools import combinations
from typing import TextIO

import numpy as np

Edge = tuple[int, ...]


class InputError(ValueError):
    """Raised for malformed hypergraphs, tuples or colorings."""


def _as_rows(edges: Iterable[Iterable[int]] | np.ndarray) -> dict[int, np.ndarray]:
    """Group edges by arity into arrays of sorted rows (no dedup yet)."""
    if isinstance(edges, np.ndarray):
        if edges.ndim != 2:
            raise InputError("edge array must be two-dimensional")
        if edges.shape[0] == 0:
            return {}
        return {edges.shape[1]: np.sort(edges.astype(np.int64, copy=False), axis=1)}
    grouped: dict[int, list[tuple[int, ...]]] = {}
    for e in edges:
        row = tuple(sorted(int(v) for v in e))
        grouped.setdefault(len(row), []).append(row)
    return {a: np.array(rows, dtype=np.int64).reshape(len(rows), a) for a, rows in grouped.items()}


def _row_codes(rows: np.ndarray, n: int) -> np.ndarray | None:
    """Encode rows as base-n integers, or None if that would overflow int64."""
    arity = rows.shape[1]
    if n <= 1 or arity * np.log2(max(n, 2)) >= 62:
        return None
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(arity):
        codes = codes * n + rows[:, j]
    return codes


def _dedupe(rows: np.ndarray, n: int) -> np.ndarray:
    """Drop repeated rows, keeping first occurrences in their original order."""
    if rows.shape[0] < 2:
        return rows
    codes = _row_codes(rows, n)
    if codes is None:
        _, first = np.unique(rows, axis=0, return_index=True)
    else:
        _, first = np.unique(codes, return_index=True)
    if first.size == rows.shape[0]:
        return rows
    return rows[np.sort(first)]


def _validate(n: int, arity: int, rows: np.ndarray) -> None:
    if arity < 2:
        raise InputError(f"edges must have at least 2 vertices, got arity {arity}")
    if rows.size == 0:
        return
    if rows.min() < 0 or rows.max() >= n:
        raise InputError(f"edge vertex out of range 0..{n - 1}")
    if np.any(rows[:, 1:] == rows[:, :-1]):
        raise InputError("edge with repeated vertex")


class Hypergraph:
    """Immutable hypergraph on ``range(n)``; edges may have different sizes.

    Duplicate edges (as sets) are collapsed on construction.
    """

    __slots__ = ("n", "_blocks", "_edges", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] | np.ndarray = ()):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        self.n = int(n)
        blocks = {}
        for arity, rows in sorted(_as_rows(edges).items()):
            _validate(self.n, arity, rows)
            blocks[arity] = _dedupe(rows, self.n)
        self._blocks: dict[int, np.ndarray] = blocks
        self._edges: tuple[Edge, ...] | None = None
        self._edge_set: frozenset[Edge] | None = None

    @classmethod
    def _trusted(cls, n: int, blocks: Mapping[int, np.ndarray]) -> Hypergraph:
        h = cls.__new__(cls)
        h.n = n
        h._blocks = {a: b for a, b in sorted(blocks.items()) if b.shape[0]}
        h._edges = None
        h._edge_set = None
        return h

    # -- views -----------------------------------------------------------

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(self._blocks)

    def block(self, arity: int) -> np.ndarray:
        """Read-only array of the edges of one arity, one sorted row per edge."""
        rows = self._blocks.get(arity)
        if rows is None:
            return np.empty((0, arity), dtype=np.int64)
        view = rows.view()
        view.flags.writeable = False
        return view

    def blocks(self) -> Iterator[tuple[int, np.ndarray]]:
        for arity in self._blocks:
            yield arity, self.block(arity)

    @property
    def num_edges(self) -> int:
        return sum(b.shape[0] for b in self._blocks.values())

    def __len__(self) -> int:
        return self.num_edges

    @property
    def edges(self) -> tuple[Edge, ...]:
        if self._edges is None:
            self._edges = tuple(
                tuple(int(v) for v in row) for b in self._blocks.values() for row in b
            )
        return self._edges

    @property
    def edge_set(self) -> frozenset[Edge]:
        if self._edge_set is None:
            self._edge_set = frozenset(self.edges)
        return self._edge_set

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.n, self.edge_set))

    def __repr__(self) -> str:
        sizes = ", ".join(f"{a}:{b.shape[0]}" for a, b in self._blocks.items())
        return f"Hypergraph(n={self.n}, edges={{{sizes}}})"

    def uniform(self, k: int) -> Hypergraph:
        """The k-uniform part of this hypergraph."""
        return Hypergraph._trusted(self.n, {k: self._blocks[k]} if k in self._blocks else {})

    def is_uniform(self) -> bool:
        return len(self._blocks) <= 1

    def vertex_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for rows in self._blocks.values():
            deg += np.bincount(rows.ravel(), minlength=self.n)
        return deg

    def with_edges(self, extra: Iterable[Iterable[int]] | np.ndarray) -> Hypergraph:
        """A new hypergraph holding these edges plus ``extra``; self is unchanged."""
        added = _as_rows(extra)
        blocks = dict(self._blocks)
        for arity, rows in added.items():
            _validate(self.n, arity, rows)
            if arity in blocks:
                rows = np.concatenate([blocks[arity], rows])
            blocks[arity] = _dedupe(rows, self.n)
        return Hypergraph._trusted(self.n, blocks)

    def without_vertices(self, vertices: Iterable[int]) -> Hypergraph:
        """Drop every edge meeting ``vertices`` (vertex indices are kept)."""
        mask = np.zeros(self.n, dtype=bool)
        mask[list(vertices)] = True
        blocks = {a: rows[~mask[rows].any(axis=1)] for a, rows in self._blocks.items()}
        return Hypergraph._trusted(self.n, blocks)


# -- tuple queries ---------------------------------------------------------


def _tuple(h: Hypergraph, a: Iterable[int]) -> tuple[int, ...]:
    members = tuple(sorted({int(v) for v in a}))
    for v in members:
        if not 0 <= v < h.n:
            raise InputError(f"vertex {v} out of range 0..{h.n - 1}")
    return members


def _containing(h: Hypergraph, a: tuple[int, ...], arity: int) -> np.ndarray:
    rows = h.block(arity)
    if rows.shape[0] == 0 or len(a) > arity:
        return rows[:0]
    mask = np.ones(rows.shape[0], dtype=bool)
    for v in a:
        mask &= (rows == v).any(axis=1)
    return rows[mask]


def degree(h: Hypergraph, a: Iterable[int], arity: int | None = None) -> int:
    """Number of edges of ``h`` containing every vertex of ``a``.

    With ``arity`` given only edges of that size are counted.
    """
    members = _tuple(h, a)
    sizes = [arity] if arity is not None else list(h.arities)
    return sum(_containing(h, members, s).shape[0] for s in sizes)


def neighborhood(h: Hypergraph, a: Iterable[int], k: int) -> frozenset[int]:
    """Vertices ``w`` outside ``a`` such that ``a + {w}`` is a k-edge."""
    members = _tuple(h, a)
    if len(members) != k - 1:
        raise InputError(f"neighborhood needs a {k - 1}-tuple, got {len(members)} vertices")
    rows = _containing(h, members, k)
    out = set(rows.ravel().tolist())
    return frozenset(out.difference(members))


def link(h: Hypergraph, a: Iterable[int], k: int) -> Hypergraph:
    """Graph of pairs ``{u, v}`` with ``a + {u, v}`` a k-edge."""
    members = _tuple(h, a)
    if len(members) != k - 2:
        raise InputError(f"link needs a {k - 2}-tuple, got {len(members)} vertices")
    rows = _containing(h, members, k)
    if rows.shape[0] == 0:
        return Hypergraph(h.n)
    keep = ~np.isin(rows, np.asarray(members, dtype=np.int64))
    pairs = rows[keep].reshape(rows.shape[0], 2)
    return Hypergraph._trusted(h.n, {2: pairs})


def tuple_degrees(h: Hypergraph, r: int, k: int) -> dict[tuple[int, ...], int]:
    """Degrees of every r-subset of some k-edge, counted over k-edges."""
    rows = h.block(k)
    counts: dict[tuple[int, ...], int] = {}
    for cols in combinations(range(k), r):
        sub = rows[:, cols]
        uniq, cnt = np.unique(sub, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), cnt.tolist()):
            key = tuple(row)
            counts[key] = counts.get(key, 0) + c
    return counts


# -- colorings -------------------------------------------------------------


def as_coloring(c: Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    arr = np.asarray(c, dtype=np.int64)
    if arr.shape != (n,):
        raise InputError(f"coloring must assign all {n} vertices, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (1, 2)).all():
        raise InputError("colors must be 1 or 2")
    return arr


def is_proper(h: Hypergraph, c: Sequence[int] | np.ndarray) -> bool:
    """True iff no edge of ``h`` is monochromatic under coloring ``c``."""
    colors = as_coloring(c, h.n)
    for _, rows in h.blocks():
        cr = colors[rows]
        if np.any((cr == cr[:, :1]).all(axis=1)):
            return False
    return True


def monochromatic_edges(h: Hypergraph, c: Sequence[int] | np.ndarray) -> list[Edge]:
    colors = as_coloring(c, h.n)
    bad: list[Edge] = []
    for _, rows in h.blocks():
        cr = colors[rows]
        bad.extend(tuple(r) for r in rows[(cr == cr[:, :1]).all(axis=1)].tolist())
    return bad


# -- text format -----------------------------------------------------------


def write_hypergraph(h: Hypergraph, out: TextIO) -> None:
    """Write ``n m`` then one ``s v1 .. vs`` line per edge."""
    out.write(f"{h.n} {h.num_edges}\n")
    for _, rows in h.blocks():
        s = rows.shape[1]
        for row in rows.tolist():
            out.write(f"{s} {' '.join(map(str, row))}\n")


def read_hypergraph(src: TextIO) -> Hypergraph:
    header = src.readline().split()
    if len(header) != 2:
        raise InputError("header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    edges = []
    for lineno in range(m):
        parts = src.readline().split()
        if not parts:
            raise InputError(f"expected {m} edges, file ended after {lineno}")
        s = int(parts[0])
        if len(parts) != s + 1:
            raise InputError(f"edge line {lineno + 2}: size {s} but {len(parts) - 1} vertices")
        edges.append([int(v) for v in parts[1:]])
    return Hypergraph(n, edges)


def dumps(h: Hypergraph) -> str:
    buf = io.StringIO()
    write_hypergraph(h, buf)
    return buf.getvalue()


def loads(text: str) -> Hypergraph:
    return read_hypergraph(io.StringIO(text))


def load(path: str) -> Hypergraph:
    with open(path) as f:
        return read_hypergraph(f)


def save(h: Hypergraph, path: str) -> None:
    with open(path, "w") as f:
        write_hypergraph(h, f)
