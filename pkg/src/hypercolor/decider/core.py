from __future__ import annotations

import enum
import time
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..hypergraph import Hypergraph, InputError
from . import _kernel

BRUTE_FORCE_MAX_N = 24


class Status(enum.IntEnum):
    """Decision outcome; the values double as CLI exit codes."""

    COLORABLE = 0
    NOT_COLORABLE = 1
    UNDECIDED = 2


@dataclass(frozen=True)
class DecisionResult:
    status: Status
    witness: tuple[int, ...] | None = None
    nodes: int = 0
    seconds: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def colorable(self) -> bool | None:
        """True/False for a decided instance, None when the budget ran out."""
        if self.status is Status.UNDECIDED:
            return None
        return self.status is Status.COLORABLE

    @property
    def undecided(self) -> bool:
        return self.status is Status.UNDECIDED

    def to_json(self) -> dict:
        return {
            "status": self.status.name.lower(),
            "colorable": self.colorable,
            "witness": list(self.witness) if self.witness is not None else None,
            "nodes": self.nodes,
            "seconds": self.seconds,
            **self.stats,
        }


def flatten(h: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """CSR view of the edges: ``edge_ptr`` offsets into ``edge_verts``."""
    parts = [rows.ravel() for _, rows in h.blocks()]
    sizes = [np.full(rows.shape[0], a, dtype=np.int64) for a, rows in h.blocks()]
    verts = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    ptr = np.zeros(h.num_edges + 1, dtype=np.int64)
    if sizes:
        np.cumsum(np.concatenate(sizes), out=ptr[1:])
    return ptr, np.ascontiguousarray(verts, dtype=np.int64)


def decision_order(n: int, edge_ptr: np.ndarray, edge_verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Branching order: by component, then descending degree, then index."""
    comp = _kernel.components(n, edge_ptr, edge_verts)
    deg = np.bincount(edge_verts, minlength=n)
    idx = np.flatnonzero(deg)
    order = idx[np.lexsort((idx, -deg[idx], comp[idx]))]
    return order, comp


def is_two_colorable(
    h: Hypergraph,
    budget: int | None = None,
    fixed: Mapping[int, int] | None = None,
) -> DecisionResult:
    """Exact 2-colorability by backtracking with forcing propagation.

    ``budget`` caps the number of search nodes (decisions plus flips); when it
    is hit the result is ``UNDECIDED``.  ``fixed`` pins colors of vertices.
    """
    t0 = time.perf_counter()
    ptr, verts = flatten(h)
    fixed_arr = np.zeros(h.n, dtype=np.int8)
    for v, c in (fixed or {}).items():
        if not 0 <= v < h.n or c not in (1, 2):
            raise InputError(f"bad fixed color {v} -> {c}")
        fixed_arr[v] = c
    order, comp = decision_order(h.n, ptr, verts)
    status, colors, nodes = _kernel.search(
        h.n, ptr, verts, order, comp, fixed_arr, -1 if budget is None else int(budget)
    )
    status = Status(int(status))
    witness = None
    if status is Status.COLORABLE:
        colors = np.where(colors == 0, 1, colors)
        witness = tuple(int(c) for c in colors)
    return DecisionResult(status, witness, int(nodes), time.perf_counter() - t0)


def brute_force_two_colorable(h: Hypergraph) -> DecisionResult:
    """Try all ``2^n`` colorings; the test oracle for the search above."""
    if h.n > BRUTE_FORCE_MAX_N:
        raise InputError(f"brute force refuses n = {h.n} > {BRUTE_FORCE_MAX_N}")
    t0 = time.perf_counter()
    masks = [int(sum(1 << int(v) for v in e)) for e in h.edges]
    total = 1 << h.n
    chunk = 1 << min(h.n, 20)
    for lo in range(0, total, chunk):
        c = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        ok = np.ones(len(c), dtype=bool)
        for em in masks:
            bits = c & em
            ok &= (bits != 0) & (bits != em)
        hits = np.flatnonzero(ok)
        if hits.size:
            code = int(c[hits[0]])
            witness = tuple(2 if code >> v & 1 else 1 for v in range(h.n))
            return DecisionResult(Status.COLORABLE, witness, lo + int(hits[0]) + 1, time.perf_counter() - t0)
    return DecisionResult(Status.NOT_COLORABLE, None, total, time.perf_counter() - t0)
