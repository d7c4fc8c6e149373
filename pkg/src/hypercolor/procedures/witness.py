"""l-ary witness trees whose leaf neighborhoods are forced monochromatic."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..generators import draw_tuples, make_rng
from .partite import PartiteHypergraph

Path = tuple[int, ...]


class WitnessFailure(Exception):
    """Tree growth stopped: no active root, or a batch had no usable l-set."""

    def __init__(self, reason: str, level: int | None = None, path: Path | None = None):
        where = f" at level {level}, path {path}" if level is not None else ""
        super().__init__(f"{reason}{where}")
        self.reason = reason
        self.level = level
        self.path = path


@dataclass(frozen=True)
class ActivityThresholds:
    """Degree bounds ``delta[r-1]`` for active r-tuples (r = 1..k-1) and
    ``extension[r-1]``, the least number of active extensions an active
    r-tuple should have (r = 1..k-2)."""

    delta: tuple[float, ...]
    extension: tuple[float, ...]

    @classmethod
    def from_constants(cls, ph: PartiteHypergraph, epsilon: float, ell: int) -> ActivityThresholds:
        if ph.alpha is None or ph.constants is None:
            raise ValueError("thresholds need a regularized hypergraph (alpha and constants set)")
        n, k, a, c5 = ph.n, ph.k, ph.alpha, ph.constants.c5
        slope = (ell - 2) / (ell - 1) * (a - epsilon / 2)
        delta = tuple(c5 / 2**r * n ** (k - r - epsilon - slope) for r in range(1, k))
        ext = tuple(delta[r - 1] / (4 * n ** (k - r - 1 - a)) for r in range(1, k - 1))
        return cls(delta, ext)

    @classmethod
    def constant(cls, k: int, delta: float = 1.0, extension: float = 0.0) -> ActivityThresholds:
        return cls((float(delta),) * (k - 1), (float(extension),) * (k - 2))


class PrefixIndex:
    """Degrees of every prefix ``(v_1, ..., v_r)`` of the ordered edges."""

    def __init__(self, ph: PartiteHypergraph):
        self.ph = ph
        self.rows = ph.ordered_rows()
        self.degree: list[dict[Path, int]] = [{}]
        for r in range(1, ph.k):
            uniq, cnt = np.unique(self.rows[:, :r], axis=0, return_counts=True)
            self.degree.append(dict(zip(map(tuple, uniq.tolist()), cnt.tolist())))

    def of(self, path: Path) -> int:
        return self.degree[len(path)].get(tuple(path), 0)

    def extensions(self, path: Path) -> list[int]:
        """Vertices of the next part completing ``path`` to a prefix with positive degree."""
        r = len(path)
        table = self.degree[r + 1]
        nxt = self.ph.part(r)
        return [int(w) for w in nxt if (*path, int(w)) in table]

    def neighborhood(self, path: Path) -> frozenset[int]:
        mask = (self.rows[:, : len(path)] == np.asarray(path)).all(axis=1)
        return frozenset(self.rows[mask, len(path)].tolist())


@dataclass(frozen=True)
class WitnessTree:
    """Root in ``V_1``; ``child_edges[P]`` is the l-set of children of path P."""

    k: int
    ell: int
    root: int
    child_edges: dict[Path, tuple[int, ...]]
    leaf_paths: tuple[Path, ...]
    s_sets: tuple[frozenset[int], ...]
    claim_violations: tuple[tuple[Path, int, float], ...] = ()
    active: dict[Path, int] = field(default_factory=dict)

    @property
    def q(self) -> int:
        return len(self.leaf_paths)

    def vertices(self) -> list[int]:
        vs = {self.root}
        for e in self.child_edges.values():
            vs.update(e)
        return sorted(vs)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "ell": self.ell,
            "root": self.root,
            "child_edges": [[list(p), list(e)] for p, e in self.child_edges.items()],
            "leaf_paths": [list(p) for p in self.leaf_paths],
            "s_sets": [sorted(s) for s in self.s_sets],
            "claim_violations": [[list(p), c, b] for p, c, b in self.claim_violations],
        }


def grow_witness_tree(
    ph: PartiteHypergraph,
    batches: Sequence[np.ndarray],
    thresholds: ActivityThresholds,
    index: PrefixIndex | None = None,
    ell: int | None = None,
) -> WitnessTree:
    """Grow one tree level by level.

    The root is the smallest vertex of ``V_1`` whose degree clears
    ``delta[0]``.  Each path P at level j takes as children the first l-set
    of ``batches[j-1]`` lying inside the active extensions of P in
    ``V_{j+1}``.  Raises :class:`WitnessFailure` when either step finds
    nothing.
    """
    k = ph.k
    index = index or PrefixIndex(ph)
    if ell is None:
        ell = next((b.shape[1] for b in batches if len(b)), 2)
    if len(batches) < k - 2:
        raise ValueError(f"need {k - 2} batches, got {len(batches)}")
    roots = [int(v) for v in ph.part(0) if index.of((int(v),)) >= thresholds.delta[0]]
    if not roots:
        raise WitnessFailure("no_root")
    root = roots[0]
    paths: list[Path] = [(root,)]
    child_edges: dict[Path, tuple[int, ...]] = {}
    active = {(root,): index.of((root,))}
    violations = []
    for j in range(1, k - 1):
        batch = np.asarray(batches[j - 1], dtype=np.int64).reshape(-1, ell)
        nxt: list[Path] = []
        for p in paths:
            bound = thresholds.delta[j]
            w = [x for x in index.extensions(p) if index.of((*p, x)) >= bound]
            if len(w) < thresholds.extension[j - 1]:
                violations.append((p, len(w), thresholds.extension[j - 1]))
            inside = np.isin(batch, np.asarray(w, dtype=np.int64)).all(axis=1) if w else np.zeros(len(batch), bool)
            hits = np.flatnonzero(inside)
            if hits.size == 0:
                raise WitnessFailure("batch_exhausted", j, p)
            children = tuple(int(x) for x in batch[hits[0]])
            child_edges[p] = children
            for c in children:
                active[(*p, c)] = index.of((*p, c))
                nxt.append((*p, c))
        paths = nxt
    s_sets = tuple(index.neighborhood(p) for p in paths)
    return WitnessTree(k, ell, root, child_edges, tuple(paths), s_sets, tuple(violations), active)


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _forcing_holds(tree: WitnessTree) -> bool:
    """Every coloring of the tree vertices with no monochromatic child set
    leaves some root-to-leaf path monochromatic."""
    verts = tree.vertices()
    pos = {v: i for i, v in enumerate(verts)}
    codes = np.arange(1 << len(verts), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(len(verts))) & 1

    def mono(cols: list[int]) -> np.ndarray:
        sub = bits[:, cols]
        return (sub == sub[:, :1]).all(axis=1)

    proper = np.ones(len(codes), dtype=bool)
    for e in tree.child_edges.values():
        proper &= ~mono([pos[v] for v in e])
    some_path = np.zeros(len(codes), dtype=bool)
    for p in tree.leaf_paths:
        some_path |= mono([pos[v] for v in p])
    return bool(some_path[proper].all())


def verify_witness(
    tree: WitnessTree, ph: PartiteHypergraph, batches: Sequence[np.ndarray], index: PrefixIndex | None = None
) -> WitnessCheck:
    """Structure, batch membership, neighborhoods, and the forcing property."""
    k, ell = tree.k, tree.ell
    expected: list[Path] = [(tree.root,)]
    for j in range(1, k - 1):
        nxt = []
        for p in expected:
            e = tree.child_edges.get(p)
            if e is None or len(set(e)) != ell:
                return WitnessCheck(False, f"structure: path {p} lacks {ell} children")
            nxt.extend((*p, c) for c in e)
        expected = nxt
    if list(tree.leaf_paths) != expected or len(tree.child_edges) != (ell ** (k - 2) - 1) // max(ell - 1, 1):
        return WitnessCheck(False, "structure: leaf paths do not match the child sets")
    if len(tree.s_sets) != len(tree.leaf_paths):
        return WitnessCheck(False, "structure: one neighborhood per leaf path expected")
    batch_sets = [{tuple(sorted(r)) for r in np.asarray(b).tolist()} for b in batches]
    for p, e in tree.child_edges.items():
        if tuple(sorted(e)) not in batch_sets[len(p) - 1]:
            return WitnessCheck(False, f"edge-missing: {e} not in batch {len(p)}")
    index = index or PrefixIndex(ph)
    for p, s in zip(tree.leaf_paths, tree.s_sets):
        if index.neighborhood(p) != s:
            return WitnessCheck(False, f"neighborhood mismatch at {p}")
    if not _forcing_holds(tree):
        return WitnessCheck(False, "forcing fails")
    return WitnessCheck(True)


def check_activity(tree: WitnessTree, ph: PartiteHypergraph, thresholds: ActivityThresholds) -> bool:
    """Recompute every recorded path's degree and compare with its level bound."""
    index = PrefixIndex(ph)
    return all(index.of(p) == d and d >= thresholds.delta[len(p) - 1] for p, d in tree.active.items())


def random_batches(ph: PartiteHypergraph, ell: int, count: int, seed: int, levels: int | None = None) -> list[np.ndarray]:
    """``count`` uniform l-sets per level, level j drawn inside ``V_{j+1}``."""
    levels = ph.k - 2 if levels is None else levels
    out = []
    for j in range(levels):
        part = ph.part(j + 1)
        rng = make_rng(seed, j)
        idx = draw_tuples(len(part), ell, count, rng) if len(part) >= ell else np.empty((0, ell), np.int64)
        out.append(np.sort(part[idx], axis=1) if len(idx) else idx)
    return out
