"""Adversarial base hypergraphs and the two random-perturbation models.

Everything here is a pure function of its arguments and a seed.  Child seeds
for batches and trials come from :func:`derive_seed`, so stages and Monte
Carlo trials are independent of one another and reproducible in isolation.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hypergraph import Hypergraph, InputError

_CHUNK = 1024


class ConstructionError(InputError):
    """The requested construction does not fit in the vertex budget."""


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit child seed determined by ``seed`` and an index path."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys)))
    )


# -- the two-part construction -------------------------------------------


@dataclass(frozen=True)
class XYZConstruction:
    """Vertex split ``[n] = X + Y + Z`` with ``|X| = |Y| = ceil(scale * n^(1-eps/2))``.

    ``part_scale`` exposes the constant hidden in the asymptotic part size; the
    default of 1 is the literal size.  X, Y and Z occupy consecutive index
    ranges in that order.
    """

    n: int
    k: int
    epsilon: float
    part_scale: float = 1.0
    ell: int | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ConstructionError("k must be at least 2")
        if self.epsilon < 0:
            raise ConstructionError("epsilon must be nonnegative")
        if self.ell is not None and self.epsilon >= 2 / self.ell:
            raise ConstructionError(f"epsilon must be below 2/ell = {2 / self.ell:.4g}")
        if 2 * self.part_size > self.n:
            raise ConstructionError(f"|X| = |Y| = {self.part_size} does not fit in n = {self.n}")

    @property
    def part_size(self) -> int:
        # the 1e-9 guard keeps exact powers (e.g. 64^0.5) from rounding up
        return max(1, math.ceil(self.part_scale * self.n ** (1 - self.epsilon / 2) - 1e-9))

    @property
    def x(self) -> range:
        return range(0, self.part_size)

    @property
    def y(self) -> range:
        return range(self.part_size, 2 * self.part_size)

    @property
    def z(self) -> range:
        return range(2 * self.part_size, self.n)

    @property
    def expected_edges(self) -> int:
        return self.part_size**2 * math.comb(len(self.z), self.k - 2)

    def canonical_coloring(self, z_colors: Sequence[int] | np.ndarray | None = None) -> np.ndarray:
        """X colored 1, Y colored 2, Z as given (default all 1)."""
        c = np.ones(self.n, dtype=np.int64)
        c[self.y.start : self.y.stop] = 2
        if z_colors is not None:
            c[self.z.start : self.z.stop] = np.asarray(z_colors, dtype=np.int64)
        return c


def build_xyz(spec: XYZConstruction) -> Hypergraph:
    """All k-sets with one vertex in X, one in Y and k-2 in Z."""
    z = np.arange(spec.z.start, spec.z.stop, dtype=np.int64)
    if len(z) < spec.k - 2:
        raise ConstructionError(f"|Z| = {len(z)} < k - 2 = {spec.k - 2}")
    if spec.k == 2:
        tails = np.empty((1, 0), dtype=np.int64)
    elif spec.k == 3:
        tails = z[:, None]
    else:
        tails = np.array(list(combinations(z.tolist(), spec.k - 2)), dtype=np.int64)
    x = np.arange(spec.x.start, spec.x.stop, dtype=np.int64)
    y = np.arange(spec.y.start, spec.y.stop, dtype=np.int64)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    heads = np.column_stack([xx.ravel(), yy.ravel()])
    rows = np.concatenate(
        [np.repeat(heads, len(tails), axis=0), np.tile(tails, (len(heads), 1))], axis=1
    )
    return Hypergraph._trusted(spec.n, {spec.k: rows})


# -- bipartite components ------------------------------------------------


@dataclass(frozen=True)
class ComponentLayout:
    """Side sizes ``(a_i, b_i)`` of disjoint complete bipartite components."""

    sides: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a, b in self.sides:
            if not a >= b >= 1:
                raise InputError(f"component sides must satisfy a >= b >= 1, got ({a}, {b})")

    @classmethod
    def of(cls, sides: Sequence[Sequence[int]]) -> ComponentLayout:
        return cls(tuple((int(a), int(b)) for a, b in sides))

    @property
    def size(self) -> int:
        return sum(a + b for a, b in self.sides)

    def parts(self) -> list[tuple[range, range]]:
        """Index ranges ``(A_i, B_i)`` of each component, laid out consecutively."""
        out, start = [], 0
        for a, b in self.sides:
            out.append((range(start, start + a), range(start + a, start + a + b)))
            start += a + b
        return out


def build_components(layout: ComponentLayout, n: int) -> Hypergraph:
    if layout.size > n:
        raise InputError(f"layout needs {layout.size} vertices but n = {n}")
    rows = [
        np.array([(u, v) for u in a for v in b], dtype=np.int64).reshape(-1, 2)
        for a, b in layout.parts()
    ]
    if not rows:
        return Hypergraph(n)
    return Hypergraph._trusted(n, {2: np.concatenate(rows)})


# -- random perturbations -------------------------------------------------


@dataclass(frozen=True)
class PerturbationSpec:
    """Either ``count`` draws with replacement or each ell-set with probability ``prob``."""

    ell: int
    seed: int
    count: int | None = None
    prob: float | None = None

    def __post_init__(self):
        if self.ell < 2:
            raise InputError("ell must be at least 2")
        if (self.count is None) == (self.prob is None):
            raise InputError("give exactly one of count or prob")
        if self.count is not None and self.count < 0:
            raise InputError("count must be nonnegative")
        if self.prob is not None and not 0 <= self.prob <= 1:
            raise InputError("prob must lie in [0, 1]")

    @classmethod
    def fixed(cls, count: int, ell: int, seed: int) -> PerturbationSpec:
        return cls(ell=ell, seed=seed, count=int(count))

    @classmethod
    def bernoulli(cls, prob: float, ell: int, seed: int) -> PerturbationSpec:
        return cls(ell=ell, seed=seed, prob=float(prob))

    def matched_prob(self, n: int) -> float:
        if self.prob is not None:
            return self.prob
        return min(1.0, self.count / math.comb(n, self.ell))

    def matched_count(self, n: int) -> float:
        if self.count is not None:
            return self.count
        return self.prob * math.comb(n, self.ell)


def draw_tuples(n: int, ell: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform ell-sets (sorted rows, repeats possible).

    Each draw picks ell vertices and is rejected if any repeat.  Candidates are
    generated in fixed-size chunks, so the first ``m`` rows do not depend on
    ``count``: a longer draw extends a shorter one with the same generator.
    """
    if ell > n:
        raise InputError(f"ell = {ell} exceeds n = {n}")
    out = np.empty((count, ell), dtype=np.int64)
    if count == 0:
        return out
    accept_rate = math.prod((n - j) / n for j in range(ell))
    if accept_rate < 1e-3:
        for i in range(count):
            out[i] = np.sort(rng.choice(n, size=ell, replace=False))
        return out
    filled = 0
    while filled < count:
        cand = np.sort(rng.integers(0, n, size=(_CHUNK, ell)), axis=1)
        ok = cand[(cand[:, 1:] != cand[:, :-1]).all(axis=1)]
        take = min(len(ok), count - filled)
        out[filled : filled + take] = ok[:take]
        filled += take
    return out


def _distinct_tuples(n: int, ell: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """A uniformly random set of ``count`` distinct ell-sets."""
    seen: dict[tuple[int, ...], None] = {}
    while len(seen) < count:
        for row in draw_tuples(n, ell, count - len(seen), rng).tolist():
            seen.setdefault(tuple(row), None)
            if len(seen) == count:
                break
    return np.array(list(seen), dtype=np.int64).reshape(count, ell)


def sample_perturbation(n: int, spec: PerturbationSpec) -> np.ndarray:
    """Sample the random ell-sets of ``spec`` as distinct sorted rows."""
    if spec.ell > n:
        raise InputError(f"ell = {spec.ell} exceeds n = {n}")
    rng = make_rng(spec.seed)
    if spec.count is not None:
        rows = draw_tuples(n, spec.ell, spec.count, rng)
        return Hypergraph(n, rows).block(spec.ell).copy() if len(rows) else rows
    total = math.comb(n, spec.ell)
    if total <= 200_000 or spec.prob > 0.25:
        combos = np.array(list(combinations(range(n), spec.ell)), dtype=np.int64)
        return combos[rng.random(len(combos)) < spec.prob]
    return _distinct_tuples(n, spec.ell, int(rng.binomial(total, spec.prob)), rng)


def perturb(h: Hypergraph, r: np.ndarray | Sequence[Sequence[int]]) -> Hypergraph:
    """``h`` plus the random sets ``r``, duplicates collapsed; ``h`` is untouched."""
    return h.with_edges(r)


def random_uniform(n: int, k: int, m: int, seed: int) -> Hypergraph:
    """A k-uniform hypergraph with exactly ``m`` distinct uniformly random edges."""
    if m > math.comb(n, k):
        raise InputError(f"cannot place {m} distinct {k}-sets on {n} vertices")
    if m == 0:
        return Hypergraph(n)
    return Hypergraph._trusted(n, {k: _distinct_tuples(n, k, m, make_rng(seed))})


def random_graph(n: int, m: int, seed: int) -> Hypergraph:
    return random_uniform(n, 2, m, seed)
