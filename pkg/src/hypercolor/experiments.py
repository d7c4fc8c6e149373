"""Monte Carlo survival curves for perturbed hypergraphs.

A trial fixes one seed and draws the random l-sets once; the set used at
multiplier rho is the first ``round(rho * n^(l eps/2))`` draws (then
deduplicated).  The sets are therefore nested along the grid, colorability
is monotone along it, and each trial needs only a binary search over the
grid.  The Bernoulli model has no such nesting and is evaluated point by
point.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import isotonic_regression

from .decider import Status, is_two_colorable
from .generators import (
    ComponentLayout,
    PerturbationSpec,
    XYZConstruction,
    build_components,
    build_xyz,
    derive_seed,
    draw_tuples,
    make_rng,
    random_uniform,
    sample_perturbation,
)
from .hypergraph import Hypergraph, InputError, is_proper, load

CSV_COLUMNS = ("n", "k", "ell", "epsilon", "rho", "r_count", "trials", "colorable", "undecided", "survival", "ci_lo", "ci_hi")
JOBS_ENV = "HYPERCOLOR_JOBS"
UNRELIABLE_UNDECIDED = 0.10
BOOTSTRAP_RESAMPLES = 1000

# outcome codes in the trials x grid matrix
NOT_COLORABLE, COLORABLE, UNDECIDED = 0, 1, -1


@dataclass(frozen=True)
class ExperimentConfig:
    """One survival experiment: a base hypergraph, the perturbation, and the grid.

    ``base`` is ``xyz``, ``components``, ``random-uniform`` (``base_edges``
    random k-sets, fresh per trial) or ``file`` (``path``).  Random sets have
    size ``rho * n^(ell * epsilon / 2)`` for each ``rho`` in ``rho_grid``.
    """

    base: str
    n: int
    k: int
    ell: int
    epsilon: float
    rho_grid: tuple[float, ...]
    trials: int = 100
    seed: int = 0
    budget: int | None = None
    model: str = "fixed"
    part_scale: float = 1.0
    base_edges: int = 0
    layout: tuple[tuple[int, int], ...] = ()
    path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho_grid", tuple(float(r) for r in self.rho_grid))
        object.__setattr__(self, "layout", tuple(tuple(int(x) for x in p) for p in self.layout))
        if self.base not in ("xyz", "components", "random-uniform", "file"):
            raise InputError(f"unknown base {self.base!r}")
        if self.model not in ("fixed", "bernoulli"):
            raise InputError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if not self.rho_grid:
            raise InputError("rho_grid must be nonempty")
        if any(r < 0 for r in self.rho_grid) or list(self.rho_grid) != sorted(self.rho_grid):
            raise InputError("rho_grid must be nonnegative and sorted")
        if self.base == "file" and not self.path:
            raise InputError("file base needs a path")

    @property
    def r_unit(self) -> float:
        return self.n ** (self.ell * self.epsilon / 2)

    def r_count(self, rho: float) -> int:
        return int(round(rho * self.r_unit))

    def with_n(self, n: int) -> ExperimentConfig:
        return replace(self, n=n)

    def to_json(self) -> dict:
        d = asdict(self)
        d["rho_grid"] = list(self.rho_grid)
        d["layout"] = [list(p) for p in self.layout]
        return d

    @classmethod
    def from_json(cls, data: dict) -> ExperimentConfig:
        data = dict(data)
        data["rho_grid"] = tuple(data["rho_grid"])
        data["layout"] = tuple(tuple(p) for p in data.get("layout", ()))
        return cls(**data)

    @classmethod
    def load(cls, path: str) -> ExperimentConfig:
        with open(path) as f:
            return cls.from_json(json.load(f))


@lru_cache(maxsize=4)
def _fixed_base(cfg: ExperimentConfig) -> Hypergraph:
    if cfg.base == "xyz":
        return build_xyz(XYZConstruction(cfg.n, cfg.k, cfg.epsilon, cfg.part_scale))
    if cfg.base == "components":
        return build_components(ComponentLayout.of(cfg.layout), cfg.n)
    h = load(cfg.path)
    if h.n != cfg.n:
        raise InputError(f"file holds n = {h.n}, config says n = {cfg.n}")
    return h


def base_hypergraph(cfg: ExperimentConfig, trial: int) -> Hypergraph:
    if cfg.base == "random-uniform":
        return random_uniform(cfg.n, cfg.k, cfg.base_edges, derive_seed(cfg.seed, trial, 1))
    return _fixed_base(cfg)


def trial_seed(cfg: ExperimentConfig, trial: int) -> int:
    """Seed of one trial; the same for every rho so that draws are nested."""
    return derive_seed(cfg.seed, trial)


def perturbation(cfg: ExperimentConfig, trial: int, rho: float) -> np.ndarray:
    count = cfg.r_count(rho)
    if cfg.model == "fixed":
        spec = PerturbationSpec.fixed(count, cfg.ell, trial_seed(cfg, trial))
    else:
        spec = PerturbationSpec.bernoulli(min(1.0, count / math.comb(cfg.n, cfg.ell)), cfg.ell, trial_seed(cfg, trial))
    return sample_perturbation(cfg.n, spec)


def _decide(cfg: ExperimentConfig, base: Hypergraph, rows: np.ndarray) -> tuple[int, int]:
    h = base.with_edges(rows) if len(rows) else base
    res = is_two_colorable(h, budget=cfg.budget)
    if res.status is Status.COLORABLE:
        if not is_proper(h, res.witness):
            raise AssertionError("decider returned an improper witness")
        return COLORABLE, res.nodes
    return (NOT_COLORABLE if res.status is Status.NOT_COLORABLE else UNDECIDED), res.nodes


def run_trial(cfg: ExperimentConfig, trial: int) -> tuple[np.ndarray, np.ndarray]:
    """Outcome and solver nodes per grid point for one trial (nodes -1 where inferred)."""
    grid = cfg.rho_grid
    size = len(grid)
    out = np.full(size, UNDECIDED, dtype=np.int8)
    nodes = np.full(size, -1, dtype=np.int64)
    base = base_hypergraph(cfg, trial)
    if cfg.model == "bernoulli":
        for i, rho in enumerate(grid):
            out[i], nodes[i] = _decide(cfg, base, perturbation(cfg, trial, rho))
        return out, nodes

    counts = [cfg.r_count(r) for r in grid]
    draws = draw_tuples(cfg.n, cfg.ell, max(counts), make_rng(trial_seed(cfg, trial)))

    def probe(i: int) -> int:
        if out[i] == UNDECIDED and nodes[i] < 0:
            out[i], nodes[i] = _decide(cfg, base, draws[: counts[i]])
        return int(out[i])

    # largest colorable index by bisection; nesting makes the answer monotone
    lo, hi = -1, size
    while hi - lo > 1:
        mid = (lo + hi) // 2
        res = probe(mid)
        if res == UNDECIDED:
            for i in range(size):
                probe(i)
            return out, nodes
        if res == COLORABLE:
            lo = mid
        else:
            hi = mid
    out[: lo + 1] = np.where(nodes[: lo + 1] >= 0, out[: lo + 1], COLORABLE)
    out[hi:] = np.where(nodes[hi:] >= 0, out[hi:], NOT_COLORABLE)
    return out, nodes


def _trial_block(cfg: ExperimentConfig, trials: Sequence[int]):
    return [run_trial(cfg, t) for t in trials]


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def run_trials(cfg: ExperimentConfig, jobs: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``trials x grid`` outcome and node matrices; independent of ``jobs``."""
    jobs = default_jobs() if jobs is None else max(1, jobs)
    ids = list(range(cfg.trials))
    if jobs == 1:
        results = _trial_block(cfg, ids)
    else:
        blocks = [ids[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_trial_block, [cfg] * jobs, blocks))
        results = [None] * cfg.trials
        for block, part in zip(blocks, parts):
            for t, r in zip(block, part):
                results[t] = r
    outcomes = np.array([r[0] for r in results], dtype=np.int8).reshape(cfg.trials, -1)
    nodes = np.array([r[1] for r in results], dtype=np.int64).reshape(cfg.trials, -1)
    return outcomes, nodes


# -- curve estimation --------------------------------------------------------


def survival_from(outcomes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per grid point: colorable count, decided count, survival (nan if none decided)."""
    col = (outcomes == COLORABLE).sum(axis=0)
    dec = (outcomes != UNDECIDED).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        surv = np.where(dec > 0, col / np.maximum(dec, 1), np.nan)
    return col, dec, surv


def monotone_fit(survival: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Nonincreasing least-squares fit; points without decided trials are skipped."""
    ok = ~np.isnan(survival) & (weights > 0)
    fit = np.full(len(survival), np.nan)
    if ok.any():
        fit[ok] = isotonic_regression(survival[ok], weights=weights[ok].astype(float), increasing=False).x
    return fit


def crossing(rhos: Sequence[float], fitted: np.ndarray, level: float = 0.5) -> float | None:
    """Where the fitted curve passes ``level``, linearly interpolated; None out of range."""
    pts = [(r, f) for r, f in zip(rhos, fitted) if not np.isnan(f)]
    for (r0, f0), (r1, f1) in zip(pts, pts[1:]):
        if f0 >= level >= f1 and f0 > f1:
            return float(r0 + (f0 - level) / (f0 - f1) * (r1 - r0))
    for r, f in pts:
        if f == level:
            return float(r)
    return None


@dataclass(frozen=True)
class SurvivalCurve:
    config: ExperimentConfig
    r_counts: tuple[int, ...]
    colorable: np.ndarray
    undecided: np.ndarray
    survival: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    fitted: np.ndarray
    mean_nodes: np.ndarray
    crossing: float | None
    crossing_ci: tuple[float, float] | None
    outcomes: np.ndarray = field(repr=False)

    @property
    def rhos(self) -> tuple[float, ...]:
        return self.config.rho_grid

    @property
    def unreliable(self) -> np.ndarray:
        return self.undecided > UNRELIABLE_UNDECIDED * self.config.trials

    @property
    def absolute_crossing(self) -> float | None:
        """Crossing in random-set size rather than multiplier units."""
        return None if self.crossing is None else self.crossing * self.config.r_unit

    def survival_at(self, rho: float) -> float:
        return float(self.survival[self.rhos.index(float(rho))])

    def csv_rows(self) -> list[list]:
        c = self.config
        return [
            [c.n, c.k, c.ell, c.epsilon, rho, r, c.trials, int(col), int(und), float(s), float(lo), float(hi)]
            for rho, r, col, und, s, lo, hi in zip(
                self.rhos, self.r_counts, self.colorable, self.undecided, self.survival, self.ci_lo, self.ci_hi
            )
        ]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_COLUMNS)
        w.writerows(self.csv_rows())
        return buf.getvalue()

    def to_json(self) -> dict:
        def clean(a):
            return [None if (isinstance(x, float) and math.isnan(x)) else x for x in np.asarray(a, float).tolist()]

        return {
            "config": self.config.to_json(),
            "rho": list(self.rhos),
            "r_count": list(self.r_counts),
            "colorable": self.colorable.tolist(),
            "undecided": self.undecided.tolist(),
            "survival": clean(self.survival),
            "ci_lo": clean(self.ci_lo),
            "ci_hi": clean(self.ci_hi),
            "fitted": clean(self.fitted),
            "mean_nodes": clean(self.mean_nodes),
            "unreliable": self.unreliable.tolist(),
            "crossing": self.crossing,
            "crossing_ci": list(self.crossing_ci) if self.crossing_ci else None,
        }


def curve_from_outcomes(cfg: ExperimentConfig, outcomes: np.ndarray, nodes: np.ndarray) -> SurvivalCurve:
    col, dec, surv = survival_from(outcomes)
    fitted = monotone_fit(surv, dec)
    cross = crossing(cfg.rho_grid, fitted)

    rng = make_rng(cfg.seed, 0xB007)
    idx = rng.integers(0, cfg.trials, size=(BOOTSTRAP_RESAMPLES, cfg.trials))
    boot_surv = np.empty((BOOTSTRAP_RESAMPLES, outcomes.shape[1]))
    boot_cross = []
    for b in range(BOOTSTRAP_RESAMPLES):
        sample = outcomes[idx[b]]
        _, bd, bs = survival_from(sample)
        boot_surv[b] = bs
        bc = crossing(cfg.rho_grid, monotone_fit(bs, bd))
        if bc is not None:
            boot_cross.append(bc)
    with np.errstate(invalid="ignore"):
        ci_lo = np.nanpercentile(boot_surv, 2.5, axis=0) if not np.isnan(boot_surv).all() else boot_surv[0]
        ci_hi = np.nanpercentile(boot_surv, 97.5, axis=0) if not np.isnan(boot_surv).all() else boot_surv[0]
    cross_ci = None
    if cross is not None and boot_cross:
        cross_ci = (float(np.percentile(boot_cross, 2.5)), float(np.percentile(boot_cross, 97.5)))
    evaluated = nodes >= 0
    with np.errstate(invalid="ignore", divide="ignore"):
        mean_nodes = np.where(evaluated.any(axis=0), (nodes * evaluated).sum(axis=0) / np.maximum(evaluated.sum(axis=0), 1), np.nan)
    return SurvivalCurve(
        cfg,
        tuple(cfg.r_count(r) for r in cfg.rho_grid),
        col,
        (outcomes == UNDECIDED).sum(axis=0),
        surv,
        np.asarray(ci_lo, float),
        np.asarray(ci_hi, float),
        fitted,
        mean_nodes,
        cross,
        cross_ci,
        outcomes,
    )


def threshold_sweep(cfg: ExperimentConfig, jobs: int | None = None) -> SurvivalCurve:
    """Survival over the whole grid with a monotone fit, 0.5 crossing and bootstrap intervals."""
    outcomes, nodes = run_trials(cfg, jobs)
    return curve_from_outcomes(cfg, outcomes, nodes)


@dataclass(frozen=True)
class PointEstimate:
    rho: float
    r_count: int
    trials: int
    colorable: int
    undecided: int
    survival: float
    unreliable: bool


def survival_probability(cfg: ExperimentConfig, rho: float, jobs: int | None = None) -> PointEstimate:
    """Fraction of trials at multiplier ``rho`` whose perturbed hypergraph is 2-colorable."""
    point = replace(cfg, rho_grid=(float(rho),))
    outcomes, _ = run_trials(point, jobs)
    col, dec, surv = survival_from(outcomes)
    und = int(cfg.trials - dec[0])
    return PointEstimate(
        float(rho), point.r_count(rho), cfg.trials, int(col[0]), und, float(surv[0]), und > UNRELIABLE_UNDECIDED * cfg.trials
    )


@dataclass(frozen=True)
class ScalingResult:
    n: tuple[int, ...]
    crossing: tuple[float | None, ...]
    absolute: tuple[float | None, ...]
    omitted: tuple[int, ...]
    slope: float | None
    intercept: float | None
    residuals: tuple[float, ...]
    curves: tuple[SurvivalCurve, ...] = field(repr=False, default=())

    def to_json(self) -> dict:
        return {
            "n": list(self.n),
            "crossing": list(self.crossing),
            "absolute": list(self.absolute),
            "omitted": list(self.omitted),
            "slope": self.slope,
            "intercept": self.intercept,
            "residuals": list(self.residuals),
        }


def scaling_check(cfg: ExperimentConfig, n_list: Sequence[int], jobs: int | None = None) -> ScalingResult:
    """Least-squares slope of log(absolute crossing) against log n."""
    if len(n_list) < 3:
        raise InputError("scaling needs at least 3 values of n")
    curves = [threshold_sweep(cfg.with_n(int(n)), jobs) for n in n_list]
    absolute = [c.absolute_crossing for c in curves]
    kept = [(n, a) for n, a in zip(n_list, absolute) if a is not None and a > 0]
    omitted = tuple(int(n) for n, a in zip(n_list, absolute) if a is None or a <= 0)
    slope = intercept = None
    residuals: tuple[float, ...] = ()
    if len(kept) >= 2:
        x = np.log([n for n, _ in kept])
        y = np.log([a for _, a in kept])
        slope, intercept = (float(v) for v in np.polyfit(x, y, 1))
        residuals = tuple(float(r) for r in y - (slope * x + intercept))
    return ScalingResult(
        tuple(int(n) for n in n_list), tuple(c.crossing for c in curves), tuple(absolute), omitted,
        slope, intercept, residuals, tuple(curves),
    )


def gnuplot_script(csv_path: str, output: str = "survival.png", title: str = "survival") -> str:
    """A gnuplot script drawing survival with its interval against rho from a sweep CSV."""
    return "\n".join(
        [
            "set datafile separator ','",
            "set terminal pngcairo size 800,500",
            f"set output '{output}'",
            f"set title '{title}'",
            "set xlabel 'rho'",
            "set ylabel 'survival probability'",
            "set logscale x",
            "set yrange [0:1.05]",
            "set key top right",
            f"plot '{csv_path}' every ::1 using 5:11:12 with filledcurves fs transparent solid 0.2 title '95% interval', \\",
            f"     '{csv_path}' every ::1 using 5:10 with linespoints pt 7 title 'survival'",
            "",
        ]
    )
