"""Command line entry point: ``hypercolor <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import experiments as ex
from .decider import brute_force_two_colorable, is_two_colorable
from .generators import (
    ComponentLayout,
    PerturbationSpec,
    XYZConstruction,
    build_components,
    build_xyz,
    perturb,
    sample_perturbation,
)
from .hypergraph import InputError, load, save
from .procedures import (
    ActivityThresholds,
    ReductionFailed,
    WitnessFailure,
    check_family_invariants,
    extract_families,
    grow_witness_tree,
    k_partite_reduction,
    prove_non_colorable,
    regularize_degrees,
    stage_batches,
    verify_witness,
)

log = logging.getLogger("hypercolor")


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, default=float)
    if path:
        with open(path, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_generate(args) -> int:
    if args.kind == "xyz":
        spec = XYZConstruction(args.n, args.k, args.epsilon, args.part_scale)
        h = build_xyz(spec)
        log.info("|X| = |Y| = %d, |Z| = %d, %d edges", spec.part_size, len(spec.z), h.num_edges)
    else:
        layout = ComponentLayout.of(json.loads(args.layout))
        h = build_components(layout, args.n if args.n is not None else layout.size)
    save(h, args.out)
    return 0


def cmd_perturb(args) -> int:
    h = load(args.inp)
    if args.count is not None:
        spec = PerturbationSpec.fixed(args.count, args.ell, args.seed)
    else:
        spec = PerturbationSpec.bernoulli(args.prob, args.ell, args.seed)
    r = sample_perturbation(h.n, spec)
    save(perturb(h, r), args.out)
    log.info("added %d distinct %d-sets", len(r), args.ell)
    return 0


def cmd_decide(args) -> int:
    h = load(args.inp)
    res = brute_force_two_colorable(h) if args.brute_force else is_two_colorable(h, budget=args.budget)
    _emit({"n": h.n, "edges": h.num_edges, **res.to_json()}, args.report)
    return int(res.status)


def cmd_extract_families(args) -> int:
    g = load(args.inp)
    fx = extract_families(g, args.delta, args.ell)
    report = fx.to_json()
    report["invariants"] = vars(check_family_invariants(fx))
    _emit(report, args.report)
    return 0


def _regularized(args):
    h = load(args.inp)
    ph0 = k_partite_reduction(h, args.trials, args.seed)
    ph, buckets = regularize_degrees(ph0, args.epsilon, args.ell)
    return h, ph, buckets


def cmd_grow_witness(args) -> int:
    try:
        h, ph, _ = _regularized(args)
    except ReductionFailed as exc:
        _emit({"status": "reduction_failed", "reason": str(exc)}, args.report)
        return 1
    thresholds = ActivityThresholds.from_constants(ph, args.epsilon, args.ell)
    stages, _ = stage_batches(h.n, ph.k, args.ell, 1, args.batch_size, args.seed)
    report = {"alpha": ph.alpha, "constants": ph.constants.to_json(), "activity": list(thresholds.delta)}
    try:
        tree = grow_witness_tree(ph, stages[0], thresholds)
    except WitnessFailure as exc:
        report.update(status="failure", reason=exc.reason, level=exc.level, path=exc.path)
        _emit(report, args.report)
        return 1
    check = verify_witness(tree, ph, stages[0])
    report.update(status="success", tree=tree.to_json(), verified=check.ok, verify_reason=check.reason)
    _emit(report, args.report)
    return 0


def cmd_run_stages(args) -> int:
    h = load(args.inp)
    try:
        run = prove_non_colorable(h, args.epsilon, args.ell, args.rho, args.seed, args.trials, args.max_stages, args.budget)
    except ReductionFailed as exc:
        _emit({"verdict": "inconclusive", "reason": str(exc)}, args.report)
        return 2
    _emit(run.to_json(), args.report)
    return {"colorable": 0, "non_2_colorable": 1}.get(run.ledger.verdict, 2)


def cmd_sweep(args) -> int:
    cfg = ex.ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    curve = ex.threshold_sweep(cfg, args.jobs)
    with open(args.out, "w") as f:
        f.write(curve.to_csv())
    if args.report:
        _emit(curve.to_json(), args.report)
    if args.gnuplot:
        with open(args.gnuplot, "w") as f:
            f.write(ex.gnuplot_script(args.out))
    if curve.unreliable.any():
        log.warning("more than 10%% undecided trials at some grid points")
    log.info("crossing rho* = %s", curve.crossing)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypercolor", description="2-colorability of randomly perturbed hypergraphs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a base hypergraph")
    gsub = g.add_subparsers(dest="kind", required=True)
    gx = gsub.add_parser("xyz", help="all k-sets with one vertex in X, one in Y, the rest in Z")
    gx.add_argument("--n", type=int, required=True)
    gx.add_argument("--k", type=int, required=True)
    gx.add_argument("--epsilon", type=float, required=True)
    gx.add_argument("--part-scale", type=float, default=1.0)
    gx.add_argument("--out", required=True)
    gc = gsub.add_parser("components", help="disjoint complete bipartite graphs")
    gc.add_argument("--layout", required=True, help='JSON list of [a, b] side sizes, e.g. "[[4,4],[2,2]]"')
    gc.add_argument("--n", type=int)
    gc.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    pp = sub.add_parser("perturb", help="add random l-sets")
    pp.add_argument("--in", dest="inp", required=True)
    pp.add_argument("--ell", type=int, required=True)
    amount = pp.add_mutually_exclusive_group(required=True)
    amount.add_argument("--count", type=int)
    amount.add_argument("--prob", type=float)
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=cmd_perturb)

    d = sub.add_parser("decide", help="exact 2-colorability; exit 0/1/2 = colorable/not/undecided")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--brute-force", action="store_true")
    d.add_argument("--budget", type=int)
    d.add_argument("--report")
    d.set_defaults(func=cmd_decide)

    f = sub.add_parser("extract-families", help="greedy families with disjoint neighborhoods")
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--delta", type=float, required=True)
    f.add_argument("--ell", type=int, required=True)
    f.add_argument("--report")
    f.set_defaults(func=cmd_extract_families)

    for name, func, helptext in (
        ("grow-witness", cmd_grow_witness, "grow and verify one witness tree"),
        ("run-stages", cmd_run_stages, "staged non-colorability procedure"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--in", dest="inp", required=True)
        s.add_argument("--epsilon", type=float, required=True)
        s.add_argument("--ell", type=int, required=True)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--trials", type=int, default=20, help="random partitions tried")
        s.add_argument("--report")
        s.set_defaults(func=func)
        if name == "grow-witness":
            s.add_argument("--batch-size", type=int, default=100)
        else:
            s.add_argument("--rho", type=float, required=True)
            s.add_argument("--max-stages", type=int, default=64)
            s.add_argument("--budget", type=int)

    sw = sub.add_parser("sweep", help="survival curve over a rho grid")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--jobs", type=int, help=f"worker processes (default ${ex.JOBS_ENV} or 1)")
    sw.add_argument("--report")
    sw.add_argument("--gnuplot", help="also write a gnuplot script for the CSV")
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
