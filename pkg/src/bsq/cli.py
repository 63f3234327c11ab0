"""Command-line entry point: seeded verification suites, JSON/CSV reports.

Every run is fully determined by (subcommand, parameters, seed); reports
are byte-identical across reruns and across BSQ_THREADS settings (the
kernels are vectorized, not threaded, so the cap is honored trivially).
Wall time goes to stderr, never into the report, to keep bytes stable.

Exit codes: 0 all checks pass, 1 at least one violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, bellman, certify, stochastic, weights
from .lp import disc as lpdisc
from .lp import heat as lpheat

_CSV_HEADER = "name,lhs,rhs,margin,pass"


def _check(name, lhs, rhs, passed) -> dict:
    return {
        "name": name,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "margin": float(rhs) - float(lhs),
        "pass": bool(passed),
    }


def _cert_to_check(name: str, rep: bellman.CertReport, tol: float) -> dict:
    return _check(name, rep.max_eigenvalue, tol, rep.passed)


# -- subcommand runners ------------------------------------------------------


def _run_certify_bellman(args) -> list[dict]:
    kind = _make_kind(args.kind, args.c, args.r)
    checks = [
        _cert_to_check(
            "nsd", bellman.certify_nsd(kind, args.samples, args.seed, args.tol), args.tol
        ),
        _cert_to_check(
            "majorization_initial",
            bellman.check_majorization_initial(kind, args.samples, args.seed + 1),
            1e-12,
        ),
        _cert_to_check(
            "majorization_lower",
            bellman.check_majorization_lower(kind, args.samples, args.seed + 2),
            1e-12,
        ),
        _cert_to_check(
            "concavity",
            bellman.check_concavity(kind, args.samples, args.seed + 3),
            1e-9,
        ),
    ]
    return checks


def _make_kind(name: str, c: float, r: float):
    if name == "main":
        return bellman.MainKind(c)
    if name == "ar":
        return bellman.ArKind(c, r)
    if name == "alt":
        return bellman.AltKind(c)
    raise ValueError(f"unknown kind {name!r}")


def _run_verify_dyadic(args) -> list[dict]:
    kind_for = {
        "lower160": lambda c2, cr: bellman.MainKind(2.0 * c2),
        "upper128": lambda c2, cr: bellman.AltKind(2.0 * c2),
        "upper_ar": lambda c2, cr: bellman.ArKind(2.0 * cr, args.r),
    }
    checks = []
    for i in range(args.instances):
        f = certify.random_grid_function(args.depth, args.seed, 2 * i)
        w = certify.random_weight(args.depth, args.seed, 2 * i + 1)
        out = certify.verify_inequality(f, w, args.which, args.r)
        c2 = weights.dyadic_ap_characteristic(w, 2.0).characteristic
        cr = weights.dyadic_ap_characteristic(w, args.r).characteristic
        trace = certify.verify_monotonicity(kind_for[args.which](c2, cr), f, w)
        rec = _check(f"instance_{i}", out.lhs, out.rhs, out.passed and trace.passed)
        rec.update(
            which=args.which,
            depth=args.depth,
            characteristic=out.characteristic,
            trace=[float(t) for t in trace.integrals],
        )
        checks.append(rec)
    return checks


def _run_geom_lemma(args) -> list[dict]:
    cex = weights.verify_geom_lemma(args.c, args.r, args.trials, args.seed)
    if cex is None:
        return [_check("no_counterexample", 0.0, 1.0, True)]
    rec = _check("counterexample_product_max", cex.product_max, 2.0 * args.c, False)
    rec["witness"] = {
        "P": list(cex.P), "Q": list(cex.Q), "R": list(cex.R),
        "product_min": cex.product_min,
    }
    return [rec]


def _run_simulate_martingale(args) -> list[dict]:
    cfg = stochastic.PathConfig(args.T, args.steps, args.trials, args.seed)
    spec = stochastic.ExpWeightSpec(getattr(args, "lam"))
    rep = stochastic.verify_contmart(cfg, spec, args.integrand)
    return [_check(c.name, c.lhs, c.rhs, c.passed) for c in rep.checks]


def _run_lp_disc(args) -> list[dict]:
    grid = lpdisc.DiscGrid(args.radial, args.angular)
    f = lpdisc.TrigPoly.from_cos_sin(0.0, (np.sqrt(2.0),))
    checks = [
        _check(
            "log_area_pi_over_2",
            abs(grid.log_area_integral() - np.pi / 2.0),
            1e-10,
            abs(grid.log_area_integral() - np.pi / 2.0) <= 1e-10,
        )
    ]
    gs = lpdisc.gstar_sq_disc(f, grid)
    checks.append(
        _check("gstar_sq_mean_cos", abs(float(np.mean(gs)) - 1.0), 0.01,
               abs(float(np.mean(gs)) - 1.0) <= 0.01)
    )
    for beta in args.beta:
        w = lpdisc.CircleWeight(1.0 + beta * np.cos(grid.theta))
        for item in lpdisc.verify_thm_disc(f, w, grid):
            checks.append(
                _check(f"beta{beta:g}_{item['name']}", item["lhs"], item["rhs"], item["pass"])
            )
    return checks


def _run_lp_heat(args) -> list[dict]:
    grid = lpheat.HeatGrid()
    f = lpheat.gaussian_bump(grid, variance=args.variance)
    checks = []
    fields = lpheat.grad_fields(f, grid)
    gs = lpheat.Gstar_heat(f, grid, fields)
    lhs = lpheat.norm_sq(gs, grid) + lpheat.truncation_tail(f, grid)
    rhs = lpheat.norm_sq(f, grid)
    checks.append(
        _check("energy_identity", abs(lhs - rhs), 0.02 * rhs, abs(lhs - rhs) <= 0.02 * rhs)
    )
    w = 1.0 + 0.5 * np.tanh(grid.x)
    for item in lpheat.verify_thm_heat(f, w, grid):
        checks.append(_check(item["name"], item["lhs"], item["rhs"], item["pass"]))
    return checks


def _run_search_extremizer(args) -> list[dict]:
    res = certify.extremizer_search(args.which, args.depth, args.budget, args.seed, args.r)
    ceiling = {"lower160": 160.0, "upper128": 128.0, "upper_ar": 2 * args.r / (2 - args.r)}[
        args.which
    ]
    return [_check("observed_constant", res.best_ratio, ceiling, res.best_ratio <= ceiling)]


def _run_ap_probe(args) -> list[dict]:
    w = weights.make_power_weight(args.alpha, args.depth)
    curve = weights.cf_epsilon_probe(w, args.p, args.r_grid)
    checks = []
    prev = None
    for r, char in curve:
        ok = prev is None or char <= prev * (1.0 + 1e-12)
        checks.append(_check(f"char_r{r:g}", char, prev if prev is not None else char, ok))
        prev = char
    return checks


# -- plumbing ----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsq", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("certify-bellman", help="sampling certificates for one kind")
    sp.add_argument("--kind", choices=("main", "ar", "alt"), required=True)
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--r", type=float, default=1.5)
    sp.add_argument("--samples", type=int, default=100000)
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp)
    sp.set_defaults(fn=_run_certify_bellman)

    sp = sub.add_parser("verify-dyadic", help="random-instance inequality harness")
    sp.add_argument("--which", choices=certify.INEQ_NAMES, required=True)
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--r", type=float, default=1.5)
    common(sp)
    sp.set_defaults(fn=_run_verify_dyadic)

    sp = sub.add_parser("geom-lemma", help="segment-doubling sampling certificate")
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--r", type=float, default=2.0)
    sp.add_argument("--trials", type=int, default=100000)
    common(sp)
    sp.set_defaults(fn=_run_geom_lemma)

    sp = sub.add_parser("simulate-martingale", help="weighted martingale Monte Carlo")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.5)
    sp.add_argument("--T", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=1024)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--integrand", choices=stochastic.INTEGRANDS, default="unit")
    common(sp)
    sp.set_defaults(fn=_run_simulate_martingale)

    sp = sub.add_parser("lp-disc", help="disc square-function suite")
    sp.add_argument("--radial", type=int, default=64)
    sp.add_argument("--angular", type=int, default=1024)
    sp.add_argument("--beta", type=float, nargs="*", default=[0.3, 0.6, 0.9])
    common(sp)
    sp.set_defaults(fn=_run_lp_disc)

    sp = sub.add_parser("lp-heat", help="heat square-function suite")
    sp.add_argument("--variance", type=float, default=0.25)
    common(sp)
    sp.set_defaults(fn=_run_lp_heat)

    sp = sub.add_parser("search-extremizer", help="hill-climb the observed constant")
    sp.add_argument("--which", choices=certify.INEQ_NAMES, required=True)
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--r", type=float, default=1.5)
    common(sp)
    sp.set_defaults(fn=_run_search_extremizer)

    sp = sub.add_parser("ap-probe", help="characteristic curve of a power weight")
    sp.add_argument("--alpha", type=float, default=0.9)
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--r-grid", type=float, nargs="*", default=[1.25, 1.5, 1.75, 2.0])
    common(sp)
    sp.set_defaults(fn=_run_ap_probe)

    return p


def _config_echo(args) -> dict:
    skip = {"fn", "out", "format", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = [_CSV_HEADER]
        for c in report["checks"]:
            lines.append(
                f"{c['name']},{c['lhs']!r},{c['rhs']!r},{c['margin']!r},{c['pass']}"
            )
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    # honored as an upper bound; the kernels are single-threaded numpy,
    # so any value yields identical output
    os.environ.setdefault("BSQ_THREADS", "1")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    t0 = time.perf_counter()
    try:
        checks = args.fn(args)
    except (ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "schema": 1,
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    _emit(report, args)
    wall = time.perf_counter() - t0
    print(f"{args.command}: {'PASS' if report['pass'] else 'FAIL'} "
          f"({len(checks)} checks, {wall:.2f}s)", file=sys.stderr)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
