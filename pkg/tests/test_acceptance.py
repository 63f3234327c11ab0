"""End-to-end acceptance suite.

Each test runs one acceptance criterion at its stated scale and
tolerance and prints a single PASS line (visible with pytest -s, or in
the captured output on failure).  The whole module is the exit gate for
the toolkit: it must run green.
"""

import json
import os
import subprocess
import sys
import time
from decimal import Decimal, getcontext

import numpy as np
import pytest

from bsq.bellman import (
    AltKind,
    ArKind,
    MainKind,
    bellman_value,
    certify_nsd,
    check_concavity,
    check_majorization_initial,
    check_majorization_lower,
)
from bsq.certify import (
    random_grid_function,
    random_weight,
    verify_inequality,
    verify_monotonicity,
)
from bsq.dyadic import GridFunction, haar_analyze, haar_synthesize, integral, square_function
from bsq.lp.disc import CircleWeight, DiscGrid, TrigPoly, gstar_sq_disc, verify_thm_disc
from bsq.lp.heat import (
    G_heat,
    Gstar_heat,
    HeatGrid,
    PA_alpha_heat,
    grad_fields,
    gaussian_bump,
    norm_sq,
    truncation_tail,
    verify_thm_heat,
)
from bsq.rng import stream
from bsq.stochastic import ExpWeightSpec, PathConfig, simulate_paths, transform, verify_contmart
from bsq.weights import (
    dyadic_ap_characteristic,
    make_power_weight,
    make_step_weight,
    verify_geom_lemma,
)

getcontext().prec = 50

NSD_SAMPLES = 100_000
NSD_TOL = 1e-9
MAJ_TOL = 1e-12
CONC_TOL = 1e-9
GEOM_TRIALS = 1_000_000
ENGINE_INSTANCES = 1000
HAAR_INSTANCES = 1000
MC_TRIALS = 100_000
MC_STEPS = 1024

MAIN_ALT_CS = (1.1, 2.0, 10.0, 100.0)
AR_GRID = [(c, r) for c in (1.1, 2.0, 10.0) for r in (1.25, 1.5, 1.9)]


def all_kind_instances():
    kinds = [MainKind(c) for c in MAIN_ALT_CS]
    kinds += [AltKind(c) for c in MAIN_ALT_CS]
    kinds += [ArKind(c, r) for c, r in AR_GRID]
    return kinds


def test_criterion_01_bellman_nsd_certification():
    worst = -np.inf
    for kind in all_kind_instances():
        t0 = time.perf_counter()
        rep = certify_nsd(kind, NSD_SAMPLES, seed=101, tol=NSD_TOL)
        elapsed = time.perf_counter() - t0
        assert rep.passed, (kind, rep.max_eigenvalue, rep.worst_point)
        assert elapsed < 60.0, (kind, elapsed)
        worst = max(worst, rep.max_eigenvalue)
    print(f"ACCEPTANCE 1 PASS: nsd certification, 17 parameter sets x 1e5 "
          f"samples, worst scaled eigenvalue {worst:.3e} <= {NSD_TOL}")


def test_criterion_02_majorization_suites():
    worst = -np.inf
    for kind in all_kind_instances():
        r1 = check_majorization_initial(kind, NSD_SAMPLES, seed=103, tol=MAJ_TOL)
        r2 = check_majorization_lower(kind, NSD_SAMPLES, seed=107, tol=MAJ_TOL)
        assert r1.passed, (kind, r1.max_eigenvalue, r1.worst_point)
        assert r2.passed, (kind, r2.max_eigenvalue, r2.worst_point)
        worst = max(worst, r1.max_eigenvalue, r2.max_eigenvalue)
    print(f"ACCEPTANCE 2 PASS: majorization sweeps, worst scaled violation "
          f"{worst:.3e} <= {MAJ_TOL}")


def test_criterion_03_concavity():
    for kind in (MainKind(2.0), ArKind(2.0, 1.5), AltKind(2.0)):
        rep = check_concavity(kind, NSD_SAMPLES, seed=109, tol=CONC_TOL)
        assert rep.passed, (kind, rep.max_eigenvalue, rep.worst_point)

    # worked example, refereed by 50-digit Decimal arithmetic
    k = MainKind(2.0)
    lhs = 2.0 * bellman_value(k, 1.0, 0.0, 1.5, 1.0)
    rhs = bellman_value(k, 0.9, 0.01, 1.4, 1.0) + bellman_value(k, 1.1, 0.01, 1.6, 1.0)

    def b_dec(x, y, w, v):
        x, y, w, v = (Decimal(str(a)) for a in (x, y, w, v))
        t = w * v
        return x * x * w * (2 - 1 / t - t.ln() / 4) - 80 * y * w

    lhs_oracle = float(2 * b_dec(1.0, 0.0, 1.5, 1.0))
    rhs_oracle = float(b_dec(0.9, 0.01, 1.4, 1.0) + b_dec(1.1, 0.01, 1.6, 1.0))
    assert abs(lhs - lhs_oracle) <= 1e-5 and abs(lhs - 3.695902) <= 1e-5
    assert abs(rhs - rhs_oracle) <= 1e-5
    assert rhs_oracle == pytest.approx(1.3971283643629501, abs=1e-12)
    print(f"ACCEPTANCE 3 PASS: concavity sweeps clean; worked example "
          f"lhs={lhs:.6f} rhs={rhs:.6f} vs oracle ({lhs_oracle:.6f}, {rhs_oracle:.6f})")


def test_criterion_04_geometry_sampling_certificate():
    for c in (1.5, 2.0, 10.0):
        for r in (1.5, 2.0):
            cex = verify_geom_lemma(c, r, GEOM_TRIALS, seed=113)
            assert cex is None, (c, r, cex)
    print(f"ACCEPTANCE 4 PASS: segment-doubling certificate, 6 x {GEOM_TRIALS} "
          f"trials, no counterexample")


def test_criterion_05_dyadic_engine():
    iso_worst = 0.0
    for i in range(ENGINE_INSTANCES):
        depth = 4 + (i % 9)  # depths 4..12
        f = random_grid_function(depth, 127, 2 * i)
        w = random_weight(depth, 127, 2 * i + 1, char_cap=100.0)
        c2 = dyadic_ap_characteristic(w, 2.0).characteristic
        assert c2 <= 100.0
        cr = dyadic_ap_characteristic(w, 1.5).characteristic
        for kind in (MainKind(2.0 * c2), AltKind(2.0 * c2), ArKind(2.0 * cr, 1.5)):
            tr = verify_monotonicity(kind, f, w, tol=1e-10)
            assert tr.passed, (i, kind.name, tr.first_violation)
            steps = np.diff(tr.integrals)
            assert np.all(steps <= 1e-10 * (1.0 + np.abs(tr.integrals[:-1])))
            assert tr.integrals[0] <= 1e-12
        for which in ("lower160", "upper128", "upper_ar"):
            out = verify_inequality(f, w, which, r=1.5)
            assert out.passed, (i, which, out.lhs, out.rhs)
        s = square_function(f)
        iso = abs(integral(GridFunction(s.values ** 2))
                  - integral(GridFunction(f.values ** 2)))
        iso_worst = max(iso_worst, iso / (1.0 + integral(GridFunction(f.values ** 2))))
    assert iso_worst <= 1e-12
    print(f"ACCEPTANCE 5 PASS: {ENGINE_INSTANCES} instances, traces "
          f"non-increasing for all kinds, inequalities 160/128/2r-(2-r) hold, "
          f"isometry defect {iso_worst:.2e}")


def test_criterion_06_haar_layer():
    worst_rt, worst_pv = 0.0, 0.0
    for i in range(HAAR_INSTANCES):
        depth = 1 + (i % 12)
        f = random_grid_function(depth, 131, i)
        c = haar_analyze(f)
        back = haar_synthesize(c)
        scale = 1.0 + np.abs(f.values).max()
        worst_rt = max(worst_rt, np.abs(back.values - f.values).max() / scale)
        norm = integral(GridFunction(f.values ** 2))
        worst_pv = max(worst_pv, abs(c.parseval_sum() - norm) / (1.0 + norm))
    assert worst_rt <= 1e-12 and worst_pv <= 1e-12
    f = GridFunction([1.0, 2.0, 3.0, 4.0])
    c = haar_analyze(f)
    assert (c.mean, c.details[0][0]) == (2.5, -1.0)
    assert tuple(c.details[1]) == (-0.5, -0.5)
    s = square_function(f)
    assert integral(GridFunction(s.values ** 2)) == 7.5
    print(f"ACCEPTANCE 6 PASS: {HAAR_INSTANCES} random functions, roundtrip "
          f"defect {worst_rt:.2e}, Parseval defect {worst_pv:.2e}; depth-2 "
          f"example exact")


def test_criterion_07_stochastic_suite():
    t0 = time.perf_counter()
    target_names = ("X2_vs_80c_QV", "QV_vs_32c2_X2", "QV_vs_2_72_c2_X2")
    for lam in (0.3, 0.5, 0.7):
        for integrand in ("unit", "sign"):
            cfg = PathConfig(1.0, MC_STEPS, MC_TRIALS, seed=137)
            rep = verify_contmart(cfg, ExpWeightSpec(lam), integrand)
            by_name = {c.name: c for c in rep.checks}
            assert by_name["Y_normalization"].passed, (lam, integrand)
            assert by_name["YZ_band"].passed and rep.max_yz_deviation <= 1e-12 * (
                1.0 + rep.c_mart
            )
            for name in target_names:
                assert by_name[name].passed, (lam, integrand, name)
    # Girsanov pin: weighted second moment of B_T is T + lam^2 T^2 = 1.25
    cfg = PathConfig(1.0, MC_STEPS, MC_TRIALS, seed=137)
    X, _ = transform(simulate_paths(cfg), "unit")
    y = np.exp(0.5 * X - 0.125)
    x2y = X ** 2 * y
    se = x2y.std(ddof=1) / np.sqrt(x2y.size)
    assert abs(x2y.mean() - 1.25) <= 3.0 * se
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0, elapsed
    print(f"ACCEPTANCE 7 PASS: 6 configurations x 1e5 paths in {elapsed:.0f}s; "
          f"E_Q[X_T^2] = {x2y.mean():.4f} vs analytic 1.25 within 3 SE")


def _disc_family():
    fam = [
        TrigPoly.from_cos_sin(0.0, (np.sqrt(2.0),)),
        TrigPoly.from_cos_sin(0.0, (0.0, 1.0)),
        TrigPoly.from_cos_sin(0.5, (1.0, 0.0, -0.7), (0.3, 0.0, 0.2)),
    ]
    for seed in (139, 149, 151):
        rng = stream(seed)
        c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        c *= np.exp(-0.2 * np.arange(9))
        c[0] = c[0].real
        fam.append(TrigPoly(c))
    return fam


def test_criterion_08_disc_suite():
    grid = DiscGrid()
    worst = 0.0
    for f in _disc_family():
        gs = gstar_sq_disc(f, grid)
        want = f.norm_sq - f.mean ** 2
        if want > 0:
            worst = max(worst, abs(float(np.mean(gs)) - want) / want)
    assert worst <= 0.01
    base = gstar_sq_disc(TrigPoly.from_cos_sin(0.0, (np.sqrt(2.0),)), grid)
    assert abs(float(np.mean(base)) - 1.0) <= 0.01
    for beta in (0.0, 0.3, 0.6, 0.9):
        w = CircleWeight(np.ones(grid.n_angular) + beta * np.cos(grid.theta))
        for f in _disc_family():
            checks = verify_thm_disc(f, w, grid)
            assert all(c["pass"] for c in checks), (beta, checks)
    print(f"ACCEPTANCE 8 PASS: disc energy identity defect {worst:.2%} <= 1%, "
          f"unit-frequency mean within 0.01 of 1, boundary inequalities hold "
          f"for 4 weights x 6 data")


def test_criterion_09_heat_suite():
    grid = HeatGrid()
    worst = 0.0
    for var, center in ((0.25, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 1.5)):
        f = gaussian_bump(grid, var, center)
        lhs = norm_sq(Gstar_heat(f, grid), grid) + truncation_tail(f, grid)
        rhs = norm_sq(f, grid)
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert worst <= 0.02
    f = gaussian_bump(grid, 0.25)
    fields = grad_fields(f, grid)
    gstar = Gstar_heat(f, grid, fields)
    G = G_heat(f, grid, fields)
    eps = 1e-8 * (1.0 + gstar.max())
    assert np.all(G <= np.sqrt(2.0) * gstar + eps)
    for alpha in (0.5, 1.0, 2.0):
        pa = PA_alpha_heat(f, alpha, grid, fields)
        bound = (2.0 * np.pi) ** 0.25 * np.exp(alpha ** 2 / 4.0) * gstar
        assert np.all(pa <= bound + eps), alpha
    weight_family = (
        np.ones(grid.x.size),
        1.0 + 0.5 * np.tanh(grid.x),
        1.0 + 0.9 * np.exp(-grid.x ** 2),
    )
    for w in weight_family:
        checks = verify_thm_heat(f, w, grid)
        assert all(c["pass"] for c in checks), checks
    print(f"ACCEPTANCE 9 PASS: heat energy identity defect {worst:.2%} <= 2%, "
          f"pointwise dominations hold at every grid point, theorem checks "
          f"pass for 3 weights")


def test_criterion_10_weight_layer():
    for seed in (157, 163):
        rng = stream(seed)
        vals = np.exp(1.5 * rng.standard_normal(128))
        w = make_step_weight(vals)
        chars = [dyadic_ap_characteristic(w, p).characteristic
                 for p in (1.2, 1.5, 2.0, 3.0, 4.0)]
        assert all(a >= b * (1 - 1e-13) for a, b in zip(chars, chars[1:]))
    assert dyadic_ap_characteristic(
        make_step_weight([1.0, 1.0, 4.0, 4.0]), 2.0
    ).characteristic == 25.0 / 16.0
    growth = [
        dyadic_ap_characteristic(make_power_weight(0.9, d), 2.0).characteristic
        for d in range(4, 13)
    ]
    assert all(a < b for a, b in zip(growth, growth[1:]))
    print(f"ACCEPTANCE 10 PASS: characteristic monotone in p, two-step weight "
          f"gives exactly 25/16, power-weight growth {growth[0]:.3f} -> "
          f"{growth[-1]:.3f} over depths 4..12")


def test_criterion_11_reproducibility(tmp_path):
    suites = [
        ["geom-lemma", "--c", "2", "--r", "1.5", "--trials", "30000", "--seed", "17"],
        ["simulate-martingale", "--lambda", "0.5", "--steps", "128",
         "--trials", "4000", "--seed", "19"],
    ]
    for i, args in enumerate(suites):
        blobs = []
        for threads in ("1", "4", "16"):
            out = tmp_path / f"rep_{i}_{threads}.json"
            env = dict(os.environ, BSQ_THREADS=threads)
            res = subprocess.run(
                [sys.executable, "-m", "bsq.cli"] + args + ["--out", str(out)],
                capture_output=True, text=True, env=env, timeout=300,
            )
            assert res.returncode == 0, res.stderr
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]
        json.loads(blobs[0])  # well-formed
    print("ACCEPTANCE 11 PASS: byte-identical JSON reports across reruns and "
          "BSQ_THREADS in {1, 4, 16}")
