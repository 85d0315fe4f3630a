"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.  Tolerances and calibrated constants
are pinned below; see the comments next to each for where they come from.
"""
import math
import sys
import time

import numpy as np
import pytest

from toeprod.eigen import det
from toeprod.ldp import legendre, rate_function
from toeprod.matrices import ar1_inverse_tridiagonal, toeplitz_section, widom_residual
from toeprod.spectrum import (
    convergence_sweep,
    example1_limits,
    example_pair,
    localization_profile,
    product_spectrum,
    szego_average,
)
from toeprod.gauss import SimulationConfig, simulate_quadratic_forms, tail_study
from toeprod.symbol import AR1Density, constant, cosine, sup_norm, trig_poly

# 1: Widom identity
WIDOM_TOL = 1e-10
WIDOM_ORDERS = (4, 8, 16, 32)
WIDOM_SECONDS = 5.0
# 2: AR(1) inverse
AR1_TOL = 1e-10
AR1_THETAS = (-0.9, -0.5, -0.3, 0.3, 0.5, 0.9)
AR1_ORDERS = (1, 8, 64)
AR1_SECONDS = 5.0
# 3: convergence for a = -1, theta = 0.5
CONV_ORDERS = (32, 64, 128, 256, 512)
CONV_SECONDS = 120.0
# calibration at n = 1024 gave |lambda_min + 1| = 1.1e-16 (the limit is an
# isolated eigenvalue, so convergence is exponential); the floor leaves room
# for roundoff growth with n
CONV_MIN_TOL = 1e-12
# 4: theta = 0 reduction
REDUCTION_TOL = 1e-9
REDUCTION_ORDERS = (8, 64, 256)
# 5: norm bound
NORM_SLACK = 1e-9
# 6: transpose symmetry
TRANSPOSE_TOL = 1e-9
TRANSPOSE_PAIRS = 10
TRANSPOSE_ORDER = 64
# 7: Szego averages
TRACE_TOL = 1e-10
# 8: rate function
J_MU_TOL = 1e-8
J_GRID = 200
SLOPE_TOL = 1e-6
CLOSED_FORM_TOL = 1e-8
# 9: localization
LOC_ORDERS = (64, 128, 256, 512)
LOC_EPS = 1 / 8
# 10: Monte Carlo; thresholds fixed from a calibration run with seed 12345
# (empirical/J ratios 1.33, 1.44, 1.66, 1.41; counts 346 .. 4507)
MC_N = 200
MC_REPLICATES = 10 ** 6
MC_SEED = 20240601
MC_LOWER = (-0.95, -0.9)
MC_UPPER = (-0.5, -0.45)
MC_FACTOR = 2.0
MC_SECONDS = 600.0


def _real_trig(rng, deg, complex_coeffs=True):
    c = {0: rng.standard_normal()}
    for k in range(1, deg + 1):
        z = complex(*rng.standard_normal(2)) if complex_coeffs else complex(rng.standard_normal())
        c[k], c[-k] = z, z.conjugate()
    return trig_poly(c)


def _positive_trig(rng, deg):
    p = _real_trig(rng, deg)
    c = dict(p.coeff_table)
    c[0] = sum(2 * abs(c.get(k, 0)) for k in range(1, deg + 1)) + 0.1 + abs(rng.standard_normal())
    return trig_poly(c)


def check_1():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    count = 0
    for df in range(5):
        for dg in range(5):
            for _ in range(2):
                f = trig_poly({k: complex(*rng.standard_normal(2)) for k in range(-df, df + 1)})
                g = trig_poly({k: complex(*rng.standard_normal(2)) for k in range(-dg, dg + 1)})
                for n in WIDOM_ORDERS:
                    worst = max(worst, widom_residual(f, g, n, band=max(1, df, dg)))
                    count += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= WIDOM_TOL and elapsed < WIDOM_SECONDS
    return ok, f"{count} cases, max residual {worst:.2e} (tol {WIDOM_TOL:g})", elapsed


def check_2():
    t0 = time.perf_counter()
    worst_id = worst_det = 0.0
    for theta in AR1_THETAS:
        for n in AR1_ORDERS:
            Ginv = ar1_inverse_tridiagonal(theta, n)
            prod = toeplitz_section(AR1Density(theta), n) @ Ginv
            worst_id = max(worst_id, np.abs(prod - np.eye(n + 1)).max())
            worst_det = max(worst_det, abs(det(Ginv) - (1 - theta ** 2)))
    elapsed = time.perf_counter() - t0
    ok = worst_id <= AR1_TOL and worst_det <= AR1_TOL and elapsed < AR1_SECONDS
    return ok, f"identity err {worst_id:.2e}, det err {worst_det:.2e}", elapsed


def check_3():
    t0 = time.perf_counter()
    f, g = example_pair(-1.0, 0.5)
    rep = convergence_sweep(f, g, CONV_ORDERS, reference=example1_limits(-1.0, 0.5))
    elapsed = time.perf_counter() - t0
    emin, emax = rep.errors_min, rep.errors_max
    combined = np.maximum(emin, emax)
    decreasing = bool(np.all(np.diff(combined) < 0) and np.all(np.diff(emax) < 0))
    floor_ok = bool(np.all(emin <= CONV_MIN_TOL))
    ok = decreasing and floor_ok and elapsed < CONV_SECONDS
    detail = (
        f"err_max {', '.join(f'{e:.2e}' for e in emax)}; "
        f"err_min max {emin.max():.1e} (tol {CONV_MIN_TOL:g}); final err_min {emin[-1]:.1e}"
    )
    return ok, detail, elapsed


def check_4():
    t0 = time.perf_counter()
    worst = 0.0
    for n in REDUCTION_ORDERS:
        res = product_spectrum(cosine(0.0), AR1Density(0.0), n)
        worst = max(worst, abs(res.lambda_max - math.cos(math.pi / (n + 2))))
    return worst <= REDUCTION_TOL, f"max |lambda_max - cos(pi/(n+2))| = {worst:.2e}", time.perf_counter() - t0


def _symbol_matrix():
    rng = np.random.default_rng(5)
    fs = [cosine(-1.0), cosine(0.0), cosine(2.0), constant(1.0)] + [_real_trig(rng, d) for d in (1, 2, 4)]
    gs = [AR1Density(t) for t in (-0.8, -0.5, 0.0, 0.3, 0.9)] + [constant(1.0), _positive_trig(rng, 3)]
    return fs, gs


def check_5():
    t0 = time.perf_counter()
    fs, gs = _symbol_matrix()
    worst = -math.inf
    cases = 0
    for f in fs:
        for g in gs:
            bound = sup_norm(f) * sup_norm(g)
            for n in (8, 64):
                lam = product_spectrum(f, g, n).eigenvalues
                worst = max(worst, np.abs(lam).max() - bound)
                cases += 1
    ok = worst <= NORM_SLACK
    return ok, f"{cases} cases, max(|lambda| - bound) = {worst:.2e}", time.perf_counter() - t0


def check_6():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(TRANSPOSE_PAIRS):
        f = _real_trig(rng, int(rng.integers(1, 5)))
        g = _positive_trig(rng, int(rng.integers(1, 5)))
        a = product_spectrum(f, g, TRANSPOSE_ORDER).eigenvalues
        b = product_spectrum(f.reflect(), g.reflect(), TRANSPOSE_ORDER).eigenvalues
        worst = max(worst, np.abs(a - b).max())
    return worst <= TRANSPOSE_TOL, f"max spectral difference {worst:.2e}", time.perf_counter() - t0


def check_7():
    t0 = time.perf_counter()
    f, g = example_pair(-1.0, 0.5)
    trace_err = 0.0
    for n in (128, 512):
        s = szego_average(f, g, [0, 1], n)
        trace = np.trace(toeplitz_section(f, n) @ toeplitz_section(g, n)) / (n + 1)
        trace_err = max(trace_err, abs(s.discrete - trace))
    s128 = szego_average(f, g, [0, 0, 1], 128)
    s512 = szego_average(f, g, [0, 0, 1], 512)
    gap128 = abs(s128.discrete - s128.integral)
    gap512 = abs(s512.discrete - s512.integral)
    ok = trace_err <= TRACE_TOL and gap512 < 0.5 * gap128
    detail = f"trace err {trace_err:.1e}; x^2 gap {gap128:.2e} (n=128) -> {gap512:.2e} (n=512)"
    return ok, detail, time.perf_counter() - t0


def check_8():
    t0 = time.perf_counter()
    f, g = example_pair(-1.0, 0.5)
    rf = rate_function(f, g, example1_limits(-1.0, 0.5))
    j_mu = abs(rf.J(rf.mu))
    xs = np.linspace(rf.a - 2.0, -0.01, J_GRID)
    J = np.array([rf.J(x) for x in xs])
    convex = bool(np.all(J[1:-1] <= 0.5 * (J[:-2] + J[2:]) + 1e-10))
    slope_gap = abs(rf.slope(rf.a + 1e-9) - 1.0 / (2.0 * rf.lambda_min))
    one = constant(1.0)
    closed = max(
        abs(legendre(one, one, x) - (x - 1 - math.log(x)) / 2) for x in np.linspace(0.2, 5.0, 49)
    )
    ok = j_mu <= J_MU_TOL and convex and slope_gap <= SLOPE_TOL and closed <= CLOSED_FORM_TOL
    detail = f"|J(mu)| {j_mu:.1e}, convex {convex}, slope gap at a {slope_gap:.1e}, closed-form err {closed:.1e}"
    return ok, detail, time.perf_counter() - t0


def check_9():
    t0 = time.perf_counter()
    f, g = example_pair(-1.0, 0.5)
    masses = [
        localization_profile(product_spectrum(f, g, n, want_vectors=True), "min", LOC_EPS) for n in LOC_ORDERS
    ]
    ok = bool(np.all(np.diff(masses) < 0))
    return ok, "masses " + ", ".join(f"{m:.2e}" for m in masses), time.perf_counter() - t0


def check_10():
    t0 = time.perf_counter()
    f, g = example_pair(-1.0, 0.5)
    rate = rate_function(f, g, example1_limits(-1.0, 0.5))
    cfg = SimulationConfig(0.5, MC_N, MC_REPLICATES, MC_SEED, MC_LOWER + MC_UPPER)
    est = tail_study(cfg, f, rate, values=simulate_quadratic_forms(cfg, f))
    elapsed = time.perf_counter() - t0
    ratios = [e.empirical_rate / e.rate_reference for e in est]
    within = all(1 / MC_FACTOR <= r <= MC_FACTOR for r in ratios)
    by_dist = {}
    for e in est:
        by_dist.setdefault(e.side, []).append((abs(e.threshold - rate.mu), e.empirical_rate))
    increasing = all(
        all(b[1] > a[1] for a, b in zip(sorted(v), sorted(v)[1:])) for v in by_dist.values()
    )
    ok = within and increasing and elapsed < MC_SECONDS
    detail = "x/rate/J: " + "; ".join(
        f"{e.threshold:g}: {e.empirical_rate:.4f}/{e.rate_reference:.4f}" for e in est
    ) + f"; increasing {increasing}"
    return ok, detail, elapsed


CRITERIA = [
    (1, "Widom identity", check_1),
    (2, "AR(1) inverse", check_2),
    (3, "worked-example convergence", check_3),
    (4, "theta = 0 reduction", check_4),
    (5, "norm bound", check_5),
    (6, "transpose symmetry", check_6),
    (7, "Szego average", check_7),
    (8, "rate function", check_8),
    (9, "eigenvector localization", check_9),
    (10, "Monte Carlo tail rates", check_10),
]

LINES = []


def _line(num, name, ok, detail, elapsed):
    return f"{'PASS' if ok else 'FAIL'} [{num:2d}] {name}: {detail} ({elapsed:.1f}s)"


@pytest.mark.parametrize("num,name,check", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, name, check, capsys):
    ok, detail, elapsed = check()
    line = _line(num, name, ok, detail, elapsed)
    LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for num, name, check in CRITERIA:
        ok, detail, elapsed = check()
        print(_line(num, name, ok, detail, elapsed), flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
