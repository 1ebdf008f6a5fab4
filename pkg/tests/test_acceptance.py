"""Acceptance criteria, one PASS/FAIL line each (see the summary section of the pytest output)."""
import math
import time

import mpmath
import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from tensormodes.casestudy import (
    HigherSymmetry,
    LowerSymmetry,
    Verdict,
    W,
    bifurcation_scan,
    critical_angles,
    offset_experiment,
    potential_of,
)
from tensormodes.dynamics import (
    Boundedness,
    ReducedMode,
    SecondOrderSystem,
    State,
    boundedness,
    detect_period,
    integrate,
    integrate_mode,
    line_deviation,
    superposition_defect,
    weierstrass_residual,
)
from tensormodes.spectra import bezout_bound, find_eigenpairs, table_compatibility
from tensormodes.symtensor import from_terms, random_polynomial

from conftest import record


def _check(name, ok, detail):
    record(name, ok, detail)
    assert ok, detail


def test_01_higher_symmetry_count_and_stability():
    worst_angle, worst_time, bad = 0.0, 0.0, []
    for beta in (-1.0, -0.5, 0.5, 1.0):
        t0 = time.perf_counter()
        rep = find_eigenpairs(potential_of(HigherSymmetry(beta)))
        worst_time = max(worst_time, time.perf_counter() - t0)
        if rep.real_count != 8:
            bad.append(f"beta={beta}: {rep.real_count} points")
            continue
        for k, e in zip(range(-3, 5), rep.eigenpairs):
            th = k * math.pi / 4
            worst_angle = max(worst_angle, abs(e.angle - th))
            want = "minimum" if 2 * beta * math.cos(4 * th) > 0 else "maximum"
            if e.classification.kind != want:
                bad.append(f"beta={beta} theta={th:.4f}: {e.classification.kind}")
    ok = not bad and worst_angle < 1e-8 and worst_time < 1.0
    _check("1 higher-symmetry count and stability", ok, f"max angle err {worst_angle:.1e}, slowest {worst_time:.2f}s {bad}")


def test_02_eigenvalues_on_modes():
    fam = HigherSymmetry(1.0)
    rep = find_eigenpairs(potential_of(fam))
    err_fixed = max(abs(e.lam - (4.0 if round(e.angle / (math.pi / 4)) % 2 == 0 else 5.0)) for e in rep.eigenpairs)
    err_w = max(abs(e.lam - 4 * float(W(fam, e.angle))) for e in rep.eigenpairs)
    _check("2 eigenvalues 4 / 5 and lambda = 4 W", err_fixed < 1e-9 and err_w < 1e-9, f"|lam-4|5| {err_fixed:.1e}, |lam-4W| {err_w:.1e}")


def test_03_lower_symmetry_bifurcation():
    t0 = time.perf_counter()
    res = bifurcation_scan(0.25, (-0.4, 1.5, 0.01))
    dt = time.perf_counter() - t0
    pattern = []
    for n in res.counts:
        if not pattern or pattern[-1] != n:
            pattern.append(int(n))
    tr = res.transitions
    ok = pattern == [8, 4, 8] and len(tr) == 2 and abs(tr[0] - 0.25) < 1e-6 and abs(tr[1] - 1.0) < 1e-6 and dt < 10
    _check("3 lower-symmetry bifurcation 8/4/8", ok, f"pattern {pattern}, transitions {[f'{t:.10f}' for t in tr]}, {dt:.2f}s")


def test_04_theta_star():
    fam = LowerSymmetry(0.25, 0.0)
    ts = 0.5 * math.acos(-3 / 5)
    rep = find_eigenpairs(potential_of(fam))
    solver = min((e.angle for e in rep.eigenpairs if 0 < e.angle < math.pi / 2), key=lambda a: abs(a - ts))
    stable = [e for e in rep.eigenpairs if abs(e.angle - solver) < 1e-12][0].classification.kind == "minimum"
    analytic = [a for a, k in zip(critical_angles(fam).angles, critical_angles(fam).kinds) if 0 < a < math.pi / 2 and k == "stable"][0]
    # dense grid minimisation of W on (0, pi/2), then a bounded Brent polish inside the grid cell
    th = np.linspace(0.0, math.pi / 2, 1_000_001)
    i = int(np.argmin(W(fam, th)))
    h = th[1] - th[0]
    grid = minimize_scalar(lambda t: float(W(fam, t)), bounds=(th[i] - h, th[i] + h), method="bounded", options={"xatol": 1e-12}).x
    err = max(abs(solver - ts), abs(analytic - ts))
    ok = err < 1e-8 and abs(grid - ts) < h and stable
    _check("4 theta* = 1/2 arccos(-3/5)", ok, f"solver {solver:.12f}, formula {ts:.12f}, grid {grid:.9f}, err {err:.1e}")


def test_05_second_derivative_formulas():
    rng = np.random.default_rng(5)
    h = mpmath.mpf("1e-5")
    worst = 0.0
    with mpmath.workdps(30):
        for _ in range(100):
            a = rng.uniform(0.02, 0.98)
            b = rng.uniform(-math.sqrt(a) + 1e-3, 3.0)
            ms = critical_angles(LowerSymmetry(a, b))
            A, B = mpmath.mpf(a), mpmath.mpf(b)

            def w(t):
                c, s = mpmath.cos(t), mpmath.sin(t)
                return c**4 + A * s**4 + 2 * B * s**2 * c**2

            for th, d2 in zip(ms.angles, ms.second_derivs):
                t = mpmath.mpf(float(th))
                fd = float((w(t + h) - 2 * w(t) + w(t - h)) / h**2)
                worst = max(worst, abs(fd - d2) / abs(d2))
    _check("5 second-derivative closed forms vs central differences", worst < 1e-6, f"max relative err {worst:.1e} over 100 (alpha, beta)")


def test_06_counting_checks():
    exact = (bezout_bound(3, 2), bezout_bound(3, 3), bezout_bound(2, 3)) == (4, 13, 7)
    t0 = time.perf_counter()
    bad, used = [], {2: 0, 3: 0}
    for dim in (2, 3):
        seed = 0
        while used[dim] < 25:
            seed += 1
            rep = find_eigenpairs(random_polynomial(dim, 4, seed=1000 * dim + seed))
            if rep.degenerate_family or any(e.classification.kind == "degenerate" for e in rep.eigenpairs):
                continue
            used[dim] += 1
            want = 0 if dim == 2 else 2
            if not (rep.parity_ok and rep.index_sum_ok and rep.index_sum == want and rep.eigenspaces <= rep.bezout_bound):
                bad.append((dim, seed, rep.index_sum, rep.parity_ok))
    dt = time.perf_counter() - t0
    ok = exact and not bad and dt < 30
    _check("6 Bezout values, parity and index sum on 25+25 random quartics", ok, f"bounds exact={exact}, failures {bad}, {dt:.1f}s")


def test_07_invariant_lines():
    P = potential_of(HigherSymmetry(1.0))
    sys = SecondOrderSystem(P)
    worst_dev, worst_drift = 0.0, 0.0
    for e in find_eigenpairs(P).eigenpairs:
        for dt in (1e-3, 5e-4):
            traj = integrate(sys, State.at(e.v, 0.3 * e.v), dt=dt, t_end=10.0)
            worst_dev = max(worst_dev, line_deviation(traj, e.v))
            worst_drift = max(worst_drift, traj.energy_drift)
    ok = worst_dev < 1e-8 and worst_drift < 1e-6
    _check("7 eigenlines are invariant", ok, f"max deviation {worst_dev:.1e}, max energy drift {worst_drift:.1e}")


def test_08_offset_experiment():
    t0 = time.perf_counter()
    expected = {
        (1.0, 0.0): Verdict.STABLE,
        (1.0, math.pi): Verdict.STABLE,
        (1.0, math.pi / 4): Verdict.UNSTABLE,
        (1.0, -math.pi / 4): Verdict.UNSTABLE,
        (-1.0, 0.0): Verdict.UNSTABLE,
        (-1.0, math.pi): Verdict.UNSTABLE,
        (-1.0, math.pi / 4): Verdict.STABLE,
        (-1.0, -math.pi / 4): Verdict.STABLE,
    }
    got = {}
    for (beta, th), want in expected.items():
        res = offset_experiment(HigherSymmetry(beta), th, offset=1e-3, t_end=100.0)
        got[(beta, th)] = (res.verdict, res.max_deviation)
    dt = time.perf_counter() - t0
    wrong = [f"beta={b:+g} theta0={t:+.4f}: {v.value} (dev {d:.3g})" for (b, t), (v, d) in got.items() if v is not expected[(b, t)]]
    ok = not wrong and dt < 20
    _check("8 offset experiment verdicts", ok, f"{len(wrong)}/8 differ from the W-based expectation, {dt:.1f}s; " + "; ".join(wrong))


def test_09_reduced_mode_and_psi():
    axis = ReducedMode(-4.0, 3)
    traj = integrate_mode(axis, 1.0, 0.0, dt=1e-3, t_end=100.0)
    p1 = detect_period(axis, 1.0, 0.0, dt=1e-3)
    p2 = detect_period(axis, 1.0, 0.0, dt=5e-4)
    rel = abs(p1.period - p2.period) / p1.period
    up = ReducedMode(1.0, 3)
    run = integrate_mode(up, 1.0, 0.0, dt=1e-3, t_end=10.0)
    crossed = np.max(np.abs(run.gamma)) > 100
    ok = (
        boundedness(axis) is Boundedness.PERIODIC
        and traj.psi_drift < 1e-8
        and p1.closure < 1e-6
        and rel < 1e-4
        and boundedness(up) is Boundedness.UNBOUNDED
        and crossed
    )
    _check("9 reduced mode: periodic axis, psi, period, unbounded growth", ok, f"psi drift {traj.psi_drift:.1e}, period {p1.period:.10f} (dt/2 change {rel:.1e}), |gamma|>100: {crossed}")


def test_10_weierstrass_residual():
    cases = [(1.0, 1.0, 0.0, 1.0), (-2.0, 1.0, 1.0, 1.0), (-1.5, 0.1, 0.0, 10.0)]
    worst = 0.0
    for alpha, z0, zd0, t_end in cases:
        mode = ReducedMode(alpha, 2)
        traj = integrate_mode(mode, z0, zd0, dt=1e-3, t_end=t_end)
        assert traj.blowup_time is None
        worst = max(worst, weierstrass_residual(mode, traj))
    _check("10 Weierstrass first integral for p = 2", worst < 1e-8, f"max residual {worst:.1e} over 3 initial conditions")


def test_11_matrix_reduction():
    rng = np.random.default_rng(11)
    worst_v, worst_l, bad = 0.0, 0.0, 0
    for dim in (2, 3):
        for _ in range(50):
            A = rng.standard_normal((dim, dim))
            A = 0.5 * (A + A.T)
            terms = [(tuple(int(i == a) + int(i == b) for i in range(dim)), 0.5 * A[a, b]) for a in range(dim) for b in range(dim)]
            rep = find_eigenpairs(from_terms(dim, 2, terms))
            vals, vecs = np.linalg.eigh(A)
            if rep.real_count != 2 * dim:
                bad += 1
                continue
            for j in range(dim):
                matches = [e for e in rep.eigenpairs if abs(abs(e.v @ vecs[:, j]) - 1) < 1e-6]
                if len(matches) != 2:
                    bad += 1
                    continue
                for e in matches:
                    worst_v = max(worst_v, min(np.max(np.abs(e.v - vecs[:, j])), np.max(np.abs(e.v + vecs[:, j]))))
                    worst_l = max(worst_l, abs(e.lam - vals[j]))
    ok = bad == 0 and worst_v < 1e-10 and worst_l < 1e-10
    _check("11 quadratic forms match eigh", ok, f"100 matrices, mismatched {bad}, vector err {worst_v:.1e}, value err {worst_l:.1e}")


def test_12_superposition_fails():
    sys = SecondOrderSystem(potential_of(HigherSymmetry(1.0)))
    s = 1 / math.sqrt(2)
    defect = superposition_defect(sys, [[s, 0.0], [0.0, s]], dt=1e-3, t_end=10.0)
    _check("12 nonlinear motion is not a superposition of modes", defect > 0.1, f"sup-norm defect {defect:.3f}")


def test_13_table_compatibility():
    rows = [(1, 1, {}), (2, 2, {1: 2}), (3, 3, {1: 4}), (3, 3, {2: 2}), (4, 4, {1: 6}), (4, 4, {1: 2, 2: 2}), (4, 4, {3: 2})]
    violations = [(2, 2, {1: 1}), (3, 2, {1: 3}), (8, 8, {1: 14})]
    ok_rows = [table_compatibility(a, b, c, m=3, p=2) for a, b, c in rows]
    ok_viol = [not table_compatibility(a, b, c, m=3, p=2) for a, b, c in violations]
    _check("13 critical-point table rows", all(ok_rows) and all(ok_viol), f"rows {sum(ok_rows)}/7 accepted, violations {sum(ok_viol)}/3 rejected")
