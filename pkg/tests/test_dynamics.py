import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from tensormodes.dynamics import (
    Boundedness,
    ReducedMode,
    SecondOrderSystem,
    State,
    boundedness,
    detect_period,
    energy,
    integrate,
    integrate_mode,
    line_deviation,
    psi,
    reduced_mode,
    superposition_defect,
    weierstrass_constant,
    weierstrass_residual,
)
from tensormodes.spectra import Eigenpair, find_eigenpairs
from tensormodes.symtensor import from_terms, random_polynomial

from conftest import DIAG, vsym


def test_energy_examples(vsym1):
    sys = SecondOrderSystem(vsym1)
    assert energy(sys, State.at([1, 0])) == 1.0
    assert energy(sys, State.at(DIAG)) == pytest.approx(1.25)
    assert energy(SecondOrderSystem(vsym1, mass=2.0), State.at([0, 0], [1, 1])) == 2.0


def test_rest_at_origin_stays_put(vsym1):
    traj = integrate(SecondOrderSystem(vsym1), State.at([0, 0]), t_end=1.0)
    assert np.all(traj.q == 0) and np.all(traj.v == 0)
    assert not traj.blew_up


def test_final_time_is_exact(vsym1):
    traj = integrate(SecondOrderSystem(vsym1), State.at([1, 0]), dt=0.3, t_end=1.0)
    assert traj.t[-1] == 1.0
    assert np.allclose(np.diff(traj.t)[:-1], 0.3)


def test_matches_reference_integrator(vsym1):
    sys = SecondOrderSystem(vsym1)
    q0, v0 = np.array([0.8, 0.3]), np.array([0.1, -0.2])
    traj = integrate(sys, State.at(q0, v0), dt=1e-3, t_end=5.0)

    def rhs(t, y):
        return np.concatenate([y[2:], sys.acceleration(y[:2])])

    ref = solve_ivp(rhs, (0, 5), np.concatenate([q0, v0]), method="DOP853", rtol=1e-12, atol=1e-12)
    assert np.allclose(traj.final.q, ref.y[:2, -1], atol=1e-8)


def test_energy_drift_long_run(vsym1):
    traj = integrate(SecondOrderSystem(vsym1), State.at([0.7, 0.4], [0.2, 0.0]), dt=1e-3, t_end=100.0)
    assert traj.energy_drift < 1e-6


def test_second_order_scheme_available(vsym1):
    sys = SecondOrderSystem(vsym1)
    a = integrate(sys, State.at([1, 0.2]), dt=1e-3, t_end=2.0, order=2).final.q
    b = integrate(sys, State.at([1, 0.2]), dt=5e-4, t_end=2.0, order=2).final.q
    c = integrate(sys, State.at([1, 0.2]), dt=2.5e-4, t_end=2.0, order=2).final.q
    ratio = np.linalg.norm(a - b) / np.linalg.norm(b - c)
    assert 3.5 < ratio < 4.5


def test_dt_halving_converges(vsym1):
    sys = SecondOrderSystem(vsym1)
    a = integrate(sys, State.at([1, 0.2]), dt=1e-3, t_end=10.0).final.q
    b = integrate(sys, State.at([1, 0.2]), dt=5e-4, t_end=10.0).final.q
    assert np.linalg.norm(a - b) < 1e-9


def test_time_reversal(vsym1):
    sys = SecondOrderSystem(vsym1)
    fwd = integrate(sys, State.at([0.9, -0.3], [0.1, 0.4]), dt=1e-3, t_end=5.0)
    back = integrate(sys, State.at(fwd.final.q, -fwd.final.v), dt=1e-3, t_end=5.0)
    assert np.allclose(back.final.q, [0.9, -0.3], atol=1e-9)
    assert np.allclose(back.final.v, [-0.1, -0.4], atol=1e-9)


def test_blowup_is_reported():
    # negative definite quartic: pushed outward without bound
    sys = SecondOrderSystem(-vsym(1.0))
    traj = integrate(sys, State.at([1, 0]), dt=1e-3, t_end=10.0)
    assert traj.blew_up and 0 < traj.blowup_time < 10


@pytest.mark.parametrize("dt, t_end", [(0.0, 1.0), (-1e-3, 1.0), (1e-3, 0.0)])
def test_invalid_step_parameters(vsym1, dt, t_end):
    with pytest.raises(ValueError):
        integrate(SecondOrderSystem(vsym1), State.at([1, 0]), dt=dt, t_end=t_end)


def test_invalid_mass_and_state(vsym1):
    with pytest.raises(ValueError):
        SecondOrderSystem(vsym1, mass=0.0)
    with pytest.raises(ValueError):
        integrate(SecondOrderSystem(vsym1), State.at([1, 0, 0]))


def test_line_deviation_examples(vsym1):
    sys = SecondOrderSystem(vsym1)
    traj = integrate(sys, State.at(DIAG), t_end=10.0)
    assert line_deviation(traj, DIAG) < 1e-12
    traj = integrate(sys, State.at([1, 0]), t_end=10.0)
    assert line_deviation(traj, [1, 0]) < 1e-12
    assert line_deviation(traj, [0, 1], min_radius=0.5) == pytest.approx(math.pi / 2)


def test_eigenvector_lines_are_invariant():
    P = random_polynomial(3, 4, seed=5)
    if P(np.ones(3)) < 0:
        P = -P
    sys = SecondOrderSystem(P)
    for e in find_eigenpairs(P).eigenpairs:
        traj = integrate(sys, State.at(0.5 * e.v), t_end=2.0)
        if not traj.blew_up:
            assert line_deviation(traj, e.v, min_radius=1e-3) < 1e-8


def test_superposition_defect(quad, vsym1):
    assert superposition_defect(SecondOrderSystem(quad), [[1, 0], [0, 1]], t_end=5.0) < 1e-10
    assert superposition_defect(SecondOrderSystem(vsym1), [[1, 0], [0, 1]], t_end=5.0) > 1e-2


def test_reduced_mode_examples(vsym1, quad):
    sys = SecondOrderSystem(vsym1)
    m = reduced_mode(sys, Eigenpair(np.array([1.0, 0.0]), 4.0, 0.0))
    assert (m.alpha, m.p_exp) == (-4.0, 3)
    m = reduced_mode(sys, Eigenpair(DIAG, 5.0, 0.0))
    assert m.alpha == -5.0
    m = reduced_mode(SecondOrderSystem(quad), Eigenpair(np.array([1.0, 0.0]), 1.0, 0.0))
    assert (m.alpha, m.p_exp) == (-1.0, 1)
    m = reduced_mode(SecondOrderSystem(vsym1, mass=2.0), Eigenpair(np.array([1.0, 0.0]), 4.0, 0.0))
    assert m.alpha == -2.0


def test_reduced_mode_reproduces_full_motion(vsym1):
    sys = SecondOrderSystem(vsym1)
    e = Eigenpair(DIAG, 5.0, 0.0)
    full = integrate(sys, State.at(0.8 * DIAG, 0.1 * DIAG), t_end=10.0)
    red = integrate_mode(reduced_mode(sys, e), 0.8, 0.1, t_end=10.0)
    assert np.max(np.abs(full.q @ DIAG - red.gamma)) < 1e-6


def test_psi_examples():
    assert psi(ReducedMode(-4.0, 3), 1.0, 0.0) == -8.0
    assert psi(ReducedMode(-4.0, 3), 0.0, 1.0) == -4.0
    assert psi(ReducedMode(1.0, 2), 1.0, 1.0) == -1.0
    assert psi(ReducedMode(-1.0, 3), 1.0, 0.0) == -2.0
    assert psi(ReducedMode(-2.5, 5), 0.0, 0.0) == 0.0


def test_psi_conserved():
    traj = integrate_mode(ReducedMode(-4.0, 3), 1.0, 0.0, dt=1e-3, t_end=100.0)
    assert traj.psi_drift < 1e-8


def test_boundedness_examples():
    assert boundedness(ReducedMode(-4.0, 3)) is Boundedness.PERIODIC
    assert boundedness(ReducedMode(4.0, 3)) is Boundedness.UNBOUNDED
    assert boundedness(ReducedMode(-1.0, 2)) is Boundedness.UNBOUNDED
    assert boundedness(ReducedMode(-1.0, 1)) is Boundedness.LINEAR


def test_unbounded_mode_blows_up():
    traj = integrate_mode(ReducedMode(1.0, 3), 1.0, 0.0, dt=1e-3, t_end=10.0)
    assert traj.blowup_time is not None
    # gamma'' = gamma^3 from (1, 0) reaches infinity at t = integral_1^inf dg / sqrt((g^4 - 1) / 2)
    from scipy.integrate import quad as qint

    t_star = qint(lambda g: 1 / math.sqrt((g**4 - 1) / 2), 1, np.inf)[0]
    assert traj.blowup_time == pytest.approx(t_star, abs=1e-2)


def test_period_detection():
    mode = ReducedMode(-4.0, 3)
    res = detect_period(mode, 1.0, 0.0)
    # quarter period = integral_0^1 dg / sqrt(2 (1 - g^4))
    from scipy.integrate import quad as qint

    quarter = qint(lambda g: 1 / math.sqrt(2 * (1 - g**4)), 0, 1)[0]
    assert res.period == pytest.approx(4 * quarter, rel=1e-9)
    assert res.closure < 1e-9
    fine = detect_period(mode, 1.0, 0.0, dt=5e-4)
    assert abs(fine.period - res.period) / res.period < 1e-6
    assert detect_period(mode, 0.0, 0.0) is None


def test_weierstrass_examples():
    mode = ReducedMode(-1.5, 2)
    traj = integrate_mode(mode, 0.1, 0.0, t_end=5.0)
    assert weierstrass_residual(mode, traj) < 1e-10
    up = ReducedMode(1.0, 2)
    assert weierstrass_constant(up, 1.0, 0.0) == pytest.approx(-2 / 3)
    assert weierstrass_residual(up, integrate_mode(up, 1.0, 0.0, t_end=1.0)) < 1e-8
    down = ReducedMode(-2.0, 2)
    assert weierstrass_constant(down, 1.0, 1.0) == pytest.approx(1 + 4 / 3)
    assert weierstrass_residual(down, integrate_mode(down, 1.0, 1.0, t_end=1.0)) < 1e-8
    zero = integrate_mode(mode, 0.0, 0.0, t_end=1.0)
    assert weierstrass_residual(mode, zero) == 0.0
    assert weierstrass_constant(mode, 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        weierstrass_residual(ReducedMode(-4.0, 3), integrate_mode(ReducedMode(-4.0, 3), 1.0, 0.0, t_end=0.1))


@settings(max_examples=25, deadline=None)
@given(
    beta=st.floats(-3.5, 3.0).filter(lambda b: abs(b) > 1e-3),
    x=st.floats(-1, 1),
    y=st.floats(-1, 1),
    u=st.floats(-0.5, 0.5),
)
def test_energy_conserved_property(beta, x, y, u):
    traj = integrate(SecondOrderSystem(vsym(beta)), State.at([x, y], [u, -u]), dt=1e-3, t_end=5.0)
    assert traj.energy_drift < 1e-8 * max(1.0, abs(traj.energy[0]))


@settings(max_examples=20, deadline=None)
@given(alpha=st.floats(-5, -0.1), y1=st.floats(-1, 1), y2=st.floats(-1, 1))
def test_psi_conserved_property(alpha, y1, y2):
    traj = integrate_mode(ReducedMode(alpha, 3), y1, y2, dt=1e-3, t_end=5.0)
    assert traj.psi_drift < 1e-9 * max(1.0, abs(traj.psi[0]))


@pytest.mark.xfail(
    strict=True,
    reason="the diagonal of the beta=1 quartic is orbitally stable (Floquet trace -1.21); it is only a maximum of W",
)
def test_diagonal_offset_escapes(vsym1):
    th = math.pi / 4 + 1e-3
    traj = integrate(SecondOrderSystem(vsym1), State.at([math.cos(th), math.sin(th)]), t_end=100.0)
    assert line_deviation(traj, DIAG, min_radius=0.5) > 0.5
