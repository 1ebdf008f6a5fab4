"""Motion along an eigenline reduces to gamma'' = alpha gamma^p."""
import numpy as np

from tensormodes import (
    HigherSymmetry,
    ReducedMode,
    SecondOrderSystem,
    State,
    boundedness,
    detect_period,
    find_eigenpairs,
    integrate,
    integrate_mode,
    potential_of,
    reduced_mode,
    weierstrass_residual,
)

P = potential_of(HigherSymmetry(1.0))
sys = SecondOrderSystem(P)
axis = min(find_eigenpairs(P).eigenpairs, key=lambda e: abs(e.angle))
mode = reduced_mode(sys, axis)
print("axis mode: alpha =", mode.alpha, "p =", mode.p_exp, "->", boundedness(mode).value)

full = integrate(sys, State.at(0.8 * axis.v), t_end=10.0)
red = integrate_mode(mode, 0.8, 0.0, t_end=10.0)
print("full vs reduced, max gap:", np.max(np.abs(full.q @ axis.v - red.gamma)))
print("psi drift:", red.psi_drift)
print("period from (1, 0):", detect_period(mode, 1.0, 0.0).period)

# positive alpha escapes in finite time
up = integrate_mode(ReducedMode(1.0, 3), 1.0, 0.0, t_end=10.0)
print("alpha=+1 blows up at t =", up.blowup_time)

# cubic potentials: p = 2, first integral of Weierstrass type
cubic = ReducedMode(-1.5, 2)
traj = integrate_mode(cubic, 0.1, 0.0, t_end=10.0)
print("p=2 residual of z'^2 - (2/3) alpha z^3 - c:", weierstrass_residual(cubic, traj))
