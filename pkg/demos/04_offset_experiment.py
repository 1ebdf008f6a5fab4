"""Release from rest one milliradian away from a mode and watch whether it stays.

Minima of W on the circle are not automatically orbitally stable lines:
the transverse perturbation obeys a periodic Hill equation, and for
(x^2 + y^2)^2 + x^2 y^2 the axis mode sits in a resonance tongue.
The Floquet trace below tells the same story as the long runs.
"""
import math

import numpy as np
from scipy.integrate import quad, solve_ivp

from tensormodes import HigherSymmetry, critical_angles, offset_experiment, potential_of
from tensormodes.symtensor import evaluate, hessian


def floquet_trace(fam, theta):
    P = potential_of(fam)
    v = np.array([math.cos(theta), math.sin(theta)])
    n = np.array([-v[1], v[0]])
    lam = 4 * evaluate(P, v)
    k = n @ hessian(P, v) @ n
    T = 4 * quad(lambda g: 1 / math.sqrt(lam / 2 * (1 - g**4)), 0, 1)[0]
    rhs = lambda t, y: [y[1], -lam * y[0] ** 3, y[3], -k * y[0] ** 2 * y[2], y[5], -k * y[0] ** 2 * y[4]]
    y = solve_ivp(rhs, (0, T), [1, 0, 1, 0, 0, 1], method="DOP853", rtol=1e-12, atol=1e-12).y[:, -1]
    return y[2] + y[5]


for beta in (1.0, -1.0):
    fam = HigherSymmetry(beta)
    ms = critical_angles(fam)
    print(f"beta={beta:+.0f}")
    for th in (0.0, math.pi / 4):
        w_kind = ms.kinds[int(np.argmin(np.abs(ms.angles - th)))]
        res = offset_experiment(fam, th)
        tr = floquet_trace(fam, th)
        print(f"  theta0={th:.4f}: W says {w_kind:8s} | run says {res.verdict.value:8s} (max dev {res.max_deviation:.4f}) | Floquet trace {tr:+.3f}")
