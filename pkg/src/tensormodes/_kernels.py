"""Compiled inner loops for fixed-step integration of q'' = -grad V(q) / mass."""
import numpy as np
from numba import njit

# Triple-jump weights: a symmetric composition of three velocity-Verlet
# substeps with local error O(dt^5).
_Y = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
WEIGHTS = {2: np.array([1.0]), 4: np.array([_Y, 1.0 - 2.0 * _Y, _Y])}


@njit(cache=True)
def poly_grad(E, c, q, out):
    m = q.shape[0]
    for i in range(m):
        out[i] = 0.0
    for t in range(E.shape[0]):
        for i in range(m):
            e = E[t, i]
            if e == 0:
                continue
            val = c[t] * e
            for j in range(m):
                k = E[t, j] - 1 if j == i else E[t, j]
                for _ in range(k):
                    val *= q[j]
            out[i] += val


@njit(cache=True)
def _step(E, c, inv_mass, q, v, h, weights, g):
    for w in weights:
        hw = w * h
        poly_grad(E, c, q, g)
        for i in range(q.shape[0]):
            v[i] -= 0.5 * hw * inv_mass * g[i]
            q[i] += hw * v[i]
        poly_grad(E, c, q, g)
        for i in range(q.shape[0]):
            v[i] -= 0.5 * hw * inv_mass * g[i]


@njit(cache=True)
def integrate_fixed(E, c, mass, q0, v0, dt, nsteps, last_dt, weights, blowup):
    """Run ``nsteps`` steps of size ``dt`` then one of ``last_dt`` (if > 0).

    Returns (Q, V, stored, blown); integration stops at the first step whose
    state is non-finite or exceeds ``blowup`` in magnitude.
    """
    m = q0.shape[0]
    total = nsteps + (1 if last_dt > 0.0 else 0)
    Q = np.empty((total + 1, m))
    V = np.empty((total + 1, m))
    q = q0.copy()
    v = v0.copy()
    g = np.empty(m)
    Q[0] = q
    V[0] = v
    inv_mass = 1.0 / mass
    stored = 1
    blown = False
    for n in range(total):
        h = dt if n < nsteps else last_dt
        _step(E, c, inv_mass, q, v, h, weights, g)
        bad = False
        for i in range(m):
            if not (abs(q[i]) <= blowup and abs(v[i]) <= blowup):
                bad = True
        if bad:
            blown = True
            break
        Q[stored] = q
        V[stored] = v
        stored += 1
    return Q[:stored], V[:stored], stored, blown


@njit(cache=True)
def single_step(E, c, mass, q0, v0, h, weights):
    q = q0.copy()
    v = v0.copy()
    g = np.empty(q.shape[0])
    _step(E, c, 1.0 / mass, q, v, h, weights, g)
    return q, v
