"""Second-order dynamics q'' = -grad V(q) / mass for homogeneous potentials.

Eigenvectors of the potential's tensor span invariant lines of this flow.
Along such a line ``q(t) = gamma(t) v`` the motion reduces to the scalar
equation ``gamma'' = alpha * gamma**p`` with ``alpha = -lam / mass`` and
``p = degree - 1``, which has the first integral

    psi = 2 alpha y1**(p + 1) - (p + 1) y2**2,   (y1, y2) = (gamma, gamma').
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .spectra import Eigenpair
from .symtensor import HomogeneousPolynomial, evaluate, from_terms, gradient

__all__ = [
    "SecondOrderSystem",
    "State",
    "Trajectory",
    "ReducedMode",
    "ModeTrajectory",
    "Boundedness",
    "PeriodResult",
    "integrate",
    "energy",
    "line_deviation",
    "reduced_mode",
    "psi",
    "boundedness",
    "integrate_mode",
    "detect_period",
    "weierstrass_residual",
    "superposition_defect",
]

BLOWUP = 1e12


@dataclass(frozen=True)
class SecondOrderSystem:
    potential: HomogeneousPolynomial
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    @property
    def dim(self) -> int:
        return self.potential.dim

    def acceleration(self, q) -> np.ndarray:
        return -gradient(self.potential, q) / self.mass


@dataclass(frozen=True)
class State:
    q: np.ndarray
    v: np.ndarray
    t: float = 0.0

    @classmethod
    def at(cls, q, v=None, t: float = 0.0) -> State:
        q = np.asarray(q, dtype=float)
        v = np.zeros_like(q) if v is None else np.asarray(v, dtype=float)
        if q.shape != v.shape or q.ndim != 1:
            raise ValueError(f"position {q.shape} and velocity {v.shape} must be matching vectors")
        return cls(q, v, float(t))


@dataclass(frozen=True)
class Trajectory:
    """Samples of a fixed-step run; ``blowup_time`` is set if the run was cut short."""

    t: np.ndarray
    q: np.ndarray
    v: np.ndarray
    energy: np.ndarray
    blowup_time: Optional[float] = None

    @property
    def blew_up(self) -> bool:
        return self.blowup_time is not None

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i) -> State:
        return State(self.q[i], self.v[i], float(self.t[i]))

    def states(self) -> Iterator[State]:
        for i in range(len(self)):
            yield self[i]

    @property
    def final(self) -> State:
        return self[-1]


def energy(sys: SecondOrderSystem, s: State) -> float:
    return 0.5 * sys.mass * float(s.v @ s.v) + evaluate(sys.potential, s.q)


def _step_plan(t0: float, dt: float, t_end: float) -> tuple[int, float]:
    span = t_end - t0
    n = int(math.floor(span / dt + 1e-9))
    rest = span - n * dt
    if rest <= 1e-12 * dt:
        rest = 0.0
    return n, rest


def _run(potential: HomogeneousPolynomial, mass, q0, v0, t0, dt, t_end, order, blowup):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not t_end > t0:
        raise ValueError(f"t_end={t_end} must exceed the start time {t0}")
    try:
        weights = _kernels.WEIGHTS[order]
    except KeyError:
        raise ValueError(f"order must be 2 or 4, got {order}") from None
    n, rest = _step_plan(t0, dt, t_end)
    E = np.ascontiguousarray(potential.exponents, dtype=np.int64)
    c = np.ascontiguousarray(potential.coeffs, dtype=float)
    Q, V, stored, blown = _kernels.integrate_fixed(
        E, c, float(mass), np.array(q0, dtype=float), np.array(v0, dtype=float), float(dt), n, rest, weights, blowup
    )
    t = t0 + dt * np.arange(stored, dtype=float)
    if rest and stored == n + 2:
        t[-1] = t_end
    blow_t = None
    if blown:
        blow_t = float(t0 + dt * stored) if stored <= n else float(t_end)
    return t, Q, V, blow_t


def integrate(
    sys: SecondOrderSystem,
    s0: State,
    dt: float = 1e-3,
    t_end: float = 10.0,
    order: int = 4,
    blowup: float = BLOWUP,
) -> Trajectory:
    """Fixed-step symmetric integration from ``s0`` to ``t_end``.

    ``order=4`` composes three velocity-Verlet substeps per step (time
    reversible, symplectic); ``order=2`` is plain velocity Verlet. Every step
    is sampled. A state component beyond ``blowup`` in magnitude truncates the
    run and records ``blowup_time``.
    """
    if s0.q.shape != (sys.dim,) or s0.v.shape != (sys.dim,):
        raise ValueError(f"state dimension does not match system dimension {sys.dim}")
    t, Q, V, blow_t = _run(sys.potential, sys.mass, s0.q, s0.v, s0.t, dt, t_end, order, blowup)
    H = 0.5 * sys.mass * np.einsum("ij,ij->i", V, V) + evaluate(sys.potential, Q)
    return Trajectory(t, Q, V, np.atleast_1d(H), blow_t)


def line_deviation(traj: Trajectory, v, min_radius: float = 0.0) -> float:
    """Largest angle between ``q(t)`` and the line spanned by ``v``.

    Samples with ``|q| < max(1e-12, min_radius)`` are ignored.
    """
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("line direction must be a unit vector")
    along = traj.q @ v
    perp = np.linalg.norm(traj.q - along[:, None] * v, axis=1)
    r = np.linalg.norm(traj.q, axis=1)
    mask = r >= max(1e-12, min_radius)
    if not mask.any():
        return 0.0
    return float(np.max(np.arctan2(perp[mask], np.abs(along[mask]))))


def superposition_defect(
    sys: SecondOrderSystem,
    q0s: Sequence,
    v0s: Optional[Sequence] = None,
    dt: float = 1e-3,
    t_end: float = 10.0,
) -> float:
    """Sup-norm gap between the run from summed initial data and the sum of runs.

    Zero (up to rounding) for quadratic potentials; a nonzero gap shows the
    motion is not a superposition of the individual solutions.
    """
    q0s = [np.asarray(q, dtype=float) for q in q0s]
    v0s = [np.zeros_like(q) for q in q0s] if v0s is None else [np.asarray(v, dtype=float) for v in v0s]
    runs = [integrate(sys, State.at(q, v), dt, t_end) for q, v in zip(q0s, v0s)]
    total = integrate(sys, State.at(sum(q0s), sum(v0s)), dt, t_end)
    n = min(len(total), *(len(r) for r in runs))
    summed = sum(r.q[:n] for r in runs)
    return float(np.max(np.abs(total.q[:n] - summed)))


# -- reduced one-dimensional mode ---------------------------------------------------


class Boundedness(enum.Enum):
    PERIODIC = "periodic"
    UNBOUNDED = "unbounded"
    LINEAR = "linear"


@dataclass(frozen=True)
class ReducedMode:
    """Scalar equation gamma'' = alpha * gamma**p_exp along ``direction``."""

    alpha: float
    p_exp: int
    direction: Optional[np.ndarray] = None

    @property
    def potential(self) -> HomogeneousPolynomial:
        """One-variable potential U with -U'(gamma) = alpha * gamma**p_exp."""
        return from_terms(1, self.p_exp + 1, [((self.p_exp + 1,), -self.alpha / (self.p_exp + 1))])


def reduced_mode(sys: SecondOrderSystem, e: Eigenpair) -> ReducedMode:
    return ReducedMode(alpha=-e.lam / sys.mass, p_exp=sys.potential.degree - 1, direction=np.asarray(e.v))


def psi(mode: ReducedMode, y1, y2):
    p = mode.p_exp
    return 2 * mode.alpha * np.power(y1, p + 1) - (p + 1) * np.square(y2)


def boundedness(mode: ReducedMode) -> Boundedness:
    if mode.p_exp == 1:
        return Boundedness.LINEAR
    if mode.alpha < 0 and mode.p_exp % 2 == 1:
        return Boundedness.PERIODIC
    return Boundedness.UNBOUNDED


@dataclass(frozen=True)
class ModeTrajectory:
    t: np.ndarray
    gamma: np.ndarray
    gammadot: np.ndarray
    psi: np.ndarray
    blowup_time: Optional[float] = None

    @property
    def psi_drift(self) -> float:
        return float(np.max(np.abs(self.psi - self.psi[0])))


def integrate_mode(
    mode: ReducedMode,
    y1: float,
    y2: float,
    dt: float = 1e-3,
    t_end: float = 10.0,
    order: int = 4,
    blowup: float = BLOWUP,
) -> ModeTrajectory:
    t, Q, V, blow_t = _run(mode.potential, 1.0, [y1], [y2], 0.0, dt, t_end, order, blowup)
    g, gd = Q[:, 0], V[:, 0]
    return ModeTrajectory(t, g, gd, psi(mode, g, gd), blow_t)


@dataclass(frozen=True)
class PeriodResult:
    period: float
    closure: float  # distance from the initial phase point at the return


def detect_period(
    mode: ReducedMode,
    y1: float,
    y2: float,
    dt: float = 1e-3,
    t_max: float = 50.0,
    order: int = 4,
) -> Optional[PeriodResult]:
    """First return of the phase point to a transversal section through (y1, y2).

    The return time is located to rounding accuracy by root-finding on a
    partial step. Returns ``None`` at equilibria or when no return happens
    before ``t_max``.
    """
    s0 = np.array([y1, y2], dtype=float)
    f0 = np.array([y2, mode.alpha * y1**mode.p_exp])
    if not np.any(f0):
        return None
    traj = integrate_mode(mode, y1, y2, dt, t_max, order)
    S = np.column_stack([traj.gamma, traj.gammadot])
    g = (S - s0) @ f0
    scale = np.linalg.norm(s0) + np.linalg.norm(f0)
    dist = np.linalg.norm(S - s0, axis=1)
    pot = mode.potential
    E = np.ascontiguousarray(pot.exponents, dtype=np.int64)
    c = np.ascontiguousarray(pot.coeffs)
    w = _kernels.WEIGHTS[order]

    def advance(i, tau):
        q, v = _kernels.single_step(E, c, 1.0, S[i, :1].copy(), S[i, 1:].copy(), tau, w)
        return np.array([q[0], v[0]])

    for i in range(1, len(S) - 1):
        if g[i] < 0 <= g[i + 1] and dist[i] < 0.1 * scale:
            tau = brentq(lambda h: (advance(i, h) - s0) @ f0, 0.0, traj.t[i + 1] - traj.t[i], xtol=1e-15, rtol=1e-15)
            closure = float(np.linalg.norm(advance(i, tau) - s0))
            return PeriodResult(float(traj.t[i] + tau), closure)
    return None


def weierstrass_residual(mode: ReducedMode, traj: ModeTrajectory) -> float:
    """Max deviation of z'^2 = (2/3) alpha z^3 + c along a p = 2 trajectory."""
    if mode.p_exp != 2:
        raise ValueError(f"the cubic first-integral form needs p_exp = 2, got {mode.p_exp}")
    z, zd = traj.gamma, traj.gammadot
    lhs = zd**2 - (2.0 / 3.0) * mode.alpha * z**3
    c = lhs[0]
    return float(np.max(np.abs(lhs - c)))


def weierstrass_constant(mode: ReducedMode, z0: float, zd0: float) -> float:
    return zd0**2 - (2.0 / 3.0) * mode.alpha * z0**3
