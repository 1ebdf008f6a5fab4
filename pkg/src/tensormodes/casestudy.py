"""Planar quartic potentials with Z2 x Z2 symmetry.

Two normalised families are covered:

* ``HigherSymmetry(beta)``:  V = (x^2 + y^2)^2 + beta x^2 y^2, which is also
  symmetric under exchanging x and y;
* ``LowerSymmetry(alpha, beta)``:  V = x^4 + alpha y^4 + 2 beta x^2 y^2.

Their restriction W(theta) to the unit circle has closed forms, so the mode
directions (critical angles of W), their stability on the circle, and the
values of beta where the number of modes changes are all known analytically.
These are used to cross-check the generic tensor eigenvector solver.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import dynamics
from .spectra import SolverConfig, SpectrumReport, find_eigenpairs
from .symtensor import HomogeneousPolynomial, evaluate, from_terms

__all__ = [
    "InadmissibleFamily",
    "HigherSymmetry",
    "LowerSymmetry",
    "QuarticFamily",
    "AngularProfile",
    "ModeSet",
    "ScanResult",
    "Verdict",
    "OffsetResult",
    "CrossValidation",
    "potential_of",
    "restrict",
    "W",
    "dW",
    "d2W",
    "critical_angles",
    "mode_count",
    "bifurcation_scan",
    "offset_experiment",
    "cross_validate",
]


class InadmissibleFamily(ValueError):
    """Family parameters outside the range where the origin is a stable minimum."""


@dataclass(frozen=True)
class HigherSymmetry:
    beta: float

    def check(self) -> None:
        if not self.beta > -4:
            raise InadmissibleFamily(f"beta={self.beta} violates beta > -4 (origin must be a minimum)")
        if self.beta == 0:
            raise InadmissibleFamily("beta=0 is the rotationally invariant, infinitely degenerate case")


@dataclass(frozen=True)
class LowerSymmetry:
    alpha: float
    beta: float

    def check(self) -> None:
        if not 0 < self.alpha < 1:
            raise InadmissibleFamily(f"alpha={self.alpha} violates 0 < alpha < 1")
        if not self.beta > -math.sqrt(self.alpha):
            raise InadmissibleFamily(
                f"beta={self.beta} violates beta > -sqrt(alpha) = {-math.sqrt(self.alpha):.6g} (origin stability)"
            )


QuarticFamily = Union[HigherSymmetry, LowerSymmetry]


def potential_of(family: QuarticFamily) -> HomogeneousPolynomial:
    family.check()
    if isinstance(family, HigherSymmetry):
        return from_terms(2, 4, [((4, 0), 1.0), ((0, 4), 1.0), ((2, 2), 2.0 + family.beta)])
    a, b = family.alpha, family.beta
    return from_terms(2, 4, [((4, 0), 1.0), ((0, 4), a), ((2, 2), 2.0 * b)])


# -- restricted potential W(theta) -------------------------------------------------


def W(family: QuarticFamily, theta):
    theta = np.asarray(theta, dtype=float)
    if isinstance(family, HigherSymmetry):
        b = family.beta
        return (8.0 - b * np.cos(4 * theta) + b) / 8.0
    a, b = family.alpha, family.beta
    c, s = np.cos(theta), np.sin(theta)
    return c**4 + a * s**4 + 2 * b * s**2 * c**2


def dW(family: QuarticFamily, theta):
    theta = np.asarray(theta, dtype=float)
    if isinstance(family, HigherSymmetry):
        return 0.5 * family.beta * np.sin(4 * theta)
    a, b = family.alpha, family.beta
    return -(1 - a + (1 + a - 2 * b) * np.cos(2 * theta)) * np.sin(2 * theta)


def d2W(family: QuarticFamily, theta):
    theta = np.asarray(theta, dtype=float)
    if isinstance(family, HigherSymmetry):
        return 2 * family.beta * np.cos(4 * theta)
    a, b = family.alpha, family.beta
    return -2 * ((1 - a) * np.cos(2 * theta) + (1 + a - 2 * b) * np.cos(4 * theta))


@dataclass(frozen=True)
class AngularProfile:
    thetas: np.ndarray
    values: np.ndarray


def restrict(family: QuarticFamily, samples: int = 720, check: bool = True) -> AngularProfile:
    """W on a uniform grid over (-pi, pi] (last point is pi)."""
    if samples < 8:
        raise ValueError(f"samples must be at least 8, got {samples}")
    family.check()
    thetas = -np.pi + 2 * np.pi * np.arange(1, samples + 1) / samples
    values = W(family, thetas)
    if check:
        direct = evaluate(potential_of(family), np.column_stack([np.cos(thetas), np.sin(thetas)]))
        err = np.max(np.abs(direct - values))
        if err > 1e-12:
            raise AssertionError(f"closed-form W disagrees with the potential by {err:g}")
    return AngularProfile(thetas, values)


# -- critical angles -------------------------------------------------------------


@dataclass(frozen=True)
class ModeSet:
    angles: np.ndarray
    second_derivs: np.ndarray
    kinds: tuple[str, ...]  # "stable" | "unstable" | "degenerate"
    c_coeffs: np.ndarray
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.angles)


def _kind(d2: float, scale: float) -> str:
    if abs(d2) <= 1e-12 * scale:
        return "degenerate"
    return "stable" if d2 > 0 else "unstable"


def _wrap(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t


def _closed_form_d2(family: LowerSymmetry, kind: str) -> float:
    a, b = family.alpha, family.beta
    if kind == "x":
        return -4 * (1 - b)
    if kind == "y":
        return -4 * (a - b)
    return 8 * (a - b) * (1 - b) / (1 + a - 2 * b)


def off_axis_angle(family: LowerSymmetry) -> Optional[float]:
    """theta* in (0, pi/2) with cos(2 theta*) = (alpha - 1) / (1 + alpha - 2 beta), if it exists."""
    a, b = family.alpha, family.beta
    den = 1 + a - 2 * b
    if den == 0:
        return None
    ratio = (a - 1) / den
    if not -1 < ratio < 1:
        return None
    return 0.5 * math.acos(ratio)


def critical_angles(family: QuarticFamily) -> ModeSet:
    family.check()
    if isinstance(family, HigherSymmetry):
        angles = [_wrap(k * math.pi / 4) for k in range(-3, 5)]
        d2 = [float(d2W(family, t)) for t in angles]
    else:
        a, b = family.alpha, family.beta
        entries = [(0.0, "x"), (math.pi, "x"), (math.pi / 2, "y"), (-math.pi / 2, "y")]
        ts = off_axis_angle(family)
        if ts is not None:
            entries += [(ts, "*"), (-ts, "*"), (math.pi - ts, "*"), (ts - math.pi, "*")]
        entries.sort()
        angles = [t for t, _ in entries]
        d2 = [_closed_form_d2(family, k) for _, k in entries]
    scale = max(1.0, max(abs(x) for x in d2))
    kinds = tuple(_kind(x, scale) for x in d2)
    return ModeSet(
        angles=np.array(angles),
        second_derivs=np.array(d2),
        kinds=kinds,
        c_coeffs=W(family, np.array(angles)),
        degenerate="degenerate" in kinds,
    )


def mode_count(family: QuarticFamily) -> int:
    return len(critical_angles(family))


# -- bifurcations ----------------------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    alpha: float
    betas: np.ndarray
    counts: np.ndarray
    angles: tuple[np.ndarray, ...]
    transitions: tuple[float, ...] = field(default=())


def _bisect_count_change(alpha: float, lo: float, hi: float, tol: float = 1e-9) -> float:
    n_lo = mode_count(LowerSymmetry(alpha, lo))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mode_count(LowerSymmetry(alpha, mid)) == n_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bifurcation_scan(alpha: float, beta_range: tuple[float, float, float]) -> ScanResult:
    """Mode counts of the lower-symmetry family over a beta grid.

    Grid points below the admissible range are skipped. Each change in
    count between neighbouring grid points is refined by bisection.
    """
    lo, hi, step = beta_range
    if not 0 < alpha < 1:
        raise InadmissibleFamily(f"alpha={alpha} violates 0 < alpha < 1")
    if step <= 0 and hi != lo:
        raise ValueError("beta step must be positive")
    n = 1 if hi == lo else int(math.floor((hi - lo) / step + 1e-9)) + 1
    betas = np.array([lo + i * step for i in range(n)])
    betas = betas[betas > -math.sqrt(alpha)]
    if len(betas) == 0:
        raise InadmissibleFamily(f"no beta in the range exceeds -sqrt(alpha) = {-math.sqrt(alpha):.6g}")
    modes = [critical_angles(LowerSymmetry(alpha, float(b))) for b in betas]
    counts = np.array([len(ms) for ms in modes])
    transitions = []
    for i in range(len(betas) - 1):
        if counts[i] != counts[i + 1]:
            transitions.append(_bisect_count_change(alpha, float(betas[i]), float(betas[i + 1])))
    return ScanResult(alpha, betas, counts, tuple(ms.angles for ms in modes), tuple(transitions))


# -- dynamics near a mode ----------------------------------------------------------


class Verdict(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OffsetResult:
    verdict: Verdict
    max_deviation: float
    theta0: float
    offset: float
    t_end: float

    def to_dict(self) -> dict:
        return {
            "theta0": self.theta0,
            "offset": self.offset,
            "t_end": self.t_end,
            "max_deviation": self.max_deviation,
            "verdict": self.verdict.value,
        }


ESCAPE_ANGLE = 0.5
CONTAINMENT_FACTOR = 10.0


def offset_experiment(
    family: QuarticFamily,
    theta0: float,
    offset: float = 1e-3,
    t_end: float = 100.0,
    dt: float = 1e-3,
) -> OffsetResult:
    """Release from rest at unit radius, ``offset`` radians away from a mode.

    The angle to the mode line is measured only where ``|q| >= 1/2``: every
    trajectory passes near the origin, where the angle of ``q`` carries no
    information about distance from the line.
    """
    modes = critical_angles(family)
    if np.min(np.abs(np.angle(np.exp(1j * (modes.angles - theta0))))) > 1e-9:
        raise ValueError(f"theta0={theta0} is not a critical angle of {family}")
    sys = dynamics.SecondOrderSystem(potential_of(family))
    th = theta0 + offset
    traj = dynamics.integrate(sys, dynamics.State.at([math.cos(th), math.sin(th)]), dt, t_end)
    line = np.array([math.cos(theta0), math.sin(theta0)])
    dev = dynamics.line_deviation(traj, line, min_radius=0.5)
    if dev < CONTAINMENT_FACTOR * offset:
        verdict = Verdict.STABLE
    elif dev > ESCAPE_ANGLE:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return OffsetResult(verdict, dev, theta0, offset, t_end)


# -- solver cross-check ------------------------------------------------------------


@dataclass
class CrossValidation:
    family: QuarticFamily
    analytic: ModeSet
    report: SpectrumReport
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def raise_if_mismatch(self) -> None:
        if self.mismatches:
            raise AssertionError("; ".join(self.mismatches))


_KIND_OF = {"minimum": "stable", "maximum": "unstable", "degenerate": "degenerate"}


def cross_validate(
    family: QuarticFamily,
    config: SolverConfig = SolverConfig(),
    angle_tol: float = 1e-8,
    value_tol: float = 1e-9,
) -> CrossValidation:
    """Compare the numeric eigenpairs of the family's potential with its closed forms."""
    analytic = critical_angles(family)
    if analytic.degenerate:
        raise ValueError(f"{family} sits on a bifurcation value; angles are degenerate")
    report = find_eigenpairs(potential_of(family), config)
    out = CrossValidation(family, analytic, report)
    numeric = sorted(report.eigenpairs, key=lambda e: e.angle)
    if report.degenerate_family:
        out.mismatches.append("solver reports a degenerate family")
    if len(numeric) != len(analytic):
        out.mismatches.append(
            f"count: solver {len(numeric)} at {[round(e.angle, 9) for e in numeric]}, "
            f"closed form {len(analytic)} at {list(np.round(analytic.angles, 9))}"
        )
        return out
    for e, th, kind, c in zip(numeric, analytic.angles, analytic.kinds, analytic.c_coeffs):
        gap = abs(math.remainder(e.angle - th, 2 * math.pi))
        if gap > angle_tol:
            out.mismatches.append(f"angle: solver {e.angle!r} vs closed form {th!r}")
        got = _KIND_OF.get(e.classification.kind, e.classification.kind)
        if got != kind:
            out.mismatches.append(f"stability at {th:.9f}: solver {got} vs closed form {kind}")
        if abs(e.lam - 4 * c) > value_tol * max(1.0, abs(4 * c)):
            out.mismatches.append(f"eigenvalue at {th:.9f}: solver {e.lam!r} vs 4 W = {4 * c!r}")
    return out
