"""Real unit eigenvectors of symmetric tensors.

An eigenpair ``(v, lam)`` of the gradient map of a homogeneous polynomial
``P`` satisfies ``grad P(v) = lam * v`` with ``|v| = 1``; equivalently ``v``
is a critical point of ``P`` on the unit sphere and ``lam = n * P(v)``.
All of them are found by multistart Newton iteration on the Lagrange system
``{grad P(x) - lam x = 0, |x|^2 = 1}`` followed by deduplication.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np
from scipy.stats import norm, qmc

from .symtensor import HomogeneousPolynomial, evaluate, gradient, hessian

__all__ = [
    "SolverConfig",
    "CriticalClass",
    "Eigenpair",
    "SpectrumReport",
    "ConvergenceError",
    "bezout_bound",
    "max_eigenspaces",
    "start_points",
    "refine",
    "find_eigenpairs",
    "multiplicity_one",
    "classify",
    "winding_index",
    "eigenspace_count",
    "index_sum_check",
    "parity_check",
    "table_compatibility",
    "euler_characteristic",
]

Kind = Literal["minimum", "maximum", "saddle", "degenerate"]

_INT64_MAX = 2**63 - 1


class ConvergenceError(RuntimeError):
    """No start point converged to an eigenpair."""


@dataclass(frozen=True)
class SolverConfig:
    starts: Optional[int] = None  # default max(200, 50 * N_R)
    tol: float = 1e-10
    dedup_tol: float = 1e-6
    seed: int = 0
    random_starts: int = 0
    max_iter: int = 60
    degeneracy_tol: float = 1e-8


@dataclass(frozen=True)
class CriticalClass:
    kind: Kind
    morse_index: int
    ph_index: Optional[int]  # None when unknown
    saddle_order: Optional[int] = None  # k in "saddle of index -k"

    def label(self) -> str:
        if self.kind == "saddle":
            return f"saddle{self.saddle_order}"
        return self.kind


@dataclass(frozen=True)
class Eigenpair:
    v: np.ndarray
    lam: float
    residual: float
    multiplicity_one: Optional[bool] = None
    classification: Optional[CriticalClass] = None
    iterations: int = 0

    @property
    def angle(self) -> float:
        """Polar angle in (-pi, pi]; meaningful for dim 2."""
        return float(np.arctan2(self.v[1], self.v[0]))


@dataclass(frozen=True)
class SpectrumReport:
    eigenpairs: tuple[Eigenpair, ...]
    dim: int
    degree: int
    bezout_bound: Optional[int]
    degenerate_family: bool
    parity_ok: Optional[bool] = None
    index_sum: Optional[int] = None
    index_sum_ok: Optional[bool] = None
    unreliable: bool = False
    starts_used: int = 0

    @property
    def real_count(self) -> int:
        return len(self.eigenpairs)

    @property
    def chi(self) -> int:
        return euler_characteristic(self.dim)

    @property
    def eigenspaces(self) -> int:
        return eigenspace_count(self)


def euler_characteristic(m: int) -> int:
    """Euler characteristic of the sphere S^(m-1)."""
    return 2 if m % 2 == 1 else 0


def bezout_bound(p: int, q: int) -> int:
    """Maximal finite number of eigenspaces of a degree-``p`` map on K^q.

    >>> bezout_bound(3, 3)
    13
    """
    if p < 2 or q < 1:
        raise ValueError(f"bezout_bound needs p >= 2 and q >= 1, got p={p}, q={q}")
    n = (p**q - 1) // (p - 1)
    if n > _INT64_MAX:
        raise OverflowError(f"bezout_bound({p}, {q}) exceeds 64-bit range")
    return n


def max_eigenspaces(degree: int, dim: int) -> int:
    """Finite eigenspace bound; the matrix case (degree 2) has ``dim``."""
    if degree == 2:
        return dim
    return bezout_bound(degree - 1, dim)


# -- start points ---------------------------------------------------------------


def start_points(dim: int, count: int, seed: int = 0, random_starts: int = 0) -> np.ndarray:
    """Deterministic near-uniform covering of S^(dim-1), plus optional random points."""
    if dim == 1:
        pts = np.array([[1.0], [-1.0]])
    elif dim == 2:
        th = -np.pi + 2 * np.pi * (np.arange(count) + 0.5) / count
        pts = np.column_stack([np.cos(th), np.sin(th)])
    elif dim == 3:
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        r = np.sqrt(1 - z * z)
        phi = np.pi * (1 + 5**0.5) * k
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        u = qmc.Halton(d=dim, scramble=False).random(count + 1)[1:]
        pts = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    if random_starts:
        rng = np.random.default_rng(seed)
        extra = rng.standard_normal((random_starts, dim))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        pts = np.vstack([pts, extra])
    return pts


# -- local solver -----------------------------------------------------------------


def _residual(P, x):
    g = gradient(P, x)
    lam = float(x @ g)
    return g, lam, float(np.linalg.norm(g - lam * x))


def refine(
    P: HomogeneousPolynomial,
    x0,
    tol: float = 1e-10,
    max_iter: int = 60,
) -> Optional[Eigenpair]:
    """Newton iteration on the Lagrange system from ``x0``.

    Returns ``None`` when the iteration does not reach ``tol``. Iterates past
    ``tol`` while the residual keeps shrinking so that returned points are
    polished to rounding level.
    """
    x = np.asarray(x0, dtype=float)
    nrm = np.linalg.norm(x)
    if nrm == 0 or not np.isfinite(nrm):
        raise ValueError("refine needs a finite nonzero start vector")
    x = x / nrm
    m = P.dim
    g, lam, res = _residual(P, x)
    best = (res, x, lam)
    it = 0
    converged_at = 0 if res < tol else None
    stall = 0
    while it < max_iter and res > 0:
        it += 1
        H = hessian(P, x)
        J = np.zeros((m + 1, m + 1))
        J[:m, :m] = H - lam * np.eye(m)
        J[:m, m] = -x
        J[m, :m] = x
        F = np.concatenate([g - lam * x, [0.5 * (x @ x - 1.0)]])
        try:
            if np.linalg.cond(J) > 1e14:
                raise np.linalg.LinAlgError
            step = np.linalg.solve(J, -F)
            x_new = x + step[:m]
        except np.linalg.LinAlgError:
            # projected gradient step
            tang = g - lam * x
            x_new = x + 0.1 * tang / max(1.0, np.linalg.norm(tang))
        if not np.all(np.isfinite(x_new)) or np.linalg.norm(x_new) == 0:
            break
        x = x_new / np.linalg.norm(x_new)
        g, lam, res = _residual(P, x)
        if res < best[0]:
            improved = res < 0.5 * best[0]
            best = (res, x, lam)
            stall = 0 if improved else stall + 1
        else:
            stall += 1
        if converged_at is None and best[0] < tol:
            converged_at = it
        if best[0] < tol and stall >= 2:
            break
    res, x, lam = best
    if not res < tol:
        return None
    # polishing steps past tol are not counted
    return Eigenpair(v=x, lam=lam, residual=res, iterations=converged_at)


# -- classification -----------------------------------------------------------------


def _tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of unit ``v``."""
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(len(v))]))
    return q[:, 1:len(v)]


def tangent_hessian(P: HomogeneousPolynomial, e: Eigenpair) -> np.ndarray:
    """Second derivative of ``P`` restricted to the sphere at ``e.v``."""
    B = _tangent_basis(e.v)
    H = hessian(P, e.v)
    return B.T @ (H - e.lam * np.eye(P.dim)) @ B


def multiplicity_one(P: HomogeneousPolynomial, e: Eigenpair, rtol: float = 1e-9) -> Optional[bool]:
    """True iff ``e.lam`` is not an eigenvalue of the Hessian at ``e.v``.

    Returns ``None`` (inapplicable) when ``e.lam`` is zero.
    """
    w = np.linalg.eigvalsh(hessian(P, e.v))
    scale = max(abs(e.lam), np.abs(w).max())
    if scale == 0 or abs(e.lam) <= 1e-12 * scale:
        return None
    return bool(np.all(np.abs(w - e.lam) > rtol * scale))


def winding_index(P: HomogeneousPolynomial, v, radius: float, samples: int = 64) -> int:
    """Index of the projected gradient field at ``v`` on S^2 (dim 3 only).

    Winding number of the tangential gradient along a small circle around ``v``.
    """
    v = np.asarray(v, dtype=float)
    if len(v) != 3:
        raise ValueError("winding_index is implemented for dim 3 only")
    B = _tangent_basis(v)
    phis = 2 * np.pi * np.arange(samples + 1) / samples
    angles = []
    for phi in phis:
        w = v + radius * (np.cos(phi) * B[:, 0] + np.sin(phi) * B[:, 1])
        w /= np.linalg.norm(w)
        g = gradient(P, w)
        g = g - (w @ g) * w
        angles.append(np.arctan2(g @ B[:, 1], g @ B[:, 0]))
    total = np.sum(np.angle(np.exp(1j * np.diff(angles))))
    return int(round(total / (2 * np.pi)))


def classify(P: HomogeneousPolynomial, e: Eigenpair, degeneracy_tol: float = 1e-8) -> CriticalClass:
    m = P.dim
    if m == 1:
        return CriticalClass("minimum", 0, 1)
    Ht = tangent_hessian(P, e)
    w = np.linalg.eigvalsh(Ht)
    scale = max(np.abs(np.linalg.eigvalsh(hessian(P, e.v))).max(), abs(e.lam), np.abs(w).max())
    morse = int(np.sum(w < 0))
    if scale == 0 or np.any(np.abs(w) < degeneracy_tol * scale):
        ph = winding_index(P, e.v, 100 * degeneracy_tol) if m == 3 else None
        return CriticalClass("degenerate", morse, ph)
    ph = (-1) ** morse
    if morse == 0:
        return CriticalClass("minimum", 0, ph)
    if morse == m - 1:
        return CriticalClass("maximum", morse, ph)
    return CriticalClass("saddle", morse, ph, saddle_order=morse)


# -- global search --------------------------------------------------------------


def _angular_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 2.0 * math.asin(min(1.0, float(np.linalg.norm(a - b)) / 2.0))


def _newton_batch(P: HomogeneousPolynomial, X: np.ndarray, iters: int) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-Newton iteration applied to all start points at once."""
    m = P.dim
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    eye = np.eye(m)
    active = np.ones(len(X), dtype=bool)
    for _ in range(iters):
        Xa = X[active]
        G = gradient(P, Xa)
        lam = np.einsum("ij,ij->i", Xa, G)
        F = np.concatenate([G - lam[:, None] * Xa, 0.5 * (np.einsum("ij,ij->i", Xa, Xa) - 1)[:, None]], axis=1)
        done = np.abs(F).max(axis=1) < 1e-14
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
        Xa, G, lam, F, idx = Xa[~done], G[~done], lam[~done], F[~done], idx[~done]
        J = np.zeros((len(Xa), m + 1, m + 1))
        J[:, :m, :m] = hessian(P, Xa) - lam[:, None, None] * eye
        J[:, :m, m] = -Xa
        J[:, m, :m] = Xa
        # singular rows take a projected gradient step instead
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(J)
        ok = np.isfinite(cond) & (cond < 1e14)
        step = np.zeros((len(Xa), m))
        if ok.any():
            step[ok] = np.linalg.solve(J[ok], -F[ok][..., None])[:, :m, 0]
        bad = ~ok
        if bad.any():
            tang = F[bad, :m]
            step[bad] = 0.1 * tang / np.maximum(1.0, np.linalg.norm(tang, axis=1))[:, None]
        Xn = Xa + step
        nrm = np.linalg.norm(Xn, axis=1)
        good = np.isfinite(nrm) & (nrm > 0)
        X[idx[good]] = Xn[good] / nrm[good, None]
    G = gradient(P, X)
    lam = np.einsum("ij,ij->i", X, G)
    res = np.linalg.norm(G - lam[:, None] * X, axis=1)
    return X, res


def _dedup_points(X: np.ndarray, tol: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for x in X:
        if all(_angular_distance(x, k) >= tol for k in kept):
            kept.append(x)
    return kept


def _dedup(pairs: list[Eigenpair], tol: float) -> list[Eigenpair]:
    kept: list[Eigenpair] = []
    for e in sorted(pairs, key=lambda e: e.residual):
        if all(_angular_distance(e.v, k.v) >= tol for k in kept):
            kept.append(e)
    return kept


def _sort_key(e: Eigenpair):
    if len(e.v) == 2:
        return (e.angle,)
    return tuple(np.round(-e.v, 9))


def eigenspace_count(report: SpectrumReport, tol: float = 1e-6) -> int:
    """Number of lines R v spanned by the reported eigenvectors."""
    lines: list[np.ndarray] = []
    for e in report.eigenpairs:
        if all(min(_angular_distance(e.v, l), _angular_distance(-e.v, l)) >= tol for l in lines):
            lines.append(e.v)
    return len(lines)


def find_eigenpairs(P: HomogeneousPolynomial, config: SolverConfig = SolverConfig()) -> SpectrumReport:
    """All real unit eigenpairs of ``P`` found by multistart refinement."""
    if P.degree < 2 or P.dim < 2:
        raise ValueError("find_eigenpairs needs degree >= 2 and dim >= 2")
    bound = max_eigenspaces(P.degree, P.dim)
    count = config.starts or max(200, 50 * bound)
    starts = start_points(P.dim, count, config.seed, config.random_starts)
    X, res = _newton_batch(P, starts, config.max_iter)
    candidates = _dedup_points(X[res < max(config.tol, 1e-6)], config.dedup_tol)
    found = [refine(P, x0, config.tol, config.max_iter) for x0 in candidates]
    found = [e for e in found if e is not None]
    if not found:
        raise ConvergenceError(f"none of {len(starts)} starts converged to tolerance {config.tol}")
    pairs = _dedup(found, config.dedup_tol)
    degenerate = len(pairs) > 2 * bound
    pairs = [
        replace(
            e,
            multiplicity_one=multiplicity_one(P, e),
            classification=classify(P, e, config.degeneracy_tol),
        )
        for e in pairs
    ]
    pairs.sort(key=_sort_key)
    report = SpectrumReport(
        eigenpairs=tuple(pairs),
        dim=P.dim,
        degree=P.degree,
        bezout_bound=bezout_bound(P.degree - 1, P.dim) if P.degree >= 3 else None,
        degenerate_family=degenerate,
        unreliable=degenerate,
        starts_used=len(starts),
    )
    p = P.degree - 1
    idx_ok = index_sum_check(report, P.dim)
    ph = [e.classification.ph_index for e in pairs]
    return replace(
        report,
        parity_ok=parity_check(report, p, P.dim),
        index_sum=None if degenerate or any(i is None for i in ph) else int(sum(ph)),
        index_sum_ok=idx_ok,
    )


# -- counting checks -----------------------------------------------------------


def index_sum_check(report: SpectrumReport, m: int) -> Optional[bool]:
    """Sum of Poincare-Hopf indices equals chi(S^(m-1)); ``None`` if inapplicable."""
    if report.degenerate_family:
        return None
    idx = [e.classification.ph_index if e.classification else None for e in report.eigenpairs]
    if any(i is None for i in idx):
        return None
    return sum(idx) == euler_characteristic(m)


def parity_check(report: SpectrumReport, p: int, q: int) -> Optional[bool]:
    """Real eigenspace count is congruent to N_R mod 2; ``None`` if inapplicable."""
    if report.degenerate_family or p < 2:
        return None
    return eigenspace_count(report) % 2 == bezout_bound(p, q) % 2


def table_compatibility(
    max_count: int,
    min_count: int,
    saddle_counts: dict[int, int],
    m: int = 3,
    p: int = 2,
) -> bool:
    """Whether a census of critical points on S^2 is topologically admissible.

    ``saddle_counts[k]`` is the number of saddles of index ``-k``.
    """
    if m != 3:
        raise ValueError("table_compatibility is defined for m = 3")
    index_sum = max_count + min_count - sum(k * c for k, c in saddle_counts.items())
    total = max_count + min_count + sum(saddle_counts.values())
    ok = index_sum == 2 and total <= 2 * bezout_bound(p, 3)
    if (p + 1) % 2 == 1:
        ok = ok and max_count == min_count
    return ok
