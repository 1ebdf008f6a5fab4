"""Homogeneous polynomials and their symmetric-tensor view.

A homogeneous polynomial of degree ``n`` in ``m`` real variables is stored
sparsely as a map from exponent tuples to coefficients. The same object can
be viewed as a fully symmetric order-``n`` tensor ``T`` with

    P(x) = T[i1, ..., in] x[i1] ... x[in]

where each tensor entry carries the coefficient of its monomial divided by
the number of distinct orderings of the index tuple.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "PolynomialInputError",
    "HomogeneousPolynomial",
    "SymmetricTensor",
    "from_terms",
    "evaluate",
    "gradient",
    "hessian",
    "tensor_view",
    "multinomial_count",
    "load_polynomial",
    "loads_polynomial",
    "dumps_polynomial",
    "monomials",
    "random_polynomial",
]


class PolynomialInputError(ValueError):
    """Invalid polynomial data: bad dimension, degree, monomial or file field."""


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Sparse homogeneous polynomial; build it with :func:`from_terms`."""

    dim: int
    degree: int
    terms: Mapping[Monomial, float] = field(default_factory=dict)

    @cached_property
    def exponents(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(list(self.terms.keys()), dtype=np.int64).reshape(-1, self.dim)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array(list(self.terms.values()), dtype=float)

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}*x^{list(e)}" for e, c in sorted(self.terms.items(), reverse=True))
        return f"HomogeneousPolynomial(dim={self.dim}, degree={self.degree}, {body or '0'})"

    def scaled(self, factor: float) -> HomogeneousPolynomial:
        return from_terms(self.dim, self.degree, [(e, factor * c) for e, c in self.terms.items()])

    def __neg__(self) -> HomogeneousPolynomial:
        return self.scaled(-1.0)


def _check_monomial(mono: Sequence[int], dim: int, degree: int) -> Monomial:
    try:
        exps = tuple(int(e) for e in mono)
    except (TypeError, ValueError) as exc:
        raise PolynomialInputError(f"monomial {mono!r} is not a sequence of integers") from exc
    if any(int(e) != e for e in mono):
        raise PolynomialInputError(f"monomial {mono!r} has non-integer exponents")
    if len(exps) != dim:
        raise PolynomialInputError(f"monomial {list(exps)} has length {len(exps)}, expected dim={dim}")
    if any(e < 0 for e in exps):
        raise PolynomialInputError(f"monomial {list(exps)} has a negative exponent")
    if sum(exps) != degree:
        raise PolynomialInputError(f"monomial {list(exps)} has degree {sum(exps)}, expected {degree}")
    return exps


def from_terms(dim: int, degree: int, terms: Iterable[tuple[Sequence[int], float]]) -> HomogeneousPolynomial:
    """Canonical constructor. Duplicate monomials are summed, zeros dropped.

    >>> from_terms(2, 4, [((4, 0), 1.0), ((4, 0), -1.0)]).terms
    {}
    """
    if int(dim) != dim or dim < 1:
        raise PolynomialInputError(f"dim must be a positive integer, got {dim!r}")
    if int(degree) != degree or degree < 2:
        raise PolynomialInputError(f"degree must be an integer >= 2, got {degree!r}")
    dim, degree = int(dim), int(degree)
    acc: dict[Monomial, float] = {}
    for mono, coeff in terms:
        key = _check_monomial(mono, dim, degree)
        c = float(coeff)
        if not math.isfinite(c):
            raise PolynomialInputError(f"coefficient of {list(key)} is not finite")
        acc[key] = acc.get(key, 0.0) + c
    clean = {k: v for k, v in sorted(acc.items(), reverse=True) if v != 0.0}
    return HomogeneousPolynomial(dim, degree, clean)


def _as_point(P: HomogeneousPolynomial, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (P.dim,):
        raise PolynomialInputError(f"point of shape {x.shape} does not match dim={P.dim}")
    return x


def _power_table(x: np.ndarray, n: int) -> np.ndarray:
    """``table[..., j, k] = x[..., j] ** k`` for ``k = 0..n``."""
    table = np.ones(x.shape + (n + 1,))
    for k in range(1, n + 1):
        table[..., k] = table[..., k - 1] * x
    return table


def _monomials(table: np.ndarray, E: np.ndarray) -> np.ndarray:
    """Values of the monomials with exponent rows ``E``; shape ``(..., len(E))``."""
    m = E.shape[1]
    return np.prod(table[..., np.arange(m), E], axis=-1)


def evaluate(P: HomogeneousPolynomial, x) -> float | np.ndarray:
    """Value of ``P`` at ``x``; ``x`` may be a batch of shape ``(..., dim)``."""
    x = _as_point(P, x)
    if not P.terms:
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[:-1])
    val = _monomials(_power_table(x, P.degree), P.exponents) @ P.coeffs
    return float(val) if x.ndim == 1 else val


def gradient(P: HomogeneousPolynomial, x) -> np.ndarray:
    """Gradient of ``P``; a batch ``(..., dim)`` gives ``(..., dim)``."""
    x = _as_point(P, x)
    E, c = P.exponents, P.coeffs
    out = np.zeros(x.shape)
    if not P.terms:
        return out
    table = _power_table(x, P.degree)
    for i in range(P.dim):
        Ei = E.copy()
        Ei[:, i] = np.maximum(Ei[:, i] - 1, 0)
        out[..., i] = _monomials(table, Ei) @ (c * E[:, i])
    return out


def hessian(P: HomogeneousPolynomial, x) -> np.ndarray:
    """Matrix of second partials; a batch ``(..., dim)`` gives ``(..., dim, dim)``."""
    x = _as_point(P, x)
    E, c = P.exponents, P.coeffs
    m = P.dim
    H = np.zeros(x.shape + (m,))
    if not P.terms:
        return H
    table = _power_table(x, P.degree)
    for i in range(m):
        for j in range(i, m):
            if i == j:
                w = c * E[:, i] * (E[:, i] - 1)
            else:
                w = c * E[:, i] * E[:, j]
            Eij = E.copy()
            Eij[:, i] -= 1
            Eij[:, j] -= 1
            Eij = np.maximum(Eij, 0)
            H[..., i, j] = H[..., j, i] = _monomials(table, Eij) @ w
    return H


def multinomial_count(mono: Sequence[int]) -> int:
    """Number of distinct index tuples whose exponent pattern is ``mono``."""
    return math.factorial(sum(mono)) // math.prod(math.factorial(e) for e in mono)


class SymmetricTensor:
    """Read-only symmetric tensor view of a homogeneous polynomial.

    Indices are 0-based: for ``P = 2 x^2 y^2`` the entry ``T[0, 0, 1, 1]``
    (and every permutation of it) is ``2 / 6``.
    """

    def __init__(self, poly: HomogeneousPolynomial):
        self.poly = poly
        self.dim = poly.dim
        self.order = poly.degree

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.dim,) * self.order

    def __getitem__(self, index) -> float:
        index = tuple(int(i) for i in index)
        if len(index) != self.order or any(not 0 <= i < self.dim for i in index):
            raise IndexError(f"index {index} out of range for shape {self.shape}")
        counts = Counter(index)
        mono = tuple(counts.get(i, 0) for i in range(self.dim))
        return self.poly.terms.get(mono, 0.0) / multinomial_count(mono)

    def to_array(self) -> np.ndarray:
        T = np.zeros(self.shape)
        for mono, coeff in self.poly.terms.items():
            base = [i for i, e in enumerate(mono) for _ in range(e)]
            val = coeff / multinomial_count(mono)
            for perm in set(itertools.permutations(base)):
                T[perm] = val
        return T

    def contract(self, x) -> float:
        """Contract with ``x`` in every slot."""
        T = self.to_array()
        x = np.asarray(x, dtype=float)
        for _ in range(self.order):
            T = T @ x
        return float(T)


def tensor_view(P: HomogeneousPolynomial) -> SymmetricTensor:
    return SymmetricTensor(P)


# -- JSON file format ---------------------------------------------------------


def _field_error(path: str, msg: str) -> PolynomialInputError:
    return PolynomialInputError(f"field {path}: {msg}")


def poly_from_dict(data) -> HomogeneousPolynomial:
    if not isinstance(data, dict):
        raise _field_error("<root>", "expected a JSON object")
    for key in ("dim", "degree", "terms"):
        if key not in data:
            raise _field_error(key, "missing")
    dim, degree, terms = data["dim"], data["degree"], data["terms"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise _field_error("dim", f"expected integer, got {dim!r}")
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise _field_error("degree", f"expected integer, got {degree!r}")
    if not isinstance(terms, list):
        raise _field_error("terms", "expected a list")
    parsed = []
    for k, term in enumerate(terms):
        where = f"terms[{k}]"
        if not isinstance(term, dict) or "monomial" not in term or "coeff" not in term:
            raise _field_error(where, 'expected {"monomial": [...], "coeff": number}')
        mono, coeff = term["monomial"], term["coeff"]
        if not isinstance(mono, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in mono):
            raise _field_error(f"{where}.monomial", f"expected list of integers, got {mono!r}")
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool):
            raise _field_error(f"{where}.coeff", f"expected number, got {coeff!r}")
        parsed.append((mono, coeff))
    try:
        return from_terms(dim, degree, parsed)
    except PolynomialInputError as exc:
        raise PolynomialInputError(f"field terms: {exc}") from None


def loads_polynomial(text: str) -> HomogeneousPolynomial:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolynomialInputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return poly_from_dict(data)


def load_polynomial(path) -> HomogeneousPolynomial:
    with open(path, encoding="utf-8") as fh:
        return loads_polynomial(fh.read())


def poly_to_dict(P: HomogeneousPolynomial) -> dict:
    return {
        "dim": P.dim,
        "degree": P.degree,
        "terms": [{"monomial": list(e), "coeff": c} for e, c in P.terms.items()],
    }


def dumps_polynomial(P: HomogeneousPolynomial) -> str:
    return json.dumps(poly_to_dict(P), indent=2)


def monomials(dim: int, degree: int) -> list[Monomial]:
    """All exponent tuples of the given degree, in reverse lexicographic order."""
    if dim == 1:
        return [(degree,)]
    return [(k,) + rest for k in range(degree, -1, -1) for rest in monomials(dim - 1, degree - k)]


def random_polynomial(dim: int, degree: int, seed: int = 0, scale: float = 1.0) -> HomogeneousPolynomial:
    """Polynomial with independent standard normal coefficients on every monomial."""
    rng = np.random.default_rng(seed)
    monos = monomials(dim, degree)
    return from_terms(dim, degree, zip(monos, scale * rng.standard_normal(len(monos))))
