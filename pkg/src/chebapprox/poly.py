"""Multivariate polynomial bases, coefficient-vector polynomials, evaluation.

A :class:`Basis` is an ordered list of basis functions on R^n; each basis
function is a finite sum of monomial terms.  A :class:`Polynomial` is a real
coefficient vector over one basis.  The stock basis is the monomial basis of
all ``x^alpha`` with total degree at most ``d``, in graded-lexicographic
order, which has ``binomial(n + d, d)`` elements.

All objects are immutable after construction and safe to share between
threads; evaluation is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._linalg import numeric_rank

__all__ = [
    "MultiIndex",
    "Basis",
    "Polynomial",
    "enumerate_degree_basis",
    "design_matrix",
    "eval_poly",
    "basis_to_json",
    "basis_from_json",
]

# single deterministic stream for the generic-point independence probe
_PROBE_SEED = 0x5EB1


class BasisError(ValueError):
    """Raised for malformed bases (wrong dimensions, dependent elements)."""


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Exponent tuple of a monomial x^alpha in n variables."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise BasisError(f"negative exponent in multi-index {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)


# A basis element is a sum of (MultiIndex, coefficient) terms.
Element = tuple[tuple[MultiIndex, float], ...]


def _normalize_element(element) -> Element:
    if isinstance(element, MultiIndex):
        return ((element, 1.0),)
    terms = []
    for mi, coeff in element:
        if not isinstance(mi, MultiIndex):
            mi = MultiIndex(tuple(mi))
        terms.append((mi, float(coeff)))
    return tuple(terms)


@dataclass(frozen=True)
class Basis:
    """Ordered, linearly independent basis functions spanning a subspace of polynomials.

    Independence is checked numerically at construction: the design matrix on
    ``size + 5`` generic sample points must have full column rank (singular
    values above 1e-9 of the largest).
    """

    n: int
    elements: tuple[Element, ...]
    label: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise BasisError("ambient dimension must be >= 1")
        elems = tuple(_normalize_element(e) for e in self.elements)
        object.__setattr__(self, "elements", elems)
        for e in elems:
            for mi, _ in e:
                if len(mi) != self.n:
                    raise BasisError(
                        f"multi-index {mi.exponents} has {len(mi)} entries, expected {self.n}"
                    )
        if not elems:
            raise BasisError("basis must contain at least one element")
        rng = np.random.default_rng(_PROBE_SEED)
        probe = rng.uniform(-1.0, 1.0, size=(len(elems) + 5, self.n))
        if numeric_rank(design_matrix(self, probe, _check=False)) < len(elems):
            raise BasisError("basis elements are linearly dependent as functions")

    @property
    def size(self) -> int:
        return len(self.elements)

    def zero(self) -> "Polynomial":
        return Polynomial(self, np.zeros(self.size))

    def polynomial(self, coeffs) -> "Polynomial":
        return Polynomial(self, coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Real coefficient vector over a fixed basis; evaluation is linear in the coefficients."""

    basis: Basis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != self.basis.size:
            raise BasisError(
                f"coefficient vector has length {c.shape[0]}, basis has {self.basis.size} elements"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if arr.ndim <= 1:
            return eval_poly(self, arr)
        return design_matrix(self.basis, arr) @ self.coeffs


def enumerate_degree_basis(n: int, d: int) -> Basis:
    """All monomials of total degree <= d in n variables, graded-lexicographic order.

    Within each total degree the order is lexicographic with earlier variables
    dominating, e.g. for n=2, d=2: 1, x, y, x^2, xy, y^2.
    """
    if n < 1:
        raise BasisError("n must be >= 1")
    if d < 0:
        raise BasisError("d must be >= 0")

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    indices = [MultiIndex(c) for t in range(d + 1) for c in compositions(t, n)]
    return Basis(n=n, elements=tuple(indices), label=f"monomials n={n} deg<={d}")


def design_matrix(basis: Basis, points, _check: bool = True) -> np.ndarray:
    """Matrix of basis-element values: entry (i, j) = element j at point i."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if _check and pts.shape[1] != basis.n:
        raise BasisError(f"points have dimension {pts.shape[1]}, basis expects {basis.n}")
    cols = []
    for element in basis.elements:
        col = np.zeros(pts.shape[0])
        for mi, coeff in element:
            col += coeff * np.prod(pts ** np.array(mi.exponents), axis=1)
        cols.append(col)
    return np.column_stack(cols)


def eval_poly(p: Polynomial, x) -> float:
    """Value of ``p`` at a single point ``x`` in R^n."""
    pts = np.asarray(x, dtype=float).reshape(1, -1)
    if pts.shape[1] != p.basis.n:
        raise BasisError(f"point has dimension {pts.shape[1]}, basis expects {p.basis.n}")
    return float((design_matrix(p.basis, pts) @ p.coeffs)[0])


def basis_to_json(basis: Basis) -> str:
    payload = {
        "n": basis.n,
        "elements": [
            [[list(mi.exponents), coeff] for mi, coeff in element]
            for element in basis.elements
        ],
        "label": basis.label,
    }
    return json.dumps(payload, sort_keys=True)


def basis_from_json(text: str) -> Basis:
    payload = json.loads(text)
    elements = tuple(
        tuple((MultiIndex(tuple(exps)), float(coeff)) for exps, coeff in element)
        for element in payload["elements"]
    )
    return Basis(n=int(payload["n"]), elements=elements, label=payload.get("label", ""))
