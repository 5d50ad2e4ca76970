"""Dense rank / null-space helpers, in float and in exact rational arithmetic.

The float routines wrap numpy's SVD with a relative singular-value cutoff.
The exact routines run plain Gaussian elimination over ``fractions.Fraction``
so that rank decisions made in exact mode carry no floating tolerance.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def numeric_rank(a, rel_tol: float = 1e-9) -> int:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def nullspace(a, rel_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    ncols = a.shape[1]
    if a.size == 0:
        return np.eye(ncols)
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    cutoff = rel_tol * (s[0] if s.size and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T.copy()


def complement_basis(vectors, dim: int, rel_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of span(vectors)."""
    if not len(vectors):
        return np.eye(dim)
    return nullspace(np.asarray(vectors, dtype=float).reshape(len(vectors), dim), rel_tol)


# -- exact-rational counterparts ------------------------------------------

def _to_fraction_rows(rows) -> list[list[Fraction]]:
    return [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in rows]


def exact_rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rref, pivot columns)."""
    m = _to_fraction_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def exact_rank(rows) -> int:
    return len(exact_rref(rows)[1])


def exact_nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of the rational null space of the row system (one vector per free column)."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    rref, pivots = exact_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def exact_orthogonal_complement(vectors, dim: int) -> list[list[Fraction]]:
    """Rational basis of the orthogonal complement of span(vectors) in R^dim."""
    if not vectors:
        return [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
    return exact_nullspace(vectors, dim)


def exact_solve(a, b) -> list[Fraction] | None:
    """Solve the square rational system a x = b; None if singular."""
    m = _to_fraction_rows(a)
    rhs = [x if isinstance(x, Fraction) else Fraction(x) for x in b]
    n = len(m)
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot_row is None:
            return None
        m[col], m[pivot_row] = m[pivot_row], m[col]
        rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [v * inv for v in m[col]]
        rhs[col] *= inv
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a_ - f * b_ for a_, b_ in zip(m[i], m[col])]
                rhs[i] -= f * rhs[col]
    return rhs
