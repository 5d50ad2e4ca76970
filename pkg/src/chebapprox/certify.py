"""Optimality certificates and solution-set dimension analysis.

A candidate q is optimal exactly when no polynomial in the approximating
space strictly separates its extreme-negative set from its extreme-positive
set (values <= -1 on one, >= +1 on the other, after scaling).  The separation
search is a small LP feasibility problem; when a separator exists it doubles
as a descent direction, and :func:`is_optimal` verifies the descent
numerically before reporting a suboptimality witness.

Dimension side: the solutions of one instance form a convex set Q whose
dimension never exceeds the dimension of the span of the one-sided cone

    K = { s in span(basis) : s >= 0 on N, s <= 0 on P }

taken over the essential deviation sets N, P.  On a finite domain the two
dimensions are equal; :func:`solution_vs_cone_dimension` computes both sides
independently and treats any violation as an implementation failure.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lp as lpmod
from ._linalg import (
    complement_basis,
    exact_nullspace,
    exact_orthogonal_complement,
    nullspace,
)
from .minimax import (
    FaceAnalysis,
    Instance,
    analyze_face,
    deviation_sets,
    max_deviation,
    use_exact_mode,
)
from .poly import Basis, Polynomial, design_matrix

__all__ = [
    "Certificate",
    "DimensionReport",
    "SeparationError",
    "InconsistentCertificateError",
    "TheoryViolationError",
    "OPTIMAL_CERTIFIED",
    "SUBOPTIMAL_WITNESS",
    "strict_separator",
    "is_optimal",
    "separating_cone_dimension",
    "solution_set_dimension",
    "solution_vs_cone_dimension",
    "dimension_report_to_json",
]

OPTIMAL_CERTIFIED = "optimal"
SUBOPTIMAL_WITNESS = "suboptimal"

_SEPARATOR_BOX = 1e6
_RAY_TOL = 1e-9


class SeparationError(ValueError):
    pass


class InconsistentCertificateError(RuntimeError):
    """A separator was found but no descent step reduced the deviation."""


class TheoryViolationError(RuntimeError):
    """dim Q exceeded dim S, or the two differ on a finite domain."""


@dataclass(frozen=True)
class Certificate:
    verdict: str
    witness: Polynomial | None = None
    margin: float | None = None
    descent_step: float | None = None
    descent_drop: float | None = None


@dataclass(frozen=True)
class DimensionReport:
    dim_q: int
    dim_s: int
    q_directions: tuple
    s_rays: tuple
    essential_neg: tuple
    essential_pos: tuple
    neg_points: np.ndarray
    pos_points: np.ndarray
    t_star: float
    exact: bool


def _canonical_coeffs(vec) -> np.ndarray:
    """Scale to max-abs 1 with the first significant coefficient positive."""
    v = np.asarray([float(x) for x in vec], dtype=float)
    peak = float(np.max(np.abs(v)))
    if peak == 0.0:
        return v
    v = v / peak
    for x in v:
        if abs(x) > 1e-10:
            if x < 0:
                v = -v
            break
    return v


def _check_disjoint(neg_pts: np.ndarray, pos_pts: np.ndarray):
    if neg_pts.size == 0 or pos_pts.size == 0:
        raise SeparationError("both point sets must be nonempty")
    d = np.linalg.norm(neg_pts[:, None, :] - pos_pts[None, :, :], axis=2)
    if float(np.min(d)) <= 1e-12:
        raise SeparationError("point sets overlap")


def strict_separator(neg_points, pos_points, basis: Basis,
                     box_bound: float = _SEPARATOR_BOX, exact: bool = False):
    """A polynomial <= -1 on the negative set and >= +1 on the positive set,
    or None when no strict separator exists in the basis span.

    On finite sets strict separability is scale invariant, so margin-1
    feasibility inside a large coefficient box is equivalent to it up to the
    box bound; solutions pressed against the box emit a warning.
    """
    neg_pts = np.atleast_2d(np.asarray(neg_points, dtype=float))
    pos_pts = np.atleast_2d(np.asarray(pos_points, dtype=float))
    _check_disjoint(neg_pts, pos_pts)
    m = basis.size
    rows = []
    for row in design_matrix(basis, neg_pts):
        rows.append((tuple(row), lpmod.LESS_EQUAL, -1.0))
    for row in design_matrix(basis, pos_pts):
        rows.append((tuple(row), lpmod.GREATER_EQUAL, 1.0))
    program = lpmod.LinearProgram(
        objective=(0.0,) * m,
        rows=tuple(rows),
        bounds=((-box_bound, box_bound),) * m,
    )
    result = lpmod.solve_lp_exact(program) if exact else lpmod.solve_lp(program)
    if result.status == lpmod.INFEASIBLE:
        return None
    if result.status != lpmod.OPTIMAL:
        lpmod.raise_for_status(result, "separator LP", SeparationError)
    coeffs = np.asarray([float(v) for v in result.x])
    if np.max(np.abs(coeffs)) >= 0.999 * box_bound:
        warnings.warn("separator near box bound, result may be scale-limited",
                      stacklevel=2)
    return Polynomial(basis, coeffs)


def _one_sided_improver(points, basis: Basis, side: str,
                        box_bound: float = _SEPARATOR_BOX):
    """Polynomial >= +1 ('pos') or <= -1 ('neg') on the given points, or None.

    Used when one deviation set is empty: q is then optimal iff not even a
    one-sided improving direction exists in the span.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rel = lpmod.GREATER_EQUAL if side == "pos" else lpmod.LESS_EQUAL
    target = 1.0 if side == "pos" else -1.0
    rows = tuple((tuple(row), rel, target) for row in design_matrix(basis, pts))
    program = lpmod.LinearProgram(
        objective=(0.0,) * basis.size,
        rows=rows,
        bounds=((-box_bound, box_bound),) * basis.size,
    )
    result = lpmod.solve_lp(program)
    if result.status == lpmod.INFEASIBLE:
        return None
    if result.status != lpmod.OPTIMAL:
        lpmod.raise_for_status(result, "separator LP", SeparationError)
    return Polynomial(basis, np.asarray(result.x))


def is_optimal(inst: Instance, q: Polynomial, tol: float | None = None) -> Certificate:
    """Certificate for a candidate: either no strict separator exists between
    its deviation sets (optimal), or a separating witness plus a verified
    descent step that strictly lowers the maximum deviation.
    """
    t = max_deviation(inst, q.coeffs)
    scale = 1.0 + float(np.max(np.abs(inst.values))) if inst.size else 1.0
    if t <= 1e-9 * scale:
        return Certificate(verdict=OPTIMAL_CERTIFIED)   # essentially exact fit
    neg, pos = deviation_sets(inst, q, tol)
    pts = inst.domain.points
    if neg and pos:
        witness = strict_separator(pts[list(neg)], pts[list(pos)], inst.basis)
    elif pos:
        witness = _one_sided_improver(pts[list(pos)], inst.basis, "pos")
    else:
        witness = _one_sided_improver(pts[list(neg)], inst.basis, "neg")
    if witness is None:
        return Certificate(verdict=OPTIMAL_CERTIFIED)

    active = pts[list(neg) + list(pos)]
    margin = float(np.min(np.abs(witness(active))))
    # halving search for the step: active points improve at rate >= margin,
    # so a small enough positive step must beat t strictly
    h = 1.0
    strict = 1e-12 * (1.0 + t)
    for _ in range(40):
        t_new = max_deviation(inst, q.coeffs + h * witness.coeffs)
        if t_new < t - strict:
            return Certificate(verdict=SUBOPTIMAL_WITNESS, witness=witness,
                               margin=margin, descent_step=h,
                               descent_drop=t - t_new)
        h *= 0.5
    raise InconsistentCertificateError(
        "inconsistent certificate: witness found but no descent step "
        "reduced the deviation (tolerance breakdown)"
    )


# --------------------------------------------------------------------------
# dimensions
# --------------------------------------------------------------------------


def _cone_lp_rows(gn, gp):
    rows = []
    for row in gn:
        rows.append((tuple(-v for v in row), lpmod.LESS_EQUAL, 0.0))  # s >= 0 on N
    for row in gp:
        rows.append((tuple(row), lpmod.LESS_EQUAL, 0.0))              # s <= 0 on P
    return tuple(rows)


def separating_cone_dimension(neg_points, pos_points, basis: Basis,
                              exact: bool = False):
    """Dimension of span K, K = {s : s >= 0 on the negative set, s <= 0 on the
    positive set}, together with independent rays spanning it.

    Starts from the lineality space (polynomials vanishing on both sets) and
    greedily adds cone members with a component outside the current span,
    found by maximizing objectives from the orthogonal complement over the
    cone intersected with the unit coefficient box.
    """
    neg_pts = np.atleast_2d(np.asarray(neg_points, dtype=float))
    pos_pts = np.atleast_2d(np.asarray(pos_points, dtype=float))
    _check_disjoint(neg_pts, pos_pts)
    m = basis.size
    gn = design_matrix(basis, neg_pts)
    gp = design_matrix(basis, pos_pts)
    if exact:
        gn_x = [[Fraction(float(v)) for v in row] for row in gn]
        gp_x = [[Fraction(float(v)) for v in row] for row in gp]
        span = [list(v) for v in exact_nullspace(gn_x + gp_x, m)]
        rows = _cone_lp_rows(gn_x, gp_x)
    else:
        span = [list(col) for col in nullspace(np.vstack([gn, gp])).T]
        rows = _cone_lp_rows(gn, gp)
    bounds = ((-1.0, 1.0),) * m

    while len(span) < m:
        if exact:
            comp = exact_orthogonal_complement(span, m)
        else:
            comp = [list(col) for col in complement_basis(span, m).T]
        grew = False
        for u in comp:
            for sigma in (1, -1):
                obj = tuple(-sigma * v for v in u)
                program = lpmod.LinearProgram(objective=obj, rows=rows, bounds=bounds)
                res = (lpmod.solve_lp_exact(program, want_dual=False) if exact
                       else lpmod.solve_lp(program, want_dual=False))
                if res.status != lpmod.OPTIMAL:
                    lpmod.raise_for_status(res, "cone LP", SeparationError)
                gain = -res.objective_value
                if gain > (0 if exact else _RAY_TOL):
                    span.append(list(res.x))
                    grew = True
                    break
            if grew:
                break
        if not grew:
            break

    rays = tuple(Polynomial(basis, _canonical_coeffs(v)) for v in span)
    return len(span), rays


def solution_set_dimension(inst: Instance, exact: bool | None = None,
                           _fa: FaceAnalysis | None = None):
    """Affine dimension of the optimal set and a basis of its direction space.

    Directions are the polynomials vanishing on all essential deviation
    points: the null space of the design matrix on those points.  In the
    exact-fit / interpolation regime the whole domain plays that role.
    """
    fa = _fa if _fa is not None else analyze_face(inst, exact=exact)
    if fa.exact_fit:
        idx = list(range(inst.size))
    else:
        idx = sorted(set(fa.essential_neg) | set(fa.essential_pos))
    pts = inst.domain.points[idx]
    m = inst.basis.size
    if fa.exact:
        rows = [[Fraction(float(v)) for v in row] for row in design_matrix(inst.basis, pts)]
        null = [list(v) for v in exact_nullspace(rows, m)]
    else:
        null = [list(col) for col in nullspace(design_matrix(inst.basis, pts)).T]
    directions = tuple(Polynomial(inst.basis, _canonical_coeffs(v)) for v in null)
    return len(null), directions


def solution_vs_cone_dimension(inst: Instance, exact: bool | None = None) -> DimensionReport:
    """Both dimensions computed independently, plus essential sets and witnesses.

    Raises :class:`TheoryViolationError` if dim Q > dim S ever holds, or if
    the two differ (the domain is finite, so they must agree); either one
    signals an implementation or tolerance failure, not a property of the
    instance.
    """
    if exact is None:
        exact = use_exact_mode(inst)
    fa = analyze_face(inst, exact=exact)
    dim_q, q_dirs = solution_set_dimension(inst, _fa=fa)
    if fa.exact_fit:
        # N = P = X: cone members satisfy s >= 0 and s <= 0 everywhere on X,
        # so span K is exactly the lineality space already computed for Q
        dim_s, s_rays = dim_q, q_dirs
    else:
        pts = inst.domain.points
        dim_s, s_rays = separating_cone_dimension(
            pts[list(fa.essential_neg)], pts[list(fa.essential_pos)],
            inst.basis, exact=fa.exact,
        )
    if dim_q != dim_s:
        raise TheoryViolationError(
            "theory violation: check tolerances "
            f"(dim Q = {dim_q}, dim S = {dim_s}, essential sets "
            f"{fa.essential_neg} / {fa.essential_pos}, exact={fa.exact})"
        )
    return DimensionReport(
        dim_q=dim_q, dim_s=dim_s,
        q_directions=q_dirs, s_rays=s_rays,
        essential_neg=fa.essential_neg, essential_pos=fa.essential_pos,
        neg_points=inst.domain.points[list(fa.essential_neg)],
        pos_points=inst.domain.points[list(fa.essential_pos)],
        t_star=float(fa.t_star), exact=fa.exact,
    )


def dimension_report_to_json(report: DimensionReport) -> str:
    payload = {
        "dim_q": report.dim_q,
        "dim_s": report.dim_s,
        "q_directions": [[float(c) for c in p.coeffs] for p in report.q_directions],
        "s_rays": [[float(c) for c in p.coeffs] for p in report.s_rays],
        "essential_neg": {
            "indices": list(report.essential_neg),
            "points": [list(map(float, p)) for p in report.neg_points],
        },
        "essential_pos": {
            "indices": list(report.essential_pos),
            "points": [list(map(float, p)) for p in report.pos_points],
        },
        "t_star": report.t_star,
        "exact": report.exact,
    }
    return json.dumps(payload, sort_keys=True)
