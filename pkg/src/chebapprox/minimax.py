"""Best uniform (minimax) polynomial approximation on a finite domain.

The fit ``min_q max_i |f(x_i) - q(x_i)|`` is the linear program

    min t   s.t.   -t <= f(x_i) - q_c(x_i) <= t    for every domain point,

solved by the dense simplex in :mod:`chebapprox.lp`.  Beyond the optimal
value, this module computes the structure of the optimal set Q:

* ``deviation_sets``: the points where a given q attains the extreme
  negative / positive deviation;
* ``relint_solution``: a solution in the relative interior of Q, built by
  averaging the vertex solution with per-constraint slack maximizers over the
  optimal face;
* ``essential_sets``: the deviation sets of a relative-interior solution,
  which are contained in the deviation sets of every optimal solution.

Tolerance policy: deviation sets use the band ``t - 1e-7*(1+t)``; the
essential/implicit-equality classification uses ``1e-6*(1+t)`` against an
optimal-face inflation of ``1e-10*(1+t)``.  When the instance is small and
its data consists of simple rationals, the face analysis switches to exact
Fraction arithmetic automatically and those decisions become tolerance-free.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lp as lpmod
from .domain import Domain, domain_to_json, domain_from_json
from .poly import Basis, Polynomial, basis_to_json, basis_from_json, design_matrix

__all__ = [
    "Instance",
    "Solution",
    "ContainmentReport",
    "InstanceError",
    "SuboptimalError",
    "chebyshev_lp",
    "solve_minimax",
    "max_deviation",
    "deviation_sets",
    "relint_solution",
    "essential_sets",
    "verify_containment",
    "active_tolerance",
    "use_exact_mode",
    "analyze_face",
    "FaceAnalysis",
    "instance_to_json",
    "instance_from_json",
    "solution_to_json",
]

# exact-rational face analysis switches on automatically below this size ...
_EXACT_SIZE_LIMIT = 2000
# ... provided every coordinate / value is a rational with a small denominator
_EXACT_MAX_DENOMINATOR = 1 << 16


class InstanceError(ValueError):
    pass


class SuboptimalError(ValueError):
    """Raised when an operation requires an optimal candidate but got a worse one."""


@dataclass(frozen=True)
class Instance:
    """One approximation problem: a finite domain, sampled values, a basis."""

    domain: Domain
    values: np.ndarray
    basis: Basis

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != self.domain.size:
            raise InstanceError(
                f"{vals.shape[0]} values for {self.domain.size} domain points"
            )
        if not np.all(np.isfinite(vals)):
            raise InstanceError("values must be finite")
        if self.basis.n != self.domain.n:
            raise InstanceError(
                f"basis lives in R^{self.basis.n}, domain in R^{self.domain.n}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.domain.size


@dataclass(frozen=True)
class Solution:
    q: Polynomial
    t_star: float
    neg_set: tuple
    pos_set: tuple
    is_relint: bool = False
    unbounded_solution_set: bool = False


@dataclass(frozen=True)
class ContainmentReport:
    passed: bool
    missing_neg: tuple
    missing_pos: tuple
    extra_neg: tuple
    extra_pos: tuple


def active_tolerance(t: float) -> float:
    return 1e-7 * (1.0 + abs(t))


def _exact_fit_tol(values) -> float:
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    return 1e-9 * (1.0 + scale)


def use_exact_mode(inst: Instance) -> bool:
    """Exact arithmetic pays off only when the data is genuinely low-denominator
    rational; 53-bit float noise would explode the Fractions instead."""
    if inst.size * inst.basis.size > _EXACT_SIZE_LIMIT:
        return False
    for v in inst.values:
        if Fraction(float(v)).denominator > _EXACT_MAX_DENOMINATOR:
            return False
    for p in inst.domain.points.ravel():
        if Fraction(float(p)).denominator > _EXACT_MAX_DENOMINATOR:
            return False
    return True


def chebyshev_lp(inst: Instance) -> lpmod.LinearProgram:
    """The LP behind the fit.  Variables (c_1..c_m, t); for every point i the
    row pair 2i (negative side) / 2i+1 (positive side)."""
    g = design_matrix(inst.basis, inst.domain.points)
    rows = []
    for i in range(inst.size):
        gi = g[i]
        fi = float(inst.values[i])
        rows.append((tuple(gi) + (-1.0,), lpmod.LESS_EQUAL, fi))     # q_i - t <= f_i
        rows.append((tuple(-gi) + (-1.0,), lpmod.LESS_EQUAL, -fi))   # -q_i - t <= -f_i
    objective = (0.0,) * inst.basis.size + (1.0,)
    return lpmod.LinearProgram(objective=objective, rows=tuple(rows))


def max_deviation(inst: Instance, coeffs) -> float:
    g = design_matrix(inst.basis, inst.domain.points)
    return float(np.max(np.abs(inst.values - g @ np.asarray(coeffs, dtype=float))))


def deviation_sets(inst: Instance, q: Polynomial, tol: float | None = None):
    """Indices of extreme negative deviation (q - f maximal) and extreme
    positive deviation (f - q maximal), within ``tol`` of the maximum."""
    if tol is not None and tol < 0:
        raise InstanceError("tol must be >= 0")
    g = design_matrix(inst.basis, inst.domain.points)
    dev = inst.values - g @ q.coeffs          # f - q
    t = float(np.max(np.abs(dev)))
    if tol is None:
        tol = active_tolerance(t)
    neg = tuple(int(i) for i in np.where(-dev >= t - tol)[0])
    pos = tuple(int(i) for i in np.where(dev >= t - tol)[0])
    return neg, pos


def solve_minimax(inst: Instance, exact: bool = False) -> Solution:
    """Optimal vertex solution.  In the interpolation regime (more basis
    elements than points) the solution set is unbounded; the returned solution
    carries a flag and a warning is emitted."""
    unbounded = inst.basis.size > inst.size
    if unbounded:
        warnings.warn(
            "basis is larger than the domain: fit is interpolation, "
            "solution set unbounded",
            stacklevel=2,
        )
    program = chebyshev_lp(inst)
    result = lpmod.solve_lp_exact(program) if exact else lpmod.solve_lp(program)
    if result.status != lpmod.OPTIMAL:
        lpmod.raise_for_status(result, "minimax LP", InstanceError)
    coeffs = np.array([float(v) for v in result.x[:-1]])
    q = Polynomial(inst.basis, coeffs)
    t_star = max(float(result.x[-1]), 0.0)
    neg, pos = deviation_sets(inst, q)
    return Solution(q=q, t_star=t_star, neg_set=neg, pos_set=pos,
                    unbounded_solution_set=unbounded)


# --------------------------------------------------------------------------
# face analysis: vertex, per-constraint slack maximizers, relint average
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceAnalysis:
    """Shared result behind relint_solution / essential_sets / dimensions."""

    exact: bool
    t_star: object                    # float or Fraction
    vertex: object                    # coefficient vector (list)
    relint: object                    # coefficient vector (list)
    essential_neg: tuple
    essential_pos: tuple
    exact_fit: bool
    unbounded: bool


def _design_rows(inst: Instance, exact: bool):
    g = design_matrix(inst.basis, inst.domain.points)
    if not exact:
        return g
    return [[Fraction(float(v)) for v in row] for row in g]


# Float face analysis walks a tightrope: the face polytope must be inflated
# (the LP's t* can err on either side), but instance geometry can amplify the
# inflation into spurious slack at a truly-essential point.  Keeping the
# inflation four orders of magnitude below the classification threshold
# leaves room for amplification factors up to ~1e4.
_FACE_EPS_REL = 1e-10
_ESSENTIAL_TOL_REL = 1e-6


def _face_lp_rows(g, f, t_star, exact: bool, eps=None):
    """Rows of the optimal-face polytope {c : |f_i - q_c(x_i)| <= t* + eps}."""
    if exact:
        eps = Fraction(0)
    elif eps is None:
        eps = _FACE_EPS_REL * (1.0 + float(t_star))
    rows = []
    for i in range(len(f)):
        fi = Fraction(float(f[i])) if exact else float(f[i])
        rows.append((tuple(g[i]), lpmod.LESS_EQUAL, fi + t_star + eps))
        rows.append((tuple(-v for v in g[i]), lpmod.LESS_EQUAL, t_star + eps - fi))
    return tuple(rows)


def _slacks(g, f, t_star, coeffs, exact: bool):
    """Per-point (negative-side, positive-side) slacks of |f - q| <= t*."""
    if exact:
        qv = [sum((gr[j] * coeffs[j] for j in range(len(coeffs))), start=Fraction(0))
              for gr in g]
        neg = [Fraction(float(f[i])) + t_star - qv[i] for i in range(len(f))]
        pos = [t_star - Fraction(float(f[i])) + qv[i] for i in range(len(f))]
        return neg, pos
    qv = g @ np.asarray(coeffs, dtype=float)
    neg = np.asarray(f, dtype=float) + t_star - qv
    pos = t_star - np.asarray(f, dtype=float) + qv
    return list(neg), list(pos)


def analyze_face(inst: Instance, exact: bool | None = None) -> FaceAnalysis:
    """Vertex solve, implicit-equality detection over the optimal face, and the
    relative-interior average.

    A constraint active at the vertex is an implicit equality iff its slack
    cannot be made positive anywhere on the face (checked by one auxiliary LP,
    skipped when an already computed face point certifies positive slack).
    The essential sets are exactly the implicit-equality points.
    """
    if exact is None:
        exact = use_exact_mode(inst)
    unbounded = inst.basis.size > inst.size

    program = chebyshev_lp(inst)
    result = (lpmod.solve_lp_exact(program, want_dual=False) if exact
              else lpmod.solve_lp(program, want_dual=False))
    if result.status != lpmod.OPTIMAL:
        lpmod.raise_for_status(result, "minimax LP", InstanceError)
    vertex = list(result.x[:-1])
    t_star = result.x[-1]
    if exact:
        t_star = t_star if t_star > 0 else Fraction(0)
    else:
        t_star = max(float(t_star), 0.0)

    f = inst.values
    fit_tol = Fraction(0) if exact else _exact_fit_tol(f)
    if t_star <= fit_tol:
        all_idx = tuple(range(inst.size))
        return FaceAnalysis(exact=exact, t_star=t_star, vertex=vertex, relint=vertex,
                            essential_neg=all_idx, essential_pos=all_idx,
                            exact_fit=True, unbounded=unbounded)

    g = _design_rows(inst, exact)
    tol = Fraction(0) if exact else _ESSENTIAL_TOL_REL * (1.0 + float(t_star))
    neg0, pos0 = _slacks(g, f, t_star, vertex, exact)
    candidates = [(i, "neg") for i in range(inst.size) if neg0[i] <= tol]
    candidates += [(i, "pos") for i in range(inst.size) if pos0[i] <= tol]

    face_rows = _face_lp_rows(g, f, t_star, exact)
    best_neg = list(neg0)
    best_pos = list(pos0)
    maximizers = []
    for i, side in candidates:
        seen = best_neg[i] if side == "neg" else best_pos[i]
        if seen > tol:
            continue  # an earlier face point already gives this constraint slack
        obj = tuple(g[i]) if side == "neg" else tuple(-v for v in g[i])
        aux = lpmod.LinearProgram(objective=obj, rows=face_rows)
        res = (lpmod.solve_lp_exact(aux, want_dual=False) if exact
               else lpmod.solve_lp(aux, want_dual=False))
        if res.status == lpmod.INFEASIBLE and not exact:
            # t* was underestimated by more than the inflation; widen once
            wide = _face_lp_rows(g, f, t_star, exact,
                                 eps=1e3 * _FACE_EPS_REL * (1.0 + float(t_star)))
            aux = lpmod.LinearProgram(objective=obj, rows=wide)
            res = lpmod.solve_lp(aux, want_dual=False)
        if res.status == lpmod.UNBOUNDED:
            # slack grows without bound along a lineality direction: re-solve
            # inside a huge coefficient box to still get a face point from it
            boxed = lpmod.LinearProgram(objective=aux.objective, rows=aux.rows,
                                        bounds=((-1e6, 1e6),) * inst.basis.size)
            res = (lpmod.solve_lp_exact(boxed, want_dual=False) if exact
                   else lpmod.solve_lp(boxed, want_dual=False))
        if res.status != lpmod.OPTIMAL:
            lpmod.raise_for_status(res, "face LP", InstanceError)
        m = list(res.x)
        maximizers.append(m)
        mneg, mpos = _slacks(g, f, t_star, m, exact)
        for k in range(inst.size):
            if mneg[k] > best_neg[k]:
                best_neg[k] = mneg[k]
            if mpos[k] > best_pos[k]:
                best_pos[k] = mpos[k]

    ess_neg = tuple(i for i in range(inst.size) if best_neg[i] <= tol)
    ess_pos = tuple(i for i in range(inst.size) if best_pos[i] <= tol)

    points = [vertex] + maximizers
    if exact:
        w = Fraction(1, len(points))
        relint = [sum((p[j] for p in points), start=Fraction(0)) * w
                  for j in range(inst.basis.size)]
    else:
        relint = list(np.mean(np.asarray(points, dtype=float), axis=0))
    return FaceAnalysis(exact=exact, t_star=t_star, vertex=vertex, relint=relint,
                        essential_neg=ess_neg, essential_pos=ess_pos,
                        exact_fit=False, unbounded=unbounded)


def relint_solution(inst: Instance, exact: bool | None = None) -> Solution:
    """An optimal solution in the relative interior of the optimal set.

    Every deviation point of this solution is a deviation point of every
    other optimal solution; its deviation sets are the essential sets.
    """
    fa = analyze_face(inst, exact=exact)
    coeffs = np.array([float(v) for v in fa.relint])
    return Solution(q=Polynomial(inst.basis, coeffs), t_star=float(fa.t_star),
                    neg_set=fa.essential_neg, pos_set=fa.essential_pos,
                    is_relint=True, unbounded_solution_set=fa.unbounded)


def essential_sets(inst: Instance, exact: bool | None = None):
    fa = analyze_face(inst, exact=exact)
    return fa.essential_neg, fa.essential_pos


def verify_containment(inst: Instance, p: Polynomial, tol: float | None = None) -> ContainmentReport:
    """Check that the essential sets are contained in the deviation sets of an
    optimal candidate ``p``; the report also lists the candidate's extra
    deviation points."""
    fa = analyze_face(inst)
    t_star = float(fa.t_star)
    if tol is None:
        tol = active_tolerance(t_star)
    t_p = max_deviation(inst, p.coeffs)
    if t_p > t_star + tol:
        raise SuboptimalError(
            f"containment undefined for suboptimal candidate: deviation {t_p} > optimum {t_star}"
        )
    neg_p, pos_p = deviation_sets(inst, p, tol)
    missing_neg = tuple(i for i in fa.essential_neg if i not in neg_p)
    missing_pos = tuple(i for i in fa.essential_pos if i not in pos_p)
    extra_neg = tuple(i for i in neg_p if i not in fa.essential_neg)
    extra_pos = tuple(i for i in pos_p if i not in fa.essential_pos)
    return ContainmentReport(
        passed=not missing_neg and not missing_pos,
        missing_neg=missing_neg, missing_pos=missing_pos,
        extra_neg=extra_neg, extra_pos=extra_pos,
    )


# -- serialization ----------------------------------------------------------


def instance_to_json(inst: Instance) -> str:
    payload = {
        "domain": json.loads(domain_to_json(inst.domain)),
        "values": [float(v) for v in inst.values],
        "basis": json.loads(basis_to_json(inst.basis)),
    }
    return json.dumps(payload, sort_keys=True)


def instance_from_json(text: str) -> Instance:
    payload = json.loads(text)
    return Instance(
        domain=domain_from_json(json.dumps(payload["domain"])),
        values=np.asarray(payload["values"], dtype=float),
        basis=basis_from_json(json.dumps(payload["basis"])),
    )


def solution_to_json(inst: Instance, sol: Solution) -> str:
    pts = inst.domain.points
    payload = {
        "coefficients": [float(c) for c in sol.q.coeffs],
        "t_star": sol.t_star,
        "neg_set": list(sol.neg_set),
        "pos_set": list(sol.pos_set),
        "neg_points": [list(map(float, pts[i])) for i in sol.neg_set],
        "pos_points": [list(map(float, pts[i])) for i in sol.pos_set],
        "is_relint": sol.is_relint,
        "unbounded_solution_set": sol.unbounded_solution_set,
    }
    return json.dumps(payload, sort_keys=True)
