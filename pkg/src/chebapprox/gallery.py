"""Built-in instances with golden expected values.

Each entry builds a reproducible instance at a requested grid resolution and
carries the values its solution must reproduce: the optimal deviation, known
optimal coefficient vectors, the essential deviation sets, and the dimension
of the solution set.  Grids are always augmented with the handful of points
where the extreme deviations occur, so the finite-domain optimum equals the
underlying continuous one for every registered instance.

Instance ids:

* ``disk-sextic-deg2``  degree-2 fit of a sextic on the unit disk; the
  solution set is the segment between ``1`` and ``3x^2 + 3y^2 - 2``.
* ``square-f-linear``   linear fit of (x^2 - 1/2)(1 - y^2) on the square;
  unique in the continuum, one-dimensional on every finite grid.
* ``square-h-linear``   linear fit of (x^2 - 1/2)(1 - |y|); the optimal set
  is {alpha * y : |alpha| <= 1/2} regardless of the grid.
* ``square-g-linear``   linear fit of (min(|2x|, 2-|2x|) - 1/2)(1 - y^2);
  five alternating collinear deviation points.
* ``bump-sharp-hex``    sharp bump with prescribed sets on the hexagon,
  sampled on the radius-2 disk; zero is optimal with deviation 1.
* ``bump-smooth-hex``   smooth variant of the same; its optimal step range
  along x^2 + y^2 - 1 shrinks under grid refinement.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import certify, construct
from .domain import Domain, box_grid, disk_grid, find_index, with_points
from .minimax import Instance, analyze_face, max_deviation, solve_minimax, verify_containment
from .poly import Polynomial, enumerate_degree_basis

__all__ = [
    "GalleryError",
    "Expected",
    "CheckResult",
    "InstanceReport",
    "GalleryReport",
    "INSTANCE_IDS",
    "get_instance",
    "check_instance",
    "run_all",
    "refinement_study",
    "report_to_json",
]

_SQRT3 = math.sqrt(3.0)

Z_POINTS = {
    0: (0.0, 0.0),
    1: (1.0, 0.0),
    2: (0.5, _SQRT3 / 2),
    3: (-0.5, _SQRT3 / 2),
    4: (-1.0, 0.0),
    5: (-0.5, -_SQRT3 / 2),
    6: (0.5, -_SQRT3 / 2),
}
HEX_NEG = np.array([Z_POINTS[1], Z_POINTS[3], Z_POINTS[5]])
HEX_POS = np.array([Z_POINTS[2], Z_POINTS[4], Z_POINTS[6]])

# canonical directions (graded-lex coefficients, peak-normalized)
_CONIC = (-1.0, 0.0, 0.0, 1.0, 0.0, 1.0)     # x^2 + y^2 - 1
_YDIR = (0.0, 0.0, 1.0)                      # y


class GalleryError(ValueError):
    pass


def sextic(pts: np.ndarray) -> np.ndarray:
    """x^6 + y^6 + 3x^4y^2 + 3x^2y^4 + 6xy^2 - 2x^3; equals (x^2+y^2)^3 + 6xy^2 - 2x^3."""
    x, y = pts[:, 0], pts[:, 1]
    return x**6 + y**6 + 3 * x**4 * y**2 + 3 * x**2 * y**4 + 6 * x * y**2 - 2 * x**3


def square_f(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    return (x**2 - 0.5) * (1.0 - y**2)


def square_h(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    return (x**2 - 0.5) * (1.0 - np.abs(y))


def square_g(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    return (np.minimum(np.abs(2 * x), 2.0 - np.abs(2 * x)) - 0.5) * (1.0 - y**2)


@dataclass(frozen=True)
class Expected:
    t_star: float
    optima: tuple                 # known optimal coefficient vectors (graded-lex)
    essential_neg: tuple          # points
    essential_pos: tuple          # points
    dim_q: int
    dim_s: int
    direction: tuple | None      # canonical coefficients of the 1-dim direction
    notes: tuple = ()


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class InstanceReport:
    id: str
    checks: tuple
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)


@dataclass(frozen=True)
class GalleryReport:
    instances: tuple

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.instances)


# -- builders ----------------------------------------------------------------

_MAX_SPACING = 0.5


def _check_resolution(resolution):
    if resolution is None:
        return None
    h = float(resolution)
    if not (0.0 < h <= _MAX_SPACING):
        raise GalleryError(
            f"resolution {resolution} too coarse: need a spacing in (0, {_MAX_SPACING}]"
        )
    return h


def _square_domain(h: float | None, extra=()) -> Domain:
    per_axis = 13 if h is None else int(round(2.0 / h)) + 1
    dom = box_grid((-1.0, -1.0), (1.0, 1.0), per_axis)
    anchors = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0),
               (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0),
               (0.0, 1.0), (0.0, -1.0)]
    anchors += list(extra)
    return with_points(dom, np.array(anchors))


def _unit_disk_domain(h: float | None) -> Domain:
    if h is None:
        rings, per_ring = 8, 24
    else:
        rings = max(2, int(round(1.0 / h)))
        per_ring = 6 * max(1, int(round(2.0 * math.pi / (6.0 * h))))
    dom = disk_grid((0.0, 0.0), 1.0, rings, per_ring)
    zs = np.array([Z_POINTS[i] for i in range(7)])
    return with_points(dom, zs, labels=[f"z{i}" for i in range(7)])


def _radius2_disk_domain(h: float | None) -> Domain:
    if h is None:
        rings, per_ring = 8, 24
    else:
        rings = 2 * max(1, int(round(1.0 / h)))        # even: radius-1 ring present
        per_ring = 6 * max(1, int(round(4.0 * math.pi / (6.0 * h))))
    return disk_grid((0.0, 0.0), 2.0, rings, per_ring)


def _build_disk_sextic(resolution=None) -> Instance:
    h = _check_resolution(resolution)
    dom = _unit_disk_domain(h)
    return Instance(domain=dom, values=sextic(dom.points),
                    basis=enumerate_degree_basis(2, 2))


def _build_square(func, extra=()):
    def build(resolution=None) -> Instance:
        h = _check_resolution(resolution)
        dom = _square_domain(h, extra)
        return Instance(domain=dom, values=func(dom.points),
                        basis=enumerate_degree_basis(2, 1))
    return build


def _build_bump(variant):
    def build(resolution=None) -> Instance:
        h = _check_resolution(resolution)
        dom = _radius2_disk_domain(h)
        return construct.bump_instance(HEX_NEG, HEX_POS, dom,
                                       enumerate_degree_basis(2, 2), variant)
    return build


_Q0 = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
_Q1 = (-2.0, 0.0, 0.0, 3.0, 0.0, 3.0)


def _q_alpha(alpha: float) -> tuple:
    """3*alpha*(x^2 + y^2 - 1) + 1 in graded-lex coefficients."""
    return (1.0 - 3 * alpha, 0.0, 0.0, 3 * alpha, 0.0, 3 * alpha)


_EXPECTED = {
    "disk-sextic-deg2": Expected(
        t_star=2.0,
        optima=(_Q0, _Q1),
        essential_neg=(Z_POINTS[1], Z_POINTS[3], Z_POINTS[5]),
        essential_pos=(Z_POINTS[2], Z_POINTS[4], Z_POINTS[6]),
        dim_q=1, dim_s=1, direction=_CONIC,
        notes=(
            "on the unit circle the target equals 1 + 6xy^2 - 2x^3 = 1 - 2*cos(3*theta),"
            " so the deviation from q_alpha = 3*alpha*(x^2+y^2-1)+1 is -2*cos(3*theta):"
            " -2 at angles 0, 2pi/3, 4pi/3 and +2 at pi/3, pi, 5pi/3, independent of alpha",
            "deviation at the origin is 3*alpha - 1, inside (-2, 2) for alpha in [0, 1);"
            " at alpha = 1 it reaches +2, adding the origin to the positive set only there",
        ),
    ),
    "square-f-linear": Expected(
        t_star=0.5,
        optima=((0.0, 0.0, 0.0),),
        essential_neg=((0.0, 0.0),),
        essential_pos=((-1.0, 0.0), (1.0, 0.0)),
        dim_q=1, dim_s=1, direction=_YDIR,
        notes=(
            "the target has range [-1/2, 1/2] on the square: minimum -1/2 only at the"
            " origin, maximum +1/2 only at (+-1, 0); three alternating collinear points"
            " admit no strict linear separator, so the zero fit is optimal",
            "along alpha*y the deviation at grid point (+-1, y) is (1-y^2)/2 - alpha*y,"
            " which exceeds 1/2 once |alpha| > |y|/2: the feasible range shrinks like"
            " half the grid spacing",
        ),
    ),
    "square-h-linear": Expected(
        t_star=0.5,
        optima=((0.0, 0.0, 0.5), (0.0, 0.0, -0.5)),
        essential_neg=((0.0, 0.0),),
        essential_pos=((-1.0, 0.0), (1.0, 0.0)),
        dim_q=1, dim_s=1, direction=_YDIR,
        notes=(
            "with the kink 1-|y| the edge deviation (1-|y|)/2 - alpha*y stays at 1/2"
            " on a whole half-edge when alpha = -+1/2: every alpha*y with"
            " |alpha| <= 1/2 is optimal on any grid",
        ),
    ),
    "square-g-linear": Expected(
        t_star=0.5,
        optima=((0.0, 0.0, 0.0),),
        essential_neg=((0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)),
        essential_pos=((-0.5, 0.0), (0.5, 0.0)),
        dim_q=1, dim_s=1, direction=_YDIR,
        notes=(
            "the zigzag factor min(|2x|, 2-|2x|) - 1/2 makes the deviation hit -1/2 at"
            " x in {0, +-1} and +1/2 at x = +-1/2, all on the line y = 0: five"
            " alternating collinear points, still inseparable by a linear function",
        ),
    ),
    "bump-sharp-hex": Expected(
        t_star=1.0,
        optima=((0.0,) * 6,),
        essential_neg=(Z_POINTS[1], Z_POINTS[3], Z_POINTS[5]),
        essential_pos=(Z_POINTS[2], Z_POINTS[4], Z_POINTS[6]),
        dim_q=1, dim_s=1, direction=_CONIC,
        notes=(
            "adjacent hexagon vertices on the unit circle are 2*sin(pi/6) = 1 apart,"
            " so the bump radius is 1/2 and the cones never overlap; the function is"
            " -1 exactly on {z1, z3, z5} and +1 exactly on {z2, z4, z6}",
        ),
    ),
    "bump-smooth-hex": Expected(
        t_star=1.0,
        optima=((0.0,) * 6,),
        essential_neg=(Z_POINTS[1], Z_POINTS[3], Z_POINTS[5]),
        essential_pos=(Z_POINTS[2], Z_POINTS[4], Z_POINTS[6]),
        dim_q=1, dim_s=1, direction=_CONIC,
        notes=(
            "same prescribed sets with paraboloid caps: near (1, 0) the function is"
            " 4*((x-1)^2 + y^2) - 1, and along alpha*(x^2+y^2-1) a point slightly"
            " outside the unit circle dips below -1, so the feasible step range"
            " collapses as the grid refines",
        ),
    ),
}

_BUILDERS = {
    "disk-sextic-deg2": _build_disk_sextic,
    "square-f-linear": _build_square(square_f),
    "square-h-linear": _build_square(square_h),
    "square-g-linear": _build_square(square_g, extra=[(0.5, 0.0), (-0.5, 0.0)]),
    "bump-sharp-hex": _build_bump(construct.SHARP),
    "bump-smooth-hex": _build_bump(construct.SMOOTH),
}

INSTANCE_IDS = tuple(sorted(_BUILDERS))


def get_instance(instance_id: str, resolution=None):
    """Build a registered instance; returns (Instance, Expected)."""
    if instance_id not in _BUILDERS:
        raise GalleryError(
            f"unknown instance {instance_id!r}; known ids: {', '.join(INSTANCE_IDS)}"
        )
    inst = _BUILDERS[instance_id](resolution)
    return inst, _EXPECTED[instance_id]


# -- golden checks -------------------------------------------------------------


def _indices_of(inst: Instance, points) -> tuple:
    return tuple(sorted(find_index(inst.domain, p) for p in points))


def _angle_to(direction: Polynomial, target) -> float:
    v = direction.coeffs / np.linalg.norm(direction.coeffs)
    w = np.asarray(target, dtype=float)
    w = w / np.linalg.norm(w)
    s = min(np.linalg.norm(v - w), np.linalg.norm(v + w))
    return float(2.0 * math.asin(min(1.0, s / 2.0)))


def check_instance(instance_id: str, resolution=None) -> InstanceReport:
    """Solve, certify, and measure one registered instance against its expected values."""
    try:
        inst, exp = get_instance(instance_id, resolution)
    except GalleryError as err:
        return InstanceReport(id=instance_id, checks=(), error=str(err))

    checks = []
    sol = solve_minimax(inst)
    checks.append(CheckResult(
        "t_star", abs(sol.t_star - exp.t_star) <= 1e-8,
        f"solved {sol.t_star!r}, expected {exp.t_star!r}"))

    for k, coeffs in enumerate(exp.optima):
        q = Polynomial(inst.basis, np.asarray(coeffs))
        dev = max_deviation(inst, q.coeffs)
        cert = certify.is_optimal(inst, q)
        ok = cert.verdict == certify.OPTIMAL_CERTIFIED and abs(dev - exp.t_star) <= 1e-8
        checks.append(CheckResult(f"optimum_{k}_certified", ok,
                                  f"deviation {dev!r}, verdict {cert.verdict}"))

    fa = analyze_face(inst)
    want_neg = _indices_of(inst, exp.essential_neg)
    want_pos = _indices_of(inst, exp.essential_pos)
    got = (tuple(sorted(fa.essential_neg)), tuple(sorted(fa.essential_pos)))
    checks.append(CheckResult(
        "essential_sets", got == (want_neg, want_pos),
        f"got {got}, expected {(want_neg, want_pos)}"))

    try:
        report = certify.solution_vs_cone_dimension(inst)
        ok = report.dim_q == exp.dim_q and report.dim_s == exp.dim_s
        detail = f"dim Q = {report.dim_q}, dim S = {report.dim_s}"
        if ok and exp.direction is not None and report.dim_q == 1:
            ang = _angle_to(report.q_directions[0], exp.direction)
            ok = ang <= 1e-6
            detail += f", direction angle {ang:.2e}"
        checks.append(CheckResult("dimensions", ok, detail))
    except certify.TheoryViolationError as err:
        checks.append(CheckResult("dimensions", False, str(err)))

    checks.extend(_extra_checks(instance_id, inst, exp))
    return InstanceReport(id=instance_id, checks=tuple(checks))


def _extra_checks(instance_id: str, inst: Instance, exp: Expected):
    checks = []
    if instance_id == "disk-sextic-deg2":
        zs = np.array([Z_POINTS[i] for i in range(1, 7)])
        want = np.array([-2.0, 2.0, -2.0, 2.0, -2.0, 2.0])
        worst = 0.0
        for alpha in (0.0, 0.25, 0.5, 1.0):
            q = Polynomial(inst.basis, np.asarray(_q_alpha(alpha)))
            dev = sextic(zs) - q(zs)
            worst = max(worst, float(np.max(np.abs(dev - want))))
        checks.append(CheckResult("hexagon_deviations_alpha_independent",
                                  worst <= 1e-9, f"max error {worst:.2e}"))
        origin = np.array([Z_POINTS[0]])
        vals = [float(sextic(origin)[0] - Polynomial(inst.basis, np.asarray(_q_alpha(a)))(origin)[0])
                for a in (0.0, 0.25, 0.5, 1.0)]
        want_origin = [3 * a - 1 for a in (0.0, 0.25, 0.5, 1.0)]
        err = max(abs(a - b) for a, b in zip(vals, want_origin))
        checks.append(CheckResult("origin_deviation_linear_in_alpha",
                                  err <= 1e-9, f"max error {err:.2e}"))
        q1 = Polynomial(inst.basis, np.asarray(_Q1))
        rep = verify_containment(inst, q1)
        z0 = find_index(inst.domain, Z_POINTS[0])
        extra = tuple(sorted(rep.extra_neg + rep.extra_pos))
        checks.append(CheckResult(
            "containment_q1_extra_origin",
            rep.passed and extra == (z0,),
            f"passed={rep.passed}, extra={extra}, origin index {z0}"))
    elif instance_id == "square-h-linear":
        basis = inst.basis
        zero = basis.zero()
        ydir = Polynomial(basis, np.asarray(_YDIR))
        lo, hi = construct.max_step_along(inst, zero, ydir, t_star=0.5)
        ok = abs(lo - 0.5) <= 1e-5 and abs(hi - 0.5) <= 1e-5
        checks.append(CheckResult("step_range_half", ok, f"range [-{lo}, {hi}]"))
        # the half-edges x = +-1, y in [-1, 0] sit at deviation exactly 1/2 for y/2
        pts = inst.domain.points
        edge = pts[(np.abs(np.abs(pts[:, 0]) - 1.0) < 1e-12) & (pts[:, 1] <= 1e-12)]
        dev = square_h(edge) - Polynomial(basis, np.asarray((0.0, 0.0, 0.5)))(edge)
        err = float(np.max(np.abs(dev - 0.5)))
        checks.append(CheckResult("half_edge_deviations", err <= 1e-9,
                                  f"{edge.shape[0]} edge points, max error {err:.2e}"))
    elif instance_id == "square-f-linear":
        zero = inst.basis.zero()
        ydir = Polynomial(inst.basis, np.asarray(_YDIR))
        lo, hi = construct.max_step_along(inst, zero, ydir, t_star=0.5)
        ok = 0.0 < hi <= 0.1 + 1e-5 and 0.0 < lo <= 0.1 + 1e-5
        checks.append(CheckResult("step_range_small", ok, f"range [-{lo}, {hi}]"))
    elif instance_id in ("bump-sharp-hex", "bump-smooth-hex"):
        peak = float(np.max(np.abs(inst.values)))
        at_neg = [float(inst.values[find_index(inst.domain, p)]) for p in HEX_NEG]
        at_pos = [float(inst.values[find_index(inst.domain, p)]) for p in HEX_POS]
        ok = (abs(peak - 1.0) <= 1e-12
              and max(abs(v + 1.0) for v in at_neg) <= 1e-12
              and max(abs(v - 1.0) for v in at_pos) <= 1e-12)
        checks.append(CheckResult("bump_values", ok,
                                  f"peak {peak!r}, -1 side {at_neg}, +1 side {at_pos}"))
    return checks


def run_all(resolution=None, ids=None) -> GalleryReport:
    """Run every registered instance through solve / certify / dimensions and
    compare with the expected values; failures are collected, not raised."""
    reports = []
    for instance_id in (ids if ids is not None else INSTANCE_IDS):
        try:
            reports.append(check_instance(instance_id, resolution))
        except Exception as err:  # defensive: a crash should not hide other ids
            reports.append(InstanceReport(id=instance_id, checks=(),
                                          error=f"{type(err).__name__}: {err}"))
    return GalleryReport(instances=tuple(reports))


def refinement_study(instance_id: str, spacings=(0.2, 0.1, 0.05)):
    """Feasible step range along the instance's degenerate direction at several
    grid spacings.  Returns rows {spacing, step_down, step_up}.

    The reference solution is the known optimum with zero step (the zero
    polynomial, or the zero multiple of y); it is re-certified on every grid.
    """
    if instance_id not in _BUILDERS:
        raise GalleryError(
            f"unknown instance {instance_id!r}; known ids: {', '.join(INSTANCE_IDS)}"
        )
    exp = _EXPECTED[instance_id]
    if exp.direction is None:
        raise GalleryError(f"{instance_id} has no registered degenerate direction")
    rows = []
    for h in spacings:
        inst, _ = get_instance(instance_id, h)
        zero = inst.basis.zero()
        if instance_id == "disk-sextic-deg2":
            ref = Polynomial(inst.basis, np.asarray(_Q0))
        else:
            ref = zero
        cert = certify.is_optimal(inst, ref)
        if cert.verdict != certify.OPTIMAL_CERTIFIED:
            raise GalleryError(f"reference solution not optimal on grid {h}")
        t0 = max_deviation(inst, ref.coeffs)
        direction = Polynomial(inst.basis, np.asarray(exp.direction))
        lo, hi = construct.max_step_along(inst, ref, direction, t_star=t0)
        rows.append({"spacing": float(h), "step_down": lo, "step_up": hi})
    return rows


def report_to_json(report: GalleryReport) -> str:
    payload = {
        "all_passed": report.all_passed,
        "instances": [
            {
                "id": r.id,
                "passed": r.passed,
                "error": r.error,
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in r.checks
                ],
            }
            for r in report.instances
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2)
