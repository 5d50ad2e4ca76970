"""Bump functions with prescribed extreme-deviation sets.

Given disjoint finite sets N and P with minimum cross distance d, the sharp
construction places a cone of height 1 and support radius d/2 at every point:

    f(x) = max(1 - (2/d) * dist(x, P), 0) - max(1 - (2/d) * dist(x, N), 0)

so f is +1 exactly on P, -1 exactly on N, strictly between elsewhere, and
(2/d)-Lipschitz.  Whenever N and P cannot be strictly separated in the chosen
basis, the zero polynomial is a best approximation of f on any domain
containing N and P, with deviation sets exactly (N, P), and the solution set
reaches the largest dimension the separating cone allows.

The smooth variant replaces the cones with paraboloid caps
``max(1 - (2/d)^2 * dist^2, 0)`` (same support, same values on N and P); its
best approximation on a refining grid collapses toward uniqueness, which
:func:`max_step_along` can measure as a shrinking feasible step range.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .domain import Domain, with_points
from .minimax import Instance
from .poly import Basis, Polynomial, design_matrix
from .certify import strict_separator

__all__ = [
    "SHARP",
    "SMOOTH",
    "BumpSpec",
    "BumpError",
    "min_cross_distance",
    "make_bump",
    "bump_instance",
    "max_step_along",
    "bump_spec_to_json",
    "bump_spec_from_json",
]

SHARP = "sharp"
SMOOTH = "smooth"


class BumpError(ValueError):
    pass


def min_cross_distance(neg_points, pos_points) -> float:
    a = np.atleast_2d(np.asarray(neg_points, dtype=float))
    b = np.atleast_2d(np.asarray(pos_points, dtype=float))
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(np.min(d))


@dataclass(frozen=True)
class BumpSpec:
    neg: np.ndarray
    pos: np.ndarray
    variant: str = SHARP
    d: float | None = None

    def __post_init__(self):
        neg = np.atleast_2d(np.asarray(self.neg, dtype=float))
        pos = np.atleast_2d(np.asarray(self.pos, dtype=float))
        if neg.size == 0 or pos.size == 0:
            raise BumpError("both point sets must be nonempty")
        if neg.shape[1] != pos.shape[1]:
            raise BumpError("point sets live in different dimensions")
        if self.variant not in (SHARP, SMOOTH):
            raise BumpError(f"unknown variant {self.variant!r}")
        sep = min_cross_distance(neg, pos)
        if sep <= 0.0:
            raise BumpError("point sets overlap")
        if self.d is not None and abs(self.d - sep) > 1e-12 * (1.0 + sep):
            raise BumpError(f"stored distance {self.d} != recomputed {sep}")
        neg.setflags(write=False)
        pos.setflags(write=False)
        object.__setattr__(self, "neg", neg)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "d", sep)


def make_bump(neg_points, pos_points, variant: str = SHARP):
    """Evaluator for the bump function: +1 on the positive set, -1 on the
    negative set, in [-1, 1] everywhere, zero at distance >= d/2 from both."""
    spec = BumpSpec(neg=neg_points, pos=pos_points, variant=variant)
    two_over_d = 2.0 / spec.d

    def _hump(dist):
        if spec.variant == SHARP:
            return np.maximum(1.0 - two_over_d * dist, 0.0)
        return np.maximum(1.0 - (two_over_d * dist) ** 2, 0.0)

    def evaluate(x):
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        dp = np.min(np.linalg.norm(pts[:, None, :] - spec.pos[None, :, :], axis=2), axis=1)
        dn = np.min(np.linalg.norm(pts[:, None, :] - spec.neg[None, :, :], axis=2), axis=1)
        vals = _hump(dp) - _hump(dn)
        return float(vals[0]) if np.asarray(x).ndim == 1 else vals

    return evaluate


def bump_instance(neg_points, pos_points, domain: Domain, basis: Basis,
                  variant: str = SHARP) -> Instance:
    """Sample the bump on ``domain`` (augmented so N and P lie in it exactly).

    If N and P are strictly separable in the basis, the zero polynomial is
    not optimal and the construction loses its point; a warning is emitted.
    """
    neg = np.atleast_2d(np.asarray(neg_points, dtype=float))
    pos = np.atleast_2d(np.asarray(pos_points, dtype=float))
    f = make_bump(neg, pos, variant)
    dom = with_points(domain, np.vstack([neg, pos]))
    if strict_separator(neg, pos, basis) is not None:
        warnings.warn(
            "zero polynomial will not be optimal: the prescribed sets are "
            "strictly separable in this basis",
            stacklevel=2,
        )
    return Instance(domain=dom, values=f(dom.points), basis=basis)


def max_step_along(inst: Instance, q_ref, direction: Polynomial,
                   t_star: float | None = None, resolution: float = 1e-6,
                   cap: float = 1e9):
    """Largest steps (backward, forward) along ``direction`` keeping
    ``q_ref + step * direction`` optimal, by bisection at ``resolution``.

    ``q_ref`` must be an optimal solution (its deviation is taken as the
    optimal value unless ``t_star`` is supplied).  Returns a pair of
    nonnegative floats; ``inf`` marks an unbounded direction.
    """
    g = design_matrix(inst.basis, inst.domain.points)
    ref = np.asarray(q_ref.coeffs if isinstance(q_ref, Polynomial) else q_ref, dtype=float)
    base = inst.values - g @ ref
    dirv = g @ direction.coeffs
    t0 = float(np.max(np.abs(base))) if t_star is None else float(t_star)
    tol = 1e-9 * (1.0 + t0)

    def feasible(alpha: float) -> bool:
        return float(np.max(np.abs(base - alpha * dirv))) <= t0 + tol

    def scan(sign: float) -> float:
        if not feasible(sign * resolution):
            return 0.0
        hi = resolution
        while feasible(sign * hi):
            hi *= 2.0
            if hi >= cap:
                return float("inf")
        lo = hi / 2.0
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if feasible(sign * mid):
                lo = mid
            else:
                hi = mid
        return lo

    return scan(-1.0), scan(1.0)


def bump_spec_to_json(spec: BumpSpec) -> str:
    payload = {
        "N": [list(map(float, p)) for p in spec.neg],
        "P": [list(map(float, p)) for p in spec.pos],
        "variant": spec.variant,
    }
    return json.dumps(payload, sort_keys=True)


def bump_spec_from_json(text: str) -> BumpSpec:
    payload = json.loads(text)
    return BumpSpec(neg=payload["N"], pos=payload["P"],
                    variant=payload.get("variant", SHARP))
