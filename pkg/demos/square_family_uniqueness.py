"""
Uniqueness is about the function, not just where the extremes sit
=================================================================

Three targets on the square [-1,1]^2, all with best linear fit zero, all with
extreme deviations on the line y = 0, where a strict linear separator cannot
exist:

    f(x, y) = (x^2 - 1/2) (1 - y^2)            smooth in y
    h(x, y) = (x^2 - 1/2) (1 - |y|)            kinked in y
    g(x, y) = (min(|2x|, 2-|2x|) - 1/2)(1-y^2) kinked in x, smooth in y

In the continuum f and g have a unique best fit while h has the whole segment
{alpha*y : |alpha| <= 1/2}.  On a finite grid all three have one-dimensional
solution sets (that is forced on finite domains), but the *size* of the
feasible segment tells them apart: for f and g it is only as wide as the grid
is fine, for h it is the full [-1/2, 1/2] at any resolution.
"""

import numpy as np

from chebapprox import certify
from chebapprox.construct import max_step_along
from chebapprox.gallery import get_instance
from chebapprox.minimax import max_deviation, relint_solution, solve_minimax
from chebapprox.poly import Polynomial

for iid in ("square-f-linear", "square-h-linear", "square-g-linear"):
    inst, expected = get_instance(iid)
    sol = solve_minimax(inst)
    relint = relint_solution(inst)
    dims = certify.solution_vs_cone_dimension(inst)

    neg_pts = [tuple(np.round(inst.domain.points[i], 6).tolist()) for i in relint.neg_set]
    pos_pts = [tuple(np.round(inst.domain.points[i], 6).tolist()) for i in relint.pos_set]

    ydir = Polynomial(inst.basis, np.array([0.0, 0.0, 1.0]))
    zero = inst.basis.zero()
    t0 = max_deviation(inst, zero.coeffs)
    down, up = max_step_along(inst, zero, ydir, t_star=t0)

    print(f"== {iid}")
    print(f"   t* = {sol.t_star:.9f}")
    print(f"   essential negatives {neg_pts}")
    print(f"   essential positives {pos_pts}")
    print(f"   dim Q = {dims.dim_q}, dim span(cone) = {dims.dim_s}")
    print(f"   optimal multiples of y on this grid: [-{down:.6f}, {up:.6f}]")
    print()

print("h keeps the full segment; f and g would collapse to a point as the")
print("grid refines (see grid_refinement_study.py).")
