"""
Several best quadratic fits for one function on the unit disk
=============================================================

The degree-2 minimax fit of

    f(x, y) = x^6 + y^6 + 3 x^4 y^2 + 3 x^2 y^4 + 6 x y^2 - 2 x^3

on the unit disk is not unique: on the unit circle f equals 1 - 2 cos(3t),
so it oscillates between -1 and 3 at six equally spaced points, and both the
constant 1 and 3x^2 + 3y^2 - 2 (which agree on the circle) sit at uniform
distance 2 from f.  This script solves the discretized problem, certifies
both candidates, and shows that the whole solution set is the segment
between them.
"""

import numpy as np

from chebapprox import certify
from chebapprox.gallery import Z_POINTS, get_instance, sextic
from chebapprox.minimax import relint_solution, solve_minimax, verify_containment
from chebapprox.poly import Polynomial

inst, expected = get_instance("disk-sextic-deg2")
print(f"domain: {inst.size} disk points, basis size {inst.basis.size} (degree 2)")

sol = solve_minimax(inst)
print(f"optimal uniform deviation t* = {sol.t_star:.12f}")

# two very different-looking candidates...
q0 = Polynomial(inst.basis, np.array([1.0, 0, 0, 0, 0, 0]))        # constant 1
q1 = Polynomial(inst.basis, np.array([-2.0, 0, 0, 3.0, 0, 3.0]))   # 3x^2+3y^2-2
for name, q in [("q0 = 1", q0), ("q1 = 3x^2+3y^2-2", q1)]:
    cert = certify.is_optimal(inst, q)
    print(f"certificate for {name}: {cert.verdict}")

# ... and the whole family between them stays optimal, with the deviation at
# the hexagon points frozen at -+2 no matter which member you pick
zs = np.array([Z_POINTS[k] for k in range(1, 7)])
for alpha in (0.0, 0.25, 0.5, 1.0):
    q = Polynomial(inst.basis, (1 - alpha) * q0.coeffs + alpha * q1.coeffs)
    dev = sextic(zs) - q(zs)
    print(f"alpha = {alpha:4}: deviations at hexagon = {np.round(dev, 10)}")

# the deviation sets of a relative-interior solution are the essential sets:
# they are contained in the deviation sets of *every* optimal solution
relint = relint_solution(inst)
labels = [inst.domain.label_of(i) for i in relint.neg_set + relint.pos_set]
print(f"essential deviation points: {labels}")

# q1 is on the boundary of the solution set: it picks up one extra deviation
# point (the origin, where its deviation reaches +2)
report = verify_containment(inst, q1)
extra = [inst.domain.label_of(i) for i in report.extra_neg + report.extra_pos]
print(f"containment check for q1: passed={report.passed}, extra points={extra}")

# the solution set is one-dimensional, and so is the span of the separating
# cone; its direction is the conic x^2 + y^2 - 1 vanishing on the hexagon
dims = certify.solution_vs_cone_dimension(inst)
print(f"dim(solution set) = {dims.dim_q}, dim(separating span) = {dims.dim_s}")
print(f"direction coefficients (1, x, y, x^2, xy, y^2): "
      f"{np.round(dims.q_directions[0].coeffs, 9)}")
