"""
Building a function whose best fit misbehaves exactly where you say
===================================================================

Given disjoint finite sets N and P that no basis polynomial strictly
separates, the sharp bump construction produces a Lipschitz function that is
-1 exactly on N, +1 exactly on P and strictly smaller in magnitude everywhere
else.  Its best fit by the basis is the zero polynomial with deviation 1, the
deviation sets are exactly the prescribed N and P, and the solution set is as
large as the separating cone allows.

Here N and P alternate around the unit hexagon (inseparable by any conic:
a degree-2 curve cannot cross the circle six times), sampled on a disk of
radius 2.
"""

import numpy as np

from chebapprox import certify
from chebapprox.construct import SHARP, SMOOTH, bump_instance, make_bump
from chebapprox.domain import disk_grid
from chebapprox.gallery import HEX_NEG, HEX_POS
from chebapprox.minimax import relint_solution, solve_minimax
from chebapprox.poly import enumerate_degree_basis

basis = enumerate_degree_basis(2, 2)
domain = disk_grid((0.0, 0.0), 2.0, 8, 24)

f = make_bump(HEX_NEG, HEX_POS, SHARP)
print("bump values at the prescribed points:",
      np.round(np.concatenate([f(HEX_NEG), f(HEX_POS)]), 12))
print("bump value far away:", f((1.5, 1.5)))

inst = bump_instance(HEX_NEG, HEX_POS, domain, basis, SHARP)
sol = solve_minimax(inst)
print(f"t* = {sol.t_star:.12f} (the bump height)")

cert = certify.is_optimal(inst, basis.zero())
print(f"zero polynomial certificate: {cert.verdict}")

relint = relint_solution(inst)
print("essential negative points:",
      [tuple(np.round(inst.domain.points[i], 6).tolist()) for i in relint.neg_set])
print("essential positive points:",
      [tuple(np.round(inst.domain.points[i], 6).tolist()) for i in relint.pos_set])

dims = certify.solution_vs_cone_dimension(inst)
print(f"dim Q = {dims.dim_q} = dim span(cone) = {dims.dim_s}")
print("degenerate direction:", np.round(dims.q_directions[0].coeffs, 9),
      " (the conic through the hexagon)")

# the smooth variant has the same sets and the same certificate, but the
# smoothness at the peaks will shrink the solution set under refinement
smooth = bump_instance(HEX_NEG, HEX_POS, domain, basis, SMOOTH)
print("\nsmooth variant t* =", f"{solve_minimax(smooth).t_star:.12f}",
      "- same optimum, different refinement behavior")
