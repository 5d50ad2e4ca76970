"""Independent oracles shared by the test modules.

Everything here deliberately avoids the library's own LP solver: the minimax
value is cross-checked by exhaustive coefficient-grid search (nested
refinement down to step 1e-3, justified by convexity of the max-deviation),
and optimal-face probes use scipy's HiGHS linear programming, a completely
separate implementation.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from chebapprox.domain import make_domain
from chebapprox.minimax import Instance
from chebapprox.poly import design_matrix, enumerate_degree_basis


def grid_min_maxdev(g: np.ndarray, f: np.ndarray, center, radius: float, step: float):
    """Exhaustive search of max|f - G c| over the coefficient lattice
    center +- radius with the given step; returns (best value, best point)."""
    center = np.asarray(center, dtype=float)
    k = center.size
    axes = [np.arange(c - radius, c + radius + 0.5 * step, step) for c in center]
    mesh = np.meshgrid(*axes, indexing="ij")
    cgrid = np.stack(mesh, axis=-1).reshape(-1, k)
    best_val = np.inf
    best_pt = center
    chunk = max(1, 2_000_000 // max(1, f.size))
    for lo in range(0, cgrid.shape[0], chunk):
        block = cgrid[lo:lo + chunk]
        dev = np.max(np.abs(f[None, :] - block @ g.T), axis=1)
        j = int(np.argmin(dev))
        if dev[j] < best_val:
            best_val = float(dev[j])
            best_pt = block[j]
    return best_val, best_pt


def bruteforce_minimax(inst: Instance, lp_solution, final_step: float = 1e-3):
    """Brute-force minimax value: a coarse sweep of a box bounding the LP
    solution, then nested refinement around the running argmin down to
    ``final_step``.  Max-deviation is convex in the coefficients, so the
    refinement cannot get trapped away from the optimum."""
    g = design_matrix(inst.basis, inst.domain.points)
    f = inst.values
    center = np.asarray(lp_solution, dtype=float)
    radius = 1.0 + float(np.max(np.abs(center)))
    best_val, best_pt = grid_min_maxdev(g, f, np.zeros(center.size), radius, radius / 4)
    step = radius / 4
    while step > final_step:
        step = max(step / 4, final_step)
        val, pt = grid_min_maxdev(g, f, best_pt, 4 * step, step)
        if val < best_val:
            best_val, best_pt = val, pt
    # final pass at the stated resolution around the LP answer as well
    val, pt = grid_min_maxdev(g, f, center, 5 * final_step, final_step)
    if val < best_val:
        best_val, best_pt = val, pt
    return best_val, best_pt


def face_probe_points(inst: Instance, t_star: float, count: int, seed: int,
                      slack: float = 1e-7):
    """Random optimal-face vertices from scipy's HiGHS solver (independent of
    the library's simplex): minimize random objectives over
    {c : |f - G c| <= t* + slack}."""
    g = design_matrix(inst.basis, inst.domain.points)
    f = inst.values
    a_ub = np.vstack([g, -g])
    b_ub = np.concatenate([f + t_star + slack, t_star + slack - f])
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        c = rng.normal(size=inst.basis.size)
        # a large coefficient box keeps the probe finite when the face is
        # unbounded (lineality directions)
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(-1e6, 1e6)] * inst.basis.size,
                      method="highs")
        assert res.status == 0, f"face probe LP failed: {res.message}"
        pts.append(res.x)
    return np.asarray(pts)


def affine_rank(points: np.ndarray, tol: float = 1e-5) -> int:
    """Rank of the affine hull of a point cloud (SVD with relative cutoff)."""
    diffs = points[1:] - points[0]
    if diffs.size == 0:
        return 0
    s = np.linalg.svd(diffs, compute_uv=False)
    if s.size == 0 or s[0] <= tol:
        return 0
    return int(np.sum(s > tol * (1.0 + s[0])))


def collinear_instance(rng: np.random.Generator, max_points: int = 12,
                       degree: int | None = None) -> Instance:
    """Degenerate-by-construction instance: all points on the x-axis of R^2,
    so every basis polynomial divisible by y vanishes on the whole domain and
    the solution set has positive dimension whenever the fit is not exact."""
    d = int(rng.integers(1, 3)) if degree is None else degree
    basis = enumerate_degree_basis(2, d)
    k = int(rng.integers(basis.size, max_points + 1))
    xs = rng.choice(np.arange(-16, 17) / 8.0, size=k, replace=False)
    pts = np.column_stack([xs, np.zeros(k)])
    values = rng.integers(-16, 17, size=k) / 8.0
    return Instance(domain=make_domain(pts), values=values.astype(float), basis=basis)


def random_instance(rng: np.random.Generator, max_n: int = 2, max_d: int = 2,
                    max_points: int = 12, max_dim: int | None = None) -> Instance:
    """Random small instance on a coarse dyadic lattice (eighths in 1D,
    quarters per axis in 2D), so float and exact-rational arithmetic see
    literally the same numbers."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        d = int(rng.integers(0, max_d + 1))
        basis = enumerate_degree_basis(n, d)
        if max_dim is None or basis.size <= max_dim:
            break
    if n == 1:
        lattice = (np.arange(-16, 17) / 8.0)[:, None]
    else:
        axis = np.arange(-4, 5) / 4.0
        mesh = np.meshgrid(*([axis] * n), indexing="ij")
        lattice = np.stack(mesh, axis=-1).reshape(-1, n)
    hi = min(max_points, lattice.shape[0])
    lo = max(3, basis.size)
    k = int(rng.integers(lo, hi + 1)) if hi > lo else lo
    idx = rng.choice(lattice.shape[0], size=k, replace=False)
    values = rng.integers(-16, 17, size=k) / 8.0
    return Instance(domain=make_domain(lattice[idx]), values=values.astype(float),
                    basis=basis)
