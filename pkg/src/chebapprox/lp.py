"""Self-contained dense linear-program solver.

Two-phase primal simplex on a dense tableau with Bland's anti-cycling rule.
Two arithmetic backends share the same standardization and pivoting logic:

* :func:`solve_lp` works in float64 (numpy tableau, 1e-9 pivot tolerance);
* :func:`solve_lp_exact` works in ``fractions.Fraction`` with exact
  comparisons and no tolerances at all.

Instances here are small and dense (a few hundred variables, a few thousand
rows), so determinism and exactness matter more than speed.  Bland's rule
(entering: lowest eligible column index; leaving: lowest basic-variable index
among minimum-ratio ties) guarantees termination on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._linalg import exact_solve

__all__ = [
    "LinearProgram",
    "LpResult",
    "solve_lp",
    "solve_lp_exact",
    "dual_objective",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "NUMERIC_FAILURE",
    "LESS_EQUAL",
    "EQUAL",
    "GREATER_EQUAL",
]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERIC_FAILURE = "numeric_failure"

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="

_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)

_PIVOT_TOL = 1e-9
_MAX_PIVOTS = 10**6


class LpError(ValueError):
    """Malformed linear program (dimension mismatch, unknown relation)."""


class NumericFailure(RuntimeError):
    """A solve stalled past the pivot cap; distinct from the three LP statuses."""


def raise_for_status(result: "LpResult", context: str, error_cls=LpError):
    """Turn an unexpected LP status into the right exception type."""
    if result.status == NUMERIC_FAILURE:
        raise NumericFailure(f"{context}: simplex stalled past the pivot cap")
    raise error_cls(f"{context} unexpectedly {result.status}")


@dataclass(frozen=True)
class LinearProgram:
    """minimize objective . x  subject to rows (a, rel, b) and per-variable bounds.

    ``bounds`` is a sequence of (lower, upper) pairs, ``None`` meaning
    unbounded on that side; ``bounds=None`` makes every variable free.
    """

    objective: tuple
    rows: tuple
    bounds: tuple | None = None

    def __post_init__(self):
        obj = tuple(self.objective)
        rows = tuple((tuple(a), rel, b) for a, rel, b in self.rows)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        n = len(obj)
        for a, rel, _ in rows:
            if len(a) != n:
                raise LpError(f"row has {len(a)} coefficients, expected {n}")
            if rel not in _RELATIONS:
                raise LpError(f"unknown relation {rel!r}")
        if self.bounds is not None:
            bnds = tuple(tuple(b) for b in self.bounds)
            if len(bnds) != n:
                raise LpError(f"{len(bnds)} bounds for {n} variables")
            object.__setattr__(self, "bounds", bnds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpResult:
    status: str
    x: tuple | None = None
    dual: tuple | None = None
    objective_value: object = None
    pivots: int = 0


# --------------------------------------------------------------------------
# shared standardization:   min c.x,  A x (<=|=|>=) b,  bounds  -->
#   min c'.x',  A' x' = b' (b' >= 0),  x' >= 0
# --------------------------------------------------------------------------


def _standardize(lp: LinearProgram, one):
    """Equality standard form over the field of ``one`` (1.0 or Fraction(1)).

    Returns plain Python lists so both backends can consume the result, or
    None when a variable's bounds are contradictory.
    """
    zero = one * 0
    n = lp.num_vars
    cast = (lambda v: float(v)) if isinstance(one, float) else (lambda v: Fraction(v))

    bounds = lp.bounds if lp.bounds is not None else tuple((None, None) for _ in range(n))

    # Each original variable maps to one or two nonnegative standard columns:
    # x_j = offset_j + sum(sign_k * u_k).
    cols_of_var: list[list[tuple[int, object]]] = []
    offsets: list[object] = []
    extra_rows: list[tuple[int, object]] = []  # (column, rhs): u_col <= rhs
    num_std = 0
    for lo, hi in bounds:
        lo_c = None if lo is None else cast(lo)
        hi_c = None if hi is None else cast(hi)
        if lo_c is not None and hi_c is not None and hi_c < lo_c:
            return None
        if lo_c is None and hi_c is None:
            cols_of_var.append([(num_std, one), (num_std + 1, -one)])
            offsets.append(zero)
            num_std += 2
        elif lo_c is not None:
            cols_of_var.append([(num_std, one)])
            offsets.append(lo_c)
            if hi_c is not None:
                extra_rows.append((num_std, hi_c - lo_c))
            num_std += 1
        else:  # upper bound only: x = hi - u
            cols_of_var.append([(num_std, -one)])
            offsets.append(hi_c)
            num_std += 1

    a_rows: list[list[object]] = []
    b_vals: list[object] = []
    rels: list[str] = []
    for a, rel, b in lp.rows:
        row = [zero] * num_std
        rhs = cast(b)
        for j, aj in enumerate(a):
            aj_c = cast(aj)
            if aj_c == zero:
                continue
            rhs -= aj_c * offsets[j]
            for col, sign in cols_of_var[j]:
                row[col] += aj_c * sign
        a_rows.append(row)
        b_vals.append(rhs)
        rels.append(rel)
    for col, rhs in extra_rows:
        row = [zero] * num_std
        row[col] = one
        a_rows.append(row)
        b_vals.append(rhs)
        rels.append(LESS_EQUAL)

    c_std = [zero] * num_std
    for j, cj in enumerate(lp.objective):
        cj_c = cast(cj)
        for col, sign in cols_of_var[j]:
            c_std[col] += cj_c * sign

    # slack columns, then row flips to make every rhs nonnegative
    m = len(a_rows)
    slack_col = {}
    k = num_std
    for i, rel in enumerate(rels):
        if rel != EQUAL:
            slack_col[i] = k
            k += 1
    total = k
    full = [row + [zero] * (total - num_std) for row in a_rows]
    for i, rel in enumerate(rels):
        if rel == LESS_EQUAL:
            full[i][slack_col[i]] = one
        elif rel == GREATER_EQUAL:
            full[i][slack_col[i]] = -one
    flips = [one] * m
    for i in range(m):
        if b_vals[i] < zero:
            flips[i] = -one
            b_vals[i] = -b_vals[i]
            full[i] = [-v for v in full[i]]

    # initial basis: the slack column where it survived the flip with +1,
    # otherwise a fresh artificial column
    basis = [-1] * m
    art_rows = []
    for i in range(m):
        sc = slack_col.get(i)
        if sc is not None and full[i][sc] == one:
            basis[i] = sc
        else:
            art_rows.append(i)
    for idx, i in enumerate(art_rows):
        col = total + idx
        for r in range(m):
            full[r].append(one if r == i else zero)
        basis[i] = col

    return {
        "full": full,
        "b": b_vals,
        "c_std": c_std + [zero] * (total - num_std + len(art_rows)),
        "basis": basis,
        "num_struct": total,  # structural + slack columns (artificials follow)
        "num_art": len(art_rows),
        "cols_of_var": cols_of_var,
        "offsets": offsets,
        "num_rows_user": len(lp.rows),
        "flips": flips,
    }


def _recover_x(std, x_std):
    out = []
    for combo, off in zip(std["cols_of_var"], std["offsets"]):
        v = off
        for col, sign in combo:
            v = v + sign * x_std[col]
        out.append(v)
    return out


# --------------------------------------------------------------------------
# float backend
# --------------------------------------------------------------------------


def solve_lp(lp: LinearProgram, max_pivots: int = _MAX_PIVOTS,
             want_dual: bool = True) -> LpResult:
    """Solve in float64.  Deterministic: Bland's rule, lowest-index tie breaks."""
    std = _standardize(lp, 1.0)
    if std is None:
        return LpResult(status=INFEASIBLE)

    ncols = std["num_struct"] + std["num_art"]
    T = np.array([row + [b] for row, b in zip(std["full"], std["b"])], dtype=float)
    T = T.reshape(len(std["b"]), ncols + 1)
    A0 = T[:, :ncols].copy()
    basis = list(std["basis"])
    row_ids = list(range(len(std["b"])))
    c_full = np.array(std["c_std"], dtype=float)
    allowed = np.zeros(ncols, dtype=bool)
    allowed[: std["num_struct"]] = True  # artificials never re-enter

    state = {"pivots": 0}
    b_scale = 1.0 + (float(np.max(np.abs(T[:, -1]))) if T.shape[0] else 0.0)

    def reduced(costs):
        cb = costs[basis]
        r = costs - cb @ T[:, :ncols]
        return r, float(cb @ T[:, -1])

    def pivot(row, col):
        T[row] /= T[row, col]
        colvals = T[:, col].copy()
        colvals[row] = 0.0
        T[:] -= np.outer(colvals, T[row])
        basis[row] = col
        state["pivots"] += 1

    def run_phase(costs):
        # reduced costs kept incrementally, refreshed now and then against drift
        r, _ = reduced(costs)
        since_refresh = 0
        while True:
            if state["pivots"] > max_pivots:
                return NUMERIC_FAILURE
            cand = np.where(allowed & (r < -_PIVOT_TOL))[0]
            if cand.size == 0:
                return OPTIMAL
            enter = int(cand[0])
            col = T[:, enter]
            rows = np.where(col > _PIVOT_TOL)[0]
            if rows.size == 0:
                return UNBOUNDED
            ratios = T[rows, -1] / col[rows]
            best = float(np.min(ratios))
            ties = rows[ratios <= best + _PIVOT_TOL * (1.0 + abs(best))]
            leave = int(min(ties, key=lambda i: basis[i]))
            pivot(leave, enter)
            r -= r[enter] * T[leave, :ncols]
            r[enter] = 0.0
            since_refresh += 1
            if since_refresh >= 64:
                r, _ = reduced(costs)
                since_refresh = 0

    if std["num_art"]:
        c1 = np.zeros(ncols)
        c1[std["num_struct"]:] = 1.0
        status = run_phase(c1)
        if status == NUMERIC_FAILURE:
            return LpResult(status=NUMERIC_FAILURE, pivots=state["pivots"])
        _, val1 = reduced(c1)
        if val1 > 1e-8 * b_scale:
            return LpResult(status=INFEASIBLE, pivots=state["pivots"])
        keep = np.ones(T.shape[0], dtype=bool)
        for i in range(T.shape[0]):
            if basis[i] >= std["num_struct"]:
                cand = np.where(allowed & (np.abs(T[i, :ncols]) > _PIVOT_TOL))[0]
                if cand.size:
                    pivot(i, int(cand[0]))
                else:
                    keep[i] = False  # redundant row
        if not np.all(keep):
            T = T[keep]
            A0 = A0[keep]
            basis = [b for b, k in zip(basis, keep) if k]
            row_ids = [ri for ri, k in zip(row_ids, keep) if k]

    status = run_phase(c_full)
    if status in (NUMERIC_FAILURE, UNBOUNDED):
        return LpResult(status=status, pivots=state["pivots"])

    x_std = np.zeros(ncols)
    for i, bi in enumerate(basis):
        x_std[bi] = T[i, -1]
    x = _recover_x(std, list(x_std))
    obj = float(np.dot(np.asarray(lp.objective, dtype=float), x))

    dual = None
    if basis and want_dual:
        try:
            y = np.linalg.solve(A0[:, basis].T, c_full[basis])
            full_dual = np.zeros(len(std["b"]))
            for k, ri in enumerate(row_ids):
                full_dual[ri] = std["flips"][ri] * y[k]
            dual = tuple(float(v) for v in full_dual[: std["num_rows_user"]])
        except np.linalg.LinAlgError:
            dual = None
    elif std["num_rows_user"] == 0:
        dual = ()

    return LpResult(status=OPTIMAL, x=tuple(float(v) for v in x), dual=dual,
                    objective_value=obj, pivots=state["pivots"])


# --------------------------------------------------------------------------
# exact backend
# --------------------------------------------------------------------------


def solve_lp_exact(lp: LinearProgram, max_pivots: int = _MAX_PIVOTS,
                   want_dual: bool = True) -> LpResult:
    """Solve with Fraction arithmetic: exact statuses, exact optimal values.

    Inputs are converted with ``Fraction(value)``, which is exact for floats.
    Bland's rule makes cycling impossible, so the pivot cap is defensive only.
    """
    one = Fraction(1)
    zero = Fraction(0)
    std = _standardize(lp, one)
    if std is None:
        return LpResult(status=INFEASIBLE)

    num_struct = std["num_struct"]
    ncols = num_struct + std["num_art"]
    rows = [list(r) + [b] for r, b in zip(std["full"], std["b"])]
    A0 = [list(r[:ncols]) for r in rows]
    basis = list(std["basis"])
    row_ids = list(range(len(rows)))
    c_full = list(std["c_std"])
    state = {"pivots": 0}

    def reduced(costs):
        r = list(costs)
        val = zero
        for i, row in enumerate(rows):
            li = costs[basis[i]]
            if li != 0:
                for j in range(ncols):
                    if row[j] != 0:
                        r[j] -= li * row[j]
                val += li * row[-1]
        return r, val

    def pivot(ri, cj):
        prow = rows[ri]
        inv = one / prow[cj]
        rows[ri] = [v * inv for v in prow]
        prow = rows[ri]
        for i, row in enumerate(rows):
            if i != ri and row[cj] != 0:
                f = row[cj]
                rows[i] = [a - f * b for a, b in zip(row, prow)]
        basis[ri] = cj
        state["pivots"] += 1

    def run_phase(costs):
        r, _ = reduced(costs)
        while True:
            if state["pivots"] > max_pivots:
                return NUMERIC_FAILURE
            enter = next((j for j in range(num_struct) if r[j] < 0), -1)
            if enter < 0:
                return OPTIMAL
            leave = -1
            best = None
            for i, row in enumerate(rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED
            pivot(leave, enter)
            factor = r[enter]
            if factor != 0:
                prow = rows[leave]
                r = [a - factor * b for a, b in zip(r, prow[:ncols])]
            r[enter] = zero

    if std["num_art"]:
        c1 = [zero] * num_struct + [one] * std["num_art"]
        status = run_phase(c1)
        if status == NUMERIC_FAILURE:
            return LpResult(status=NUMERIC_FAILURE, pivots=state["pivots"])
        _, val1 = reduced(c1)
        if val1 > 0:
            return LpResult(status=INFEASIBLE, pivots=state["pivots"])
        keep = [True] * len(rows)
        for i in range(len(rows)):
            if basis[i] >= num_struct:
                cand = next((j for j in range(num_struct) if rows[i][j] != 0), None)
                if cand is not None:
                    pivot(i, cand)
                else:
                    keep[i] = False
        if not all(keep):
            rows[:] = [r for r, k in zip(rows, keep) if k]
            A0[:] = [r for r, k in zip(A0, keep) if k]
            basis[:] = [b for b, k in zip(basis, keep) if k]
            row_ids[:] = [ri for ri, k in zip(row_ids, keep) if k]

    status = run_phase(c_full)
    if status in (NUMERIC_FAILURE, UNBOUNDED):
        return LpResult(status=status, pivots=state["pivots"])

    x_std = [zero] * ncols
    for i, bi in enumerate(basis):
        x_std[bi] = rows[i][-1]
    x = _recover_x(std, x_std)
    obj = sum((Fraction(cj) * xj for cj, xj in zip(lp.objective, x)), start=zero)

    dual = None
    if basis and want_dual:
        # A0[:, basis] transposed, assembled directly
        bt = [[A0[i][basis[k]] for i in range(len(rows))] for k in range(len(rows))]
        y = exact_solve(bt, [c_full[bi] for bi in basis])
        if y is not None:
            full_dual = [zero] * len(std["b"])
            for k, ri in enumerate(row_ids):
                full_dual[ri] = std["flips"][ri] * y[k]
            dual = tuple(full_dual[: std["num_rows_user"]])
    elif std["num_rows_user"] == 0:
        dual = ()

    return LpResult(status=OPTIMAL, x=tuple(x), dual=dual, objective_value=obj,
                    pivots=state["pivots"])


# --------------------------------------------------------------------------
# duality helper
# --------------------------------------------------------------------------


def dual_objective(lp: LinearProgram, dual) -> float:
    """Dual objective value for multipliers ``dual`` (one per constraint row).

    Convention: the Lagrangian of the minimization is
    ``c.x - sum_i y_i (a_i.x - b_i)``; reduced costs ``z = c - A^T y`` price
    the variable bounds, a finite bound contributing ``l_j z_j`` when
    ``z_j > 0`` and ``u_j z_j`` when ``z_j < 0``.  At an optimal basis this
    equals the primal objective (strong duality).
    """
    y = np.asarray(dual, dtype=float)
    n = lp.num_vars
    a_mat = np.array([list(a) for a, _, _ in lp.rows], dtype=float).reshape(len(lp.rows), n)
    b_vec = np.array([b for _, _, b in lp.rows], dtype=float)
    z = np.asarray(lp.objective, dtype=float) - a_mat.T @ y
    val = float(y @ b_vec)
    bounds = lp.bounds if lp.bounds is not None else tuple((None, None) for _ in range(n))
    for j, (lo, hi) in enumerate(bounds):
        if z[j] > 0 and lo is not None:
            val += lo * z[j]
        elif z[j] < 0 and hi is not None:
            val += hi * z[j]
    return val
