"""Self-contained dense LP solver (two-phase revised simplex).

Solves  maximize c^T x  subject to row constraints with senses <=, >=, ==
and per-variable bounds.  Sized for the small structured LPs produced by the
cone membership tests (a few thousand rows at most), not for sparse work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LE, GE, EQ = "<=", ">=", "=="
_SENSES = (LE, GE, EQ)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

DEFAULT_FEAS_TOL = 1e-8
_PIVOT_TOL = 1e-10
_STALL_LIMIT = 50  # degenerate pivots before switching to Bland's rule
_REFACTOR_EVERY = 100


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x  subject to rows and bounds.

    rows: list of (coefficients, sense, rhs); bounds: per-variable (lo, hi),
    either side may be infinite.  Malformed input raises at construction.
    """

    objective: np.ndarray
    rows: tuple
    bounds: tuple

    def __init__(self, objective, rows, bounds=None):
        c = np.asarray(objective, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("objective must be a nonempty vector")
        if not np.all(np.isfinite(c)):
            raise ValueError("objective coefficients must be finite")
        nvar = c.size
        norm_rows = []
        for k, (coefs, sense, rhs) in enumerate(rows):
            a = np.asarray(coefs, dtype=float)
            if a.shape != (nvar,):
                raise ValueError(f"row {k}: expected {nvar} coefficients")
            if not np.all(np.isfinite(a)) or not math.isfinite(rhs):
                raise ValueError(f"row {k}: coefficients and rhs must be finite")
            if sense not in _SENSES:
                raise ValueError(f"row {k}: unknown sense {sense!r}")
            norm_rows.append((a, sense, float(rhs)))
        if bounds is None:
            bnds = [(-math.inf, math.inf)] * nvar
        else:
            bnds = [(float(lo), float(hi)) for lo, hi in bounds]
            if len(bnds) != nvar:
                raise ValueError("bounds length must match objective")
            for j, (lo, hi) in enumerate(bnds):
                if math.isnan(lo) or math.isnan(hi) or lo > hi:
                    raise ValueError(f"variable {j}: invalid bounds ({lo}, {hi})")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "rows", tuple(norm_rows))
        object.__setattr__(self, "bounds", tuple(bnds))

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def constraint_violation(self, x: np.ndarray) -> float:
        """Largest violation of rows and bounds at x (0 when feasible)."""
        worst = 0.0
        for a, sense, rhs in self.rows:
            v = float(a @ x)
            if sense == LE:
                worst = max(worst, v - rhs)
            elif sense == GE:
                worst = max(worst, rhs - v)
            else:
                worst = max(worst, abs(v - rhs))
        for j, (lo, hi) in enumerate(self.bounds):
            worst = max(worst, lo - x[j], x[j] - hi)
        return worst


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective_value: float | None = None
    dual: np.ndarray | None = None  # multipliers per original row, when optimal
    iterations: int = 0
    note: str = ""


@dataclass
class _StandardForm:
    """max c.y, A y <= b, y >= 0, plus bookkeeping to map back to the input."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    # column j of A corresponds to original var var_of[j] with sign sgn_of[j]
    var_of: list = field(default_factory=list)
    sgn_of: list = field(default_factory=list)
    offset: np.ndarray | None = None  # x = offset + sum of signed y columns
    row_origin: list = field(default_factory=list)  # (orig row idx, sign) or None
    # folded singleton rows: variable -> (orig row idx, sign, coefficient),
    # kept so their duals can be recovered from reduced costs
    fold_hi: dict = field(default_factory=dict)
    fold_lo: dict = field(default_factory=dict)


def _to_standard_form(lp: LinearProgram):
    """Normalize to  max c.y, A y <= b, y >= 0.

    Equality rows become a <= / >= pair; singleton rows are folded into
    variable bounds; bounded variables are shifted or flipped, free ones
    split.  Returns (_StandardForm, infeasible_flag).
    """
    nvar = lp.n_vars
    # sense-normalized rows: (coefs, rhs, origin index, origin sign)
    le_rows = []
    for k, (a, sense, rhs) in enumerate(lp.rows):
        if sense in (LE, EQ):
            le_rows.append((a.copy(), rhs, k, 1.0))
        if sense in (GE, EQ):
            le_rows.append((-a, -rhs, k, -1.0))

    lo = np.array([b[0] for b in lp.bounds])
    hi = np.array([b[1] for b in lp.bounds])

    kept = []
    fold_hi: dict = {}
    fold_lo: dict = {}
    for a, rhs, k, sgn in le_rows:
        nz = np.flatnonzero(a)
        if nz.size == 1:
            j = int(nz[0])
            if a[j] > 0:
                if rhs / a[j] <= hi[j]:
                    hi[j] = rhs / a[j]
                    fold_hi[j] = (k, sgn, float(a[j]))
            else:
                if rhs / a[j] >= lo[j]:
                    lo[j] = rhs / a[j]
                    fold_lo[j] = (k, sgn, float(a[j]))
        elif nz.size == 0:
            if rhs < -DEFAULT_FEAS_TOL:
                return None, True
        else:
            kept.append((a, rhs, k, sgn))
    if np.any(lo > hi + DEFAULT_FEAS_TOL):
        return None, True

    # variable transform: x = offset + signed combination of y-columns
    offset = np.zeros(nvar)
    cols = []  # (var index, sign)
    extra_rows = []  # upper-bound rows re-added for doubly bounded variables
    for j in range(nvar):
        if math.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append((j, 1.0))
            if math.isfinite(hi[j]):
                extra_rows.append((j, hi[j] - lo[j]))
        elif math.isfinite(hi[j]):
            offset[j] = hi[j]
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))

    ncol = len(cols)
    m = len(kept) + len(extra_rows)
    A = np.zeros((m, ncol))
    b = np.zeros(m)
    row_origin = []
    col_var = np.array([v for v, _ in cols], dtype=int)
    col_sgn = np.array([s for _, s in cols])
    for r, (a, rhs, k, sgn) in enumerate(kept):
        A[r, :] = a[col_var] * col_sgn
        b[r] = rhs - float(a @ offset)
        row_origin.append((k, sgn))
    for r, (j, ub) in enumerate(extra_rows, start=len(kept)):
        mask = col_var == j
        A[r, mask] = col_sgn[mask]
        # x = lo + y, so the cap on y is ub = hi - lo directly
        b[r] = ub
        if j in fold_hi:
            # the cap is really a folded singleton row; route its dual back
            k, sgn, coef = fold_hi[j]
            row_origin.append((k, sgn / coef))
        else:
            row_origin.append(None)

    c = lp.objective[col_var] * col_sgn
    sf = _StandardForm(
        A=A,
        b=b,
        c=c,
        var_of=list(col_var),
        sgn_of=list(col_sgn),
        offset=offset,
        row_origin=row_origin,
        fold_hi=fold_hi,
        fold_lo=fold_lo,
    )
    return sf, False


class _Simplex:
    """Revised simplex over  max c.y, W y = b, y >= 0  with b >= 0 arranged
    via slacks and artificials."""

    def __init__(self, A, b, c, feas_tol):
        m, n = A.shape
        self.m = m
        self.n_struct = n
        self.feas_tol = feas_tol
        flip = b < 0
        self.flip = flip
        A = A.copy()
        b = b.copy()
        A[flip] *= -1.0
        b[flip] *= -1.0
        slack = np.eye(m)
        slack[flip] *= -1.0
        art_rows = np.flatnonzero(flip)
        art = np.zeros((m, art_rows.size))
        for t, r in enumerate(art_rows):
            art[r, t] = 1.0
        self.W = np.hstack([A, slack, art])
        # a deterministic strictly positive jitter on the rhs breaks the
        # pivot stalling that degenerate systems (many zero rhs rows) cause;
        # the true rhs is restored once an optimal basis is found
        self.b_true = b
        scale = max(1.0, float(np.max(np.abs(b)))) if m else 1.0
        jitter = 1e-9 * scale * (
            1.0 + (np.arange(m, dtype=np.int64) * 2654435761 % 1024) / 1024.0
        )
        self.b = b + jitter
        self.ncols = self.W.shape[1]
        self.n_art = art_rows.size
        self.art_start = n + m
        self.c = np.concatenate([c, np.zeros(m + self.n_art)])
        # start from the slack/artificial basis
        self.basis = []
        slack_of_row = {}
        for r in range(m):
            slack_of_row[r] = n + r
        art_iter = iter(range(self.art_start, self.ncols))
        for r in range(m):
            if flip[r]:
                self.basis.append(next(art_iter))
            else:
                self.basis.append(n + r)
        self.Binv = np.eye(m)
        self.xB = self.b.copy()
        self.iterations = 0

    def _refactorize(self):
        B = self.W[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            self.Binv = np.linalg.pinv(B)
        self.xB = self.Binv @ self.b
        np.maximum(self.xB, 0.0, out=self.xB)

    def run(self, cost, max_iters, allow_cols):
        """Maximize `cost` over columns marked allowed; returns a status."""
        m = self.m
        stall = 0
        bland = False
        last_obj = -math.inf
        while True:
            if self.iterations >= max_iters:
                return ITERATION_LIMIT
            y = cost[self.basis] @ self.Binv
            d = cost - y @ self.W
            d[~allow_cols] = -math.inf
            d[self.basis] = -math.inf
            if bland:
                cand = np.flatnonzero(d > _PIVOT_TOL)
                if cand.size == 0:
                    return OPTIMAL
                e = int(cand[0])
            else:
                e = int(np.argmax(d))
                if d[e] <= _PIVOT_TOL:
                    return OPTIMAL
            u = self.Binv @ self.W[:, e]
            pos = u > _PIVOT_TOL
            if not np.any(pos):
                return UNBOUNDED
            ratios = np.full(m, math.inf)
            ratios[pos] = self.xB[pos] / u[pos]
            theta = float(np.min(ratios))
            ties = np.flatnonzero(ratios <= theta + 1e-12)
            if bland:
                leave = int(ties[np.argmin([self.basis[t] for t in ties])])
            else:
                leave = int(ties[np.argmax(u[ties])])
            # pivot
            self.xB = self.xB - theta * u
            self.xB[leave] = theta
            np.maximum(self.xB, 0.0, out=self.xB)
            piv = u[leave]
            row = self.Binv[leave] / piv
            self.Binv -= np.outer(u, row)
            self.Binv[leave] = row
            self.basis[leave] = e
            self.iterations += 1
            if self.iterations % _REFACTOR_EVERY == 0:
                self._refactorize()
            obj = float(cost[self.basis] @ self.xB)
            if obj <= last_obj + 1e-12 * max(1.0, abs(last_obj)):
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False
            last_obj = obj

    def solve(self, max_iters):
        allow = np.ones(self.ncols, dtype=bool)
        if self.n_art:
            phase1 = np.zeros(self.ncols)
            phase1[self.art_start:] = -1.0
            status = self.run(phase1, max_iters, allow)
            if status == ITERATION_LIMIT:
                return status
            art_sum = -float(phase1[self.basis] @ self.xB)
            if art_sum > self.feas_tol * max(1.0, float(np.max(np.abs(self.b)))):
                return INFEASIBLE
            self._drive_out_artificials()
            allow[self.art_start:] = False
        status = self.run(self.c, max_iters, allow)
        if status == OPTIMAL:
            # drop the jitter: evaluate the optimal basis on the true rhs
            self.b = self.b_true
            self.xB = self.Binv @ self.b
            np.maximum(self.xB, 0.0, out=self.xB)
        return status

    def _drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.art_start:
                continue
            row = self.Binv[r] @ self.W[:, : self.art_start]
            cand = np.flatnonzero(np.abs(row) > 1e-9)
            cand = [j for j in cand if j not in self.basis]
            if not cand:
                continue  # redundant row; artificial stays basic at zero
            e = int(cand[0])
            u = self.Binv @ self.W[:, e]
            piv = u[r]
            new_row = self.Binv[r] / piv
            self.Binv -= np.outer(u, new_row)
            self.Binv[r] = new_row
            self.basis[r] = e
            self.xB = self.Binv @ self.b
            np.maximum(self.xB, 0.0, out=self.xB)

    def primal(self):
        y = np.zeros(self.ncols)
        y[self.basis] = self.xB
        return y[: self.n_struct]

    def duals(self):
        y = self.c[self.basis] @ self.Binv
        return np.where(self.flip, -y, y)


def solve(
    lp: LinearProgram,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iters: int | None = None,
) -> LpSolution:
    """Solve the LP; deterministic for a fixed input."""
    if max_iters is None:
        max_iters = 50 * (lp.n_rows + lp.n_vars + 2)
    sf, infeasible = _to_standard_form(lp)
    if infeasible:
        return LpSolution(status=INFEASIBLE, note="bound presolve")

    m = sf.A.shape[0]
    if m == 0:
        # only one-sided bounds remain; optimum is at the offsets unless some
        # column still improves, in which case the LP is unbounded
        if np.any(sf.c > _PIVOT_TOL):
            return LpSolution(status=UNBOUNDED)
        x = sf.offset.copy()
        return LpSolution(status=OPTIMAL, x=x, objective_value=float(lp.objective @ x))

    spx = _Simplex(sf.A, sf.b, sf.c, feas_tol)
    status = spx.solve(max_iters)
    if status in (INFEASIBLE, ITERATION_LIMIT):
        return LpSolution(status=status, iterations=spx.iterations)
    if status == UNBOUNDED:
        return LpSolution(status=UNBOUNDED, iterations=spx.iterations)

    y = spx.primal()
    x = sf.offset.copy()
    for j, (var, sgn) in enumerate(zip(sf.var_of, sf.sgn_of)):
        x[var] += sgn * y[j]

    # refine once if rounding pushed the point slightly outside
    if lp.constraint_violation(x) > feas_tol:
        spx._refactorize()
        y = spx.primal()
        x = sf.offset.copy()
        for j, (var, sgn) in enumerate(zip(sf.var_of, sf.sgn_of)):
            x[var] += sgn * y[j]

    duals_std = spx.duals()
    dual = np.zeros(lp.n_rows)
    for r, origin in enumerate(sf.row_origin):
        if origin is not None:
            k, sgn = origin
            dual[k] += sgn * float(duals_std[r])

    # singleton rows folded into bounds carry their multipliers in the
    # reduced costs; attribute the stationarity residual back to them
    if sf.fold_hi or sf.fold_lo:
        z = lp.objective.copy()
        for k, (a, _, _) in enumerate(lp.rows):
            if dual[k] != 0.0:
                z -= dual[k] * a
        zscale = max(1.0, float(np.max(np.abs(lp.objective))))
        for j, (k, sgn, coef) in sf.fold_hi.items():
            if z[j] > 1e-12 * zscale:
                dual[k] += sgn * z[j] / coef
        for j, (k, sgn, coef) in sf.fold_lo.items():
            if z[j] < -1e-12 * zscale:
                dual[k] += sgn * z[j] / coef

    return LpSolution(
        status=OPTIMAL,
        x=x,
        objective_value=float(lp.objective @ x),
        dual=dual,
        iterations=spx.iterations,
    )
