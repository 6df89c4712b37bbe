"""Dense float simplex used to steer branch and bound.

Same bounded-variable tableau layout as the exact engine, in float64.
Nothing here is trusted: branch-and-bound turns its duals into certified
rational bounds and its "integral" points into exactly checked
candidates, so a wrong answer can cost time but never correctness.
Bounds can be swapped per node and the engine re-optimized dually from
the current basis.
"""

from __future__ import annotations

import numpy as np

AT_LB, AT_UB, FREE, BASIC = 0, 1, 2, 3

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
PIV_TOL = 1e-8


class FloatLP:
    """Min-form LP: rows already normalized to (coeffs, sense, rhs) with
    senses '<=', '>=', '='; objective is a dense float vector."""

    def __init__(self, ncols: int, rows, c, var_lb=None, var_ub=None):
        n = ncols
        m = len(rows)
        self.n, self.m = n, m
        total = n + m
        self.T = np.zeros((m, total + 1))
        self.base_lb = np.full(total, -np.inf)
        self.base_ub = np.full(total, np.inf)
        if var_lb is not None:
            self.base_lb[:n] = var_lb
        if var_ub is not None:
            self.base_ub[:n] = var_ub
        for i, (coeffs, sense, rhs) in enumerate(rows):
            for j, v in coeffs.items():
                self.T[i, j] = v
            self.T[i, n + i] = 1.0
            self.T[i, total] = rhs
            if sense == "<=":
                self.base_lb[n + i] = 0.0
            elif sense == ">=":
                self.base_ub[n + i] = 0.0
            else:
                self.base_lb[n + i] = 0.0
                self.base_ub[n + i] = 0.0
        self.T0 = self.T.copy()
        self.lb = self.base_lb.copy()
        self.ub = self.base_ub.copy()
        self.c = np.zeros(total)
        self.c[:n] = c
        self.basis = np.arange(n, total, dtype=np.int64)
        self.status = np.full(total, AT_LB, dtype=np.int8)
        self.status[self.basis] = BASIC
        self.d = self.c.copy()
        self.xB = np.zeros(m)
        self.infeasible_row = -1
        self.iterations = 0
        self._fix_nonbasic_statuses()
        self._recompute_values()

    # -- state -------------------------------------------------------------
    def reset(self):
        self.T[:] = self.T0
        self.basis = np.arange(self.n, self.n + self.m, dtype=np.int64)
        self.status[:] = AT_LB
        self.status[self.basis] = BASIC
        self.d = self.c.copy()
        self._fix_nonbasic_statuses()
        self._recompute_values()

    def set_structural_bounds(self, lb, ub):
        """Swap per-node variable bounds; keeps basis and duals."""
        self.lb[: self.n] = lb
        self.ub[: self.n] = ub
        self._fix_nonbasic_statuses()
        self._recompute_values()

    def _fix_nonbasic_statuses(self):
        for j in range(self.n + self.m):
            st = self.status[j]
            if st == BASIC:
                continue
            if st == AT_LB and not np.isfinite(self.lb[j]):
                self.status[j] = AT_UB if np.isfinite(self.ub[j]) else FREE
            elif st == AT_UB and not np.isfinite(self.ub[j]):
                self.status[j] = AT_LB if np.isfinite(self.lb[j]) else FREE
            elif st == FREE and np.isfinite(self.lb[j]):
                self.status[j] = AT_LB

    def _nb_values(self) -> np.ndarray:
        vals = np.zeros(self.n + self.m)
        at_lb = self.status == AT_LB
        at_ub = self.status == AT_UB
        vals[at_lb] = self.lb[at_lb]
        vals[at_ub] = self.ub[at_ub]
        return vals

    def _recompute_values(self):
        vals = self._nb_values()
        vals[self.basis] = 0.0
        nz = np.nonzero(vals)[0]
        self.xB = self.T[:, -1] - self.T[:, nz] @ vals[nz]

    def solution(self) -> np.ndarray:
        vals = self._nb_values()
        vals[self.basis] = self.xB
        return vals[: self.n]

    def objective(self) -> float:
        return float(self.c @ np.concatenate([self.solution(),
                                              np.zeros(self.m)]))

    def row_duals(self) -> np.ndarray:
        return -self.d[self.n:self.n + self.m]

    def farkas_row(self):
        if self.infeasible_row < 0:
            return None
        return np.array(self.T[self.infeasible_row, self.n:self.n + self.m])

    # -- pivots ------------------------------------------------------------
    def _pivot(self, r: int, j: int, sigma: float, theta: float, leave_status: int):
        col = self.T[:, j].copy()
        if theta != 0.0:
            self.xB -= sigma * theta * col
        st = self.status[j]
        base = self.lb[j] if st == AT_LB else (self.ub[j] if st == AT_UB else 0.0)
        enter_val = base + sigma * theta
        leaving = self.basis[r]
        piv = col[r]
        self.T[r] *= 1.0 / piv
        col[r] = 0.0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            self.T[nzr] -= np.outer(col[nzr], self.T[r])
        dj = self.d[j]
        if dj != 0.0:
            self.d -= dj * self.T[r, :-1]
        self.d[j] = 0.0
        self.basis[r] = j
        self.status[j] = BASIC
        self.status[leaving] = leave_status
        self.xB[r] = enter_val
        self.iterations += 1

    # -- primal ------------------------------------------------------------
    def _primal_step(self, bland: bool) -> str:
        d, st = self.d, self.status
        fixed = self.lb == self.ub
        elig_lb = (st == AT_LB) & (d < -OPT_TOL) & ~fixed
        elig_ub = (st == AT_UB) & (d > OPT_TOL) & ~fixed
        elig_fr = (st == FREE) & (np.abs(d) > OPT_TOL)
        elig = elig_lb | elig_ub | elig_fr
        idx = np.nonzero(elig)[0]
        if len(idx) == 0:
            return "optimal"
        j = idx[0] if bland else idx[np.argmax(np.abs(d[idx]))]
        sigma = 1.0 if (st[j] == AT_LB or (st[j] == FREE and d[j] < 0)) else -1.0
        col = self.T[:, j]
        theta = np.inf
        if np.isfinite(self.lb[j]) and np.isfinite(self.ub[j]):
            theta = self.ub[j] - self.lb[j]
        r = -1
        leave = AT_LB
        delta = sigma * col
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        with np.errstate(divide="ignore", invalid="ignore"):
            lim_dn = np.where((delta > PIV_TOL) & np.isfinite(lbB),
                              (self.xB - lbB) / delta, np.inf)
            lim_up = np.where((delta < -PIV_TOL) & np.isfinite(ubB),
                              (ubB - self.xB) / (-delta), np.inf)
        lims = np.minimum(lim_dn, lim_up)
        lims = np.maximum(lims, 0.0)
        i_min = int(np.argmin(lims))
        if lims[i_min] < theta - 1e-12:
            theta = lims[i_min]
            r = i_min
            leave = AT_LB if lim_dn[i_min] <= lim_up[i_min] else AT_UB
        if not np.isfinite(theta):
            return "unbounded"
        if r < 0:
            if theta != 0.0:
                self.xB -= sigma * theta * col
            self.status[j] = AT_UB if sigma > 0 else AT_LB
            self.iterations += 1
            return "flip"
        self._pivot(r, j, sigma, theta, leave)
        return "pivot" if theta > 1e-12 else "degenerate"

    def primal(self, max_iters: int | None = None) -> str:
        limit = max_iters or (40 * (self.n + self.m) + 400)
        degen = 0
        for _ in range(limit):
            res = self._primal_step(bland=degen >= 60)
            if res == "optimal":
                return "optimal"
            if res == "unbounded":
                return "unbounded"
            degen = degen + 1 if res == "degenerate" else 0
        return "stalled"

    # -- dual ----------------------------------------------------------------
    def _dual_step(self) -> str:
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        viol_lo = lbB - self.xB
        viol_hi = self.xB - ubB
        viol = np.maximum(viol_lo, viol_hi)
        r = int(np.argmax(viol))
        if viol[r] <= FEAS_TOL:
            return "feasible"
        need_increase = viol_lo[r] > viol_hi[r]
        trow = self.T[r, :-1]
        st = self.status
        fixed = self.lb == self.ub
        cand_sigma = np.where(st == AT_LB, 1.0, np.where(st == AT_UB, -1.0, 0.0))
        free = st == FREE
        if need_increase:
            cand_sigma[free] = np.where(trow[free] < 0, 1.0, -1.0)
        else:
            cand_sigma[free] = np.where(trow[free] > 0, 1.0, -1.0)
        move = cand_sigma * trow
        ok = (st != BASIC) & ~fixed & (np.abs(trow) > PIV_TOL)
        ok &= (move < 0) if need_increase else (move > 0)
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            self.infeasible_row = r
            return "infeasible"
        ratios = np.abs(self.d[idx] / trow[idx])
        jj = int(np.argmin(ratios))
        j = int(idx[jj])
        sigma = float(cand_sigma[j])
        bi = self.basis[r]
        if need_increase:
            gap = self.lb[bi] - self.xB[r]
            theta = gap / (-sigma * trow[j])
            leave = AT_LB
        else:
            gap = self.xB[r] - self.ub[bi]
            theta = gap / (sigma * trow[j])
            leave = AT_UB
        self._pivot(r, j, sigma, theta, leave)
        return "pivot"

    def dual(self, max_iters: int | None = None) -> str:
        self.infeasible_row = -1
        limit = max_iters or (40 * (self.n + self.m) + 400)
        for _ in range(limit):
            res = self._dual_step()
            if res != "pivot":
                return res
        return "stalled"

    def reoptimize(self) -> str:
        """Dual then primal; the normal per-node sequence."""
        res = self.dual()
        if res != "feasible":
            return res
        return self.primal()

    def _recompute_d(self):
        d = self.c.copy()
        cb = self.c[self.basis]
        nz = np.nonzero(np.abs(cb) > 0)[0]
        if len(nz):
            d -= cb[nz] @ self.T[nz, :-1]
        d[self.basis] = 0.0
        self.d = d

    def first_solve(self) -> str:
        """From-scratch solve: zero-objective dual phase for feasibility,
        then primal with the true objective."""
        saved_c = self.c
        self.c = np.zeros_like(saved_c)
        self.d = np.zeros_like(saved_c)
        res = self.dual()
        self.c = saved_c
        if res != "feasible":
            if res == "infeasible":
                self._recompute_d()
            return res
        self._recompute_d()
        return self.primal()
