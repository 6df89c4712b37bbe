"""Exact rational bounded-variable simplex.

Dense tableau over exact rationals. Rows are turned into equalities with
one slack each (slack bounds encode the sense), so the slack columns of
the tableau always hold the basis inverse and dual values fall out for
free. Variable bounds are handled natively (no bound rows).

Phase 1 runs the dual simplex under a zero objective with least-index
(Bland) selection, which is always dually feasible and cannot cycle;
phase 2 runs the primal simplex with largest-coefficient pricing that
drops to Bland's least-index rule on a degenerate streak, restoring the
no-cycling guarantee. The object supports warm restarts: rows can be
appended after a solve and re-optimized dually, which is what the
cutting-plane loop leans on.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .._rat import Rat, ZERO, ONE, rat
from .model import EQ, GE, LE, MilpModel, MilpSolution, Status

AT_LB, AT_UB, FREE, BASIC = 0, 1, 2, 3

_BLAND_TRIGGER = 40


class ExactSimplex:
    """One solver instance per model; reusable across row additions."""

    def __init__(self, model: MilpModel, relax_integrality: bool = True):
        if not relax_integrality:
            raise ValueError("ExactSimplex solves the LP relaxation")
        self.model = model
        n = model.nvars
        m = model.nrows
        self.n = n
        self.m = m
        self.lb: list[Optional[Rat]] = []
        self.ub: list[Optional[Rat]] = []
        for v in model.variables:
            self.lb.append(v.lb)
            self.ub.append(v.ub)
        # slack bounds: <=  -> s in [0, inf); >= -> s in (-inf, 0]; = -> [0,0]
        for row in model.constraints:
            if row.sense == LE:
                self.lb.append(ZERO)
                self.ub.append(None)
            elif row.sense == GE:
                self.lb.append(None)
                self.ub.append(ZERO)
            else:
                self.lb.append(ZERO)
                self.ub.append(ZERO)
        self.T: list[list[Rat]] = []
        for i, row in enumerate(model.constraints):
            tr = [ZERO] * (n + m + 1)
            for j, c in row.coeffs.items():
                tr[j] = c
            tr[n + i] = ONE
            tr[-1] = row.rhs
            self.T.append(tr)
        self.basis = [n + i for i in range(m)]
        self.status = [BASIC] * (n + m)
        for j in range(n):
            self.status[j] = self._resting_status(j)
        self.sign = 1
        self.c = [ZERO] * (n + m)
        self.d = [ZERO] * (n + m)
        self.xB = [ZERO] * m
        self._set_objective_from_model()
        self._recompute_values()
        self.pivots = 0
        self.infeasible_row: Optional[int] = None

    # -- helpers -----------------------------------------------------------
    def _resting_status(self, j: int) -> int:
        if self.lb[j] is not None:
            return AT_LB
        if self.ub[j] is not None:
            return AT_UB
        return FREE

    def _set_objective_from_model(self):
        self.sign = 1 if self.model.objective_sense == "min" else -1
        self.c = [ZERO] * (self.n + self.m)
        for j, v in self.model.objective.items():
            self.c[j] = v if self.sign == 1 else -v
        self._recompute_reduced_costs()

    def _recompute_reduced_costs(self):
        d = list(self.c)
        for i, bi in enumerate(self.basis):
            cb = self.c[bi]
            if cb != 0:
                ti = self.T[i]
                for j in range(self.n + self.m):
                    if ti[j] != 0:
                        d[j] -= cb * ti[j]
        for bi in self.basis:
            d[bi] = ZERO
        self.d = d

    def _nb_value(self, j: int) -> Rat:
        st = self.status[j]
        if st == AT_LB:
            return self.lb[j]
        if st == AT_UB:
            return self.ub[j]
        return ZERO

    def _recompute_values(self):
        xB = [row[-1] for row in self.T]
        for j in range(self.n + self.m):
            if self.status[j] == BASIC:
                continue
            v = self._nb_value(j)
            if v != 0:
                for i in range(self.m):
                    t = self.T[i][j]
                    if t != 0:
                        xB[i] -= t * v
        self.xB = xB

    def solution_vector(self) -> list[Rat]:
        x = [ZERO] * (self.n + self.m)
        for j in range(self.n + self.m):
            if self.status[j] != BASIC:
                x[j] = self._nb_value(j)
        for i, bi in enumerate(self.basis):
            x[bi] = self.xB[i]
        return x

    def _violation(self, i: int):
        """(amount, target_status) if basic i is out of bounds."""
        bi = self.basis[i]
        v = self.xB[i]
        if self.lb[bi] is not None and v < self.lb[bi]:
            return self.lb[bi] - v, AT_LB
        if self.ub[bi] is not None and v > self.ub[bi]:
            return v - self.ub[bi], AT_UB
        return None

    # -- pivoting ----------------------------------------------------------
    def _pivot(self, r: int, j: int, sigma: int, theta: Rat, leave_status: int):
        col = [self.T[i][j] for i in range(self.m)]
        if theta != 0:
            for i in range(self.m):
                if col[i] != 0:
                    self.xB[i] -= sigma * theta * col[i]
        enter_val = self._nb_value(j) + sigma * theta
        leaving = self.basis[r]
        piv = col[r]
        trow = self.T[r]
        inv = ONE / piv
        if inv != 1:
            for k in range(self.n + self.m + 1):
                if trow[k] != 0:
                    trow[k] = trow[k] * inv
        for i in range(self.m):
            if i == r:
                continue
            f = col[i]
            if f != 0:
                ti = self.T[i]
                for k in range(self.n + self.m + 1):
                    if trow[k] != 0:
                        ti[k] -= f * trow[k]
        dj = self.d[j]
        if dj != 0:
            for k in range(self.n + self.m):
                if trow[k] != 0:
                    self.d[k] -= dj * trow[k]
            self.d[j] = ZERO
        self.basis[r] = j
        self.status[j] = BASIC
        self.status[leaving] = leave_status
        self.xB[r] = enter_val
        self.pivots += 1

    # -- primal simplex ----------------------------------------------------
    def _primal_entering(self, bland: bool) -> Optional[tuple[int, int]]:
        best = None
        best_score = ZERO
        for j in range(self.n + self.m):
            st = self.status[j]
            if st == BASIC:
                continue
            if self.lb[j] is not None and self.lb[j] == self.ub[j]:
                continue  # fixed variable can never move
            dj = self.d[j]
            if st == AT_LB and dj < 0:
                cand = (j, 1, -dj)
            elif st == AT_UB and dj > 0:
                cand = (j, -1, dj)
            elif st == FREE and dj != 0:
                cand = (j, 1 if dj < 0 else -1, abs(dj))
            else:
                continue
            if bland:
                return cand[0], cand[1]
            if best is None or cand[2] > best_score:
                best = (cand[0], cand[1])
                best_score = cand[2]
        return best

    def _primal_step(self, bland: bool) -> str:
        ent = self._primal_entering(bland)
        if ent is None:
            return "optimal"
        j, sigma = ent
        theta = None
        r = -1
        leave_status = AT_LB
        if self.lb[j] is not None and self.ub[j] is not None:
            theta = self.ub[j] - self.lb[j]
        for i in range(self.m):
            t = self.T[i][j]
            if t == 0:
                continue
            bi = self.basis[i]
            delta = sigma * t
            if delta > 0:
                if self.lb[bi] is None:
                    continue
                lim = (self.xB[i] - self.lb[bi]) / delta
                ls = AT_LB
            else:
                if self.ub[bi] is None:
                    continue
                lim = (self.ub[bi] - self.xB[i]) / (-delta)
                ls = AT_UB
            if theta is None or lim < theta or (
                    lim == theta and r >= 0 and bi < self.basis[r]):
                theta = lim
                r = i
                leave_status = ls
        if theta is None:
            return "unbounded"
        if r < 0:
            # bound flip: j runs to its opposite bound
            col_moves = theta != 0
            if col_moves:
                for i in range(self.m):
                    t = self.T[i][j]
                    if t != 0:
                        self.xB[i] -= sigma * theta * t
            self.status[j] = AT_UB if sigma == 1 else AT_LB
            self.pivots += 1
            return "flip"
        self._pivot(r, j, sigma, theta, leave_status)
        return "pivot" if theta != 0 else "degenerate"

    def _primal_loop(self) -> Status:
        degen_streak = 0
        bland = False
        while True:
            res = self._primal_step(bland)
            if res == "optimal":
                return Status.OPTIMAL
            if res == "unbounded":
                return Status.UNBOUNDED
            if res == "degenerate":
                degen_streak += 1
                if degen_streak >= _BLAND_TRIGGER:
                    bland = True
            else:
                degen_streak = 0
                bland = False

    # -- dual simplex --------------------------------------------------------
    def _dual_step(self, bland: bool) -> str:
        r = -1
        worst = None
        target = AT_LB
        for i in range(self.m):
            vi = self._violation(i)
            if vi is None:
                continue
            amount, tgt = vi
            if bland:
                if r < 0 or self.basis[i] < self.basis[r]:
                    r, target = i, tgt
            else:
                if worst is None or amount > worst or (
                        amount == worst and self.basis[i] < self.basis[r]):
                    r, target, worst = i, tgt, amount
        if r < 0:
            return "feasible"
        trow = self.T[r]
        need_increase = target == AT_LB  # basic below its lower bound
        best_j = -1
        best_ratio = None
        best_sigma = 1
        for j in range(self.n + self.m):
            if self.status[j] == BASIC:
                continue
            if self.lb[j] is not None and self.lb[j] == self.ub[j]:
                continue
            t = trow[j]
            if t == 0:
                continue
            st = self.status[j]
            if st == AT_LB:
                sigma = 1
            elif st == AT_UB:
                sigma = -1
            else:
                sigma = 1 if (t < 0) == need_increase else -1
            moves_up = sigma * t < 0
            if moves_up != need_increase:
                continue
            ratio = abs(self.d[j] / t)
            if (best_ratio is None or ratio < best_ratio
                    or (ratio == best_ratio and j < best_j)):
                best_ratio = ratio
                best_j = j
                best_sigma = sigma
        if best_j < 0:
            self.infeasible_row = r
            return "infeasible"
        bi = self.basis[r]
        if need_increase:
            gap = self.lb[bi] - self.xB[r]
            leave_status = AT_LB
        else:
            gap = self.xB[r] - self.ub[bi]
            leave_status = AT_UB
        t = trow[best_j]
        theta = gap / (-best_sigma * t) if need_increase else gap / (best_sigma * t)
        self._pivot(r, best_j, best_sigma, theta, leave_status)
        return "pivot"

    def _dual_loop(self, bland: bool = False) -> Status:
        count = 0
        while True:
            res = self._dual_step(bland or count >= _BLAND_TRIGGER)
            if res == "feasible":
                return Status.OPTIMAL
            if res == "infeasible":
                return Status.INFEASIBLE
            count += 1

    # -- driver --------------------------------------------------------------
    def solve(self) -> Status:
        """Phase 1 (zero-objective dual, Bland) then phase 2 (primal)."""
        self.infeasible_row = None
        if any(self._violation(i) for i in range(self.m)):
            saved_c, saved_d = self.c, self.d
            self.c = [ZERO] * (self.n + self.m)
            self.d = [ZERO] * (self.n + self.m)
            st = self._dual_loop(bland=True)
            self.c = saved_c
            if st == Status.INFEASIBLE:
                return st
            self._recompute_reduced_costs()
        return self._primal_loop()

    def reoptimize_dual(self) -> Status:
        """Restore primal feasibility keeping dual feasibility (used after
        row additions)."""
        return self._dual_loop(bland=False)

    def add_constraint(self, coeffs, sense: str, rhs, name: str = "") -> int:
        """Append a row to the model and the warm tableau; caller should
        reoptimize_dual() afterwards."""
        idx = self.model.add_constraint(coeffs, sense, rhs, name=name)
        row = self.model.constraints[idx]
        ncols_old = self.n + self.m + 1
        # widen every structure by one slack column before the rhs
        for i in range(self.m):
            self.T[i].insert(ncols_old - 1, ZERO)
        self.c.insert(ncols_old - 1, ZERO)
        self.d.insert(ncols_old - 1, ZERO)
        if row.sense == LE:
            self.lb.append(ZERO)
            self.ub.append(None)
        elif row.sense == GE:
            self.lb.append(None)
            self.ub.append(ZERO)
        else:
            self.lb.append(ZERO)
            self.ub.append(ZERO)
        self.m += 1
        ncols = self.n + self.m + 1
        new = [ZERO] * ncols
        for j, c in row.coeffs.items():
            new[j] = c
        new[self.n + self.m - 1] = ONE
        new[-1] = row.rhs
        # express in the current basis frame
        for i, bi in enumerate(self.basis):
            f = new[bi]
            if f != 0:
                ti = self.T[i]
                for k in range(ncols):
                    if ti[k] != 0:
                        new[k] -= f * ti[k]
                new[bi] = ZERO
        self.T.append(new)
        self.basis.append(self.n + self.m - 1)
        self.status.append(BASIC)
        val = new[-1]
        for j in range(self.n + self.m - 1):
            if self.status[j] != BASIC and new[j] != 0:
                v = self._nb_value(j)
                if v != 0:
                    val -= new[j] * v
        self.xB.append(val)
        return idx

    # -- reporting -----------------------------------------------------------
    def build_solution(self, status: Status) -> MilpSolution:
        if status != Status.OPTIMAL:
            return MilpSolution(status=status)
        z = self.solution_vector()
        x = tuple(z[: self.n])
        obj = self.model.eval_objective(x)
        # multipliers: y_i = -d[slack_i] in min form; flip for max models
        flip = 1 if self.sign == 1 else -1
        duals = tuple(rat(-flip) * self.d[self.n + i] for i in range(self.m))
        red = tuple(rat(flip) * self.d[j] for j in range(self.n))
        return MilpSolution(status=status, x=x, objective=obj, duals=duals,
                            reduced_costs=red)


def lp_solve(model: MilpModel) -> MilpSolution:
    """Exact LP relaxation solve (integrality flags ignored)."""
    sx = ExactSimplex(model)
    status = sx.solve()
    return sx.build_solution(status)


def check_lp_certificate(model: MilpModel, sol: MilpSolution) -> bool:
    """Exact optimality certificate for an OPTIMAL lp_solve result.

    Checks primal feasibility, dual sign conditions, reduced-cost
    consistency (d = c - A^T y), complementary slackness at bounds and
    rows, and the primal/dual objective equality.
    """
    if sol.status != Status.OPTIMAL:
        return False
    x, y, d = sol.x, sol.duals, sol.reduced_costs
    if not model.point_feasible(x, integrality=False):
        return False
    minimize = model.objective_sense == "min"
    # sign conventions: for min, y_i <= 0 on <=-rows, >= 0 on >=-rows.
    # for max the signs flip.
    for i, row in enumerate(model.constraints):
        yi = y[i] if minimize else -y[i]
        if row.sense == LE and yi > 0:
            return False
        if row.sense == GE and yi < 0:
            return False
        act = model.eval_row(row, x)
        if yi != 0 and act != row.rhs:
            return False
    # reduced costs must equal c - A^T y exactly
    for j in range(model.nvars):
        cj = model.objective.get(j, ZERO)
        acc = cj
        for i, row in enumerate(model.constraints):
            aij = row.coeffs.get(j)
            if aij is not None and y[i] != 0:
                acc -= y[i] * aij
        if acc != d[j]:
            return False
        dj = d[j] if minimize else -d[j]
        v = model.variables[j]
        at_lb = v.lb is not None and x[j] == v.lb
        at_ub = v.ub is not None and x[j] == v.ub
        if dj > 0 and not at_lb:
            return False
        if dj < 0 and not at_ub:
            return False
    dual_obj = sum((y[i] * row.rhs for i, row in enumerate(model.constraints)),
                   rat(0))
    for j in range(model.nvars):
        dj = d[j]
        if dj == 0:
            continue
        v = model.variables[j]
        dj_min = dj if minimize else -dj
        bound = v.lb if dj_min > 0 else v.ub
        dual_obj += dj * bound
    return dual_obj == sol.objective
