"""Certified branch and bound.

Node relaxations are solved by the float engine for speed, but every
decision that affects correctness is re-derived exactly:

- pruning uses a rational weak-duality bound evaluated at the (clipped)
  float duals, valid for any sign-respecting multiplier vector;
- float "infeasible" verdicts are accepted only with an exactly checked
  aggregation certificate;
- integral-looking points are completed and checked in exact arithmetic
  before becoming incumbents;
- when floats stall on a small model the node falls back to the exact
  simplex.

Branching is most-fractional (ties toward the lowest index) and node
selection is best-bound. Worst case the search degenerates to exhaustive
enumeration over the finite integer box, so the optimum is exact no
matter how the float layer behaves.
"""

from __future__ import annotations

import heapq
import itertools
import math
from typing import Optional, Sequence

import numpy as np

from .._rat import Rat, ZERO, rat
from .exact import ExactSimplex, lp_solve
from .fastlp import FloatLP
from .model import EQ, GE, LE, MilpModel, MilpSolution, Status

_EXACT_FALLBACK_SIZE = 700
_PRUNE_MARGIN = 1e-7


class _MinData:
    """Min-form view of a model plus exact row/bound tables."""

    def __init__(self, model: MilpModel):
        self.model = model
        self.minimize = model.objective_sense == "min"
        self.n = model.nvars
        sign = 1 if self.minimize else -1
        self.c = {j: sign * v for j, v in model.objective.items()}
        self.rows = [(r.coeffs, r.sense, r.rhs) for r in model.constraints]
        self.int_idx = model.integer_indices()
        self.int_set = set(self.int_idx)
        self.lb0 = [v.lb for v in model.variables]
        self.ub0 = [v.ub for v in model.variables]

    def orient(self, value: Optional[Rat]) -> Optional[Rat]:
        if value is None:
            return None
        return value if self.minimize else -value

    def float_rows(self):
        return [({j: float(v) for j, v in coeffs.items()}, sense, float(rhs))
                for coeffs, sense, rhs in self.rows]

    def float_c(self):
        out = np.zeros(self.n)
        for j, v in self.c.items():
            out[j] = float(v)
        return out


def safe_dual_bound(md: _MinData, y_float, node_lb, node_ub) -> Optional[Rat]:
    """Exact lower bound on the min-form LP from approximate duals.

    Multipliers are sign-clipped per row sense and converted to exact
    rationals; the bound y^T b + sum_j min(d_j l_j, d_j u_j) with
    d = c - A^T y is then valid for any such y. Returns None when an
    infinite bound blocks the evaluation.
    """
    y: dict[int, Rat] = {}
    for i, (_, sense, _) in enumerate(md.rows):
        yi = float(y_float[i])
        if sense == LE:
            yi = min(yi, 0.0)
        elif sense == GE:
            yi = max(yi, 0.0)
        if abs(yi) < 1e-13 or not math.isfinite(yi):
            continue
        y[i] = rat(yi)
    d = dict(md.c)
    bound = ZERO
    for i, yi in y.items():
        coeffs, _, rhs = md.rows[i]
        bound += yi * rhs
        for j, a in coeffs.items():
            d[j] = d.get(j, ZERO) - yi * a
    for j, dj in d.items():
        if dj == 0:
            continue
        if dj > 0:
            lo = node_lb[j]
            if lo is None:
                return None
            bound += dj * lo
        else:
            hi = node_ub[j]
            if hi is None:
                return None
            bound += dj * hi
    return bound


def farkas_certified(md: _MinData, yrow, node_lb, node_ub) -> bool:
    """Exactly verify an infeasibility certificate row.

    yrow are arbitrary floats; aggregating rows (as equalities with their
    slacks) with exact rationalized multipliers must put the aggregated
    rhs outside the attainable interval of the aggregated lhs.
    """
    y: dict[int, Rat] = {}
    for i, v in enumerate(yrow):
        fv = float(v)
        if abs(fv) > 1e-12 and math.isfinite(fv):
            y[i] = rat(fv)
    if not y:
        return False
    w: dict[int, Rat] = {}
    rhs_total = ZERO
    for i, yi in y.items():
        coeffs, _, rhs = md.rows[i]
        rhs_total += yi * rhs
        for j, a in coeffs.items():
            w[j] = w.get(j, ZERO) + yi * a
    lo_inf = hi_inf = False
    lo = hi = ZERO

    def add_interval(coeff: Rat, lower, upper):
        nonlocal lo, hi, lo_inf, hi_inf
        if coeff > 0:
            if lower is None:
                lo_inf = True
            else:
                lo += coeff * lower
            if upper is None:
                hi_inf = True
            else:
                hi += coeff * upper
        else:
            if upper is None:
                lo_inf = True
            else:
                lo += coeff * upper
            if lower is None:
                hi_inf = True
            else:
                hi += coeff * lower

    for j, wj in w.items():
        if wj != 0:
            add_interval(wj, node_lb[j], node_ub[j])
    for i, yi in y.items():
        sense = md.rows[i][1]
        if sense == LE:
            add_interval(yi, ZERO, None)
        elif sense == GE:
            add_interval(yi, None, ZERO)
    below = (not lo_inf) and rhs_total < lo
    above = (not hi_inf) and rhs_total > hi
    return below or above


def _complete_candidate(md: _MinData, int_vals: dict[int, int],
                        node_lb, node_ub):
    """Fix integers, solve the continuous remainder exactly.

    Returns (x, objective) in min form, or None when infeasible, or the
    string "unbounded"."""
    cont = [j for j in range(md.n) if j not in md.int_set]
    x = [ZERO] * md.n
    for j, v in int_vals.items():
        x[j] = rat(v)
    if not cont:
        for j in md.int_idx:
            lo, hi = node_lb[j], node_ub[j]
            if (lo is not None and x[j] < lo) or (hi is not None and x[j] > hi):
                return None
        for coeffs, sense, rhs in md.rows:
            val = sum((a * x[j] for j, a in coeffs.items()), ZERO)
            if ((sense == LE and val > rhs) or (sense == GE and val < rhs)
                    or (sense == EQ and val != rhs)):
                return None
        obj = sum((v * x[j] for j, v in md.c.items()), ZERO)
        return x, obj
    sub = MilpModel("completion")
    remap = {}
    for j in cont:
        remap[j] = sub.add_var(lb=node_lb[j], ub=node_ub[j])
    for coeffs, sense, rhs in md.rows:
        fixed = sum((a * x[j] for j, a in coeffs.items() if j in md.int_set),
                    ZERO)
        sub_coeffs = {remap[j]: a for j, a in coeffs.items()
                      if j not in md.int_set}
        if not sub_coeffs:
            val = fixed
            if ((sense == LE and val > rhs) or (sense == GE and val < rhs)
                    or (sense == EQ and val != rhs)):
                return None
            continue
        sub.add_constraint(sub_coeffs, sense, rhs - fixed)
    sub.set_objective({remap[j]: md.c[j] for j in cont if j in md.c}, "min")
    sol = lp_solve(sub)
    if sol.status == Status.INFEASIBLE:
        return None
    if sol.status == Status.UNBOUNDED:
        return "unbounded"
    for j in cont:
        x[j] = sol.x[remap[j]]
    obj = sum((v * x[j] for j, v in md.c.items()), ZERO)
    return x, obj


class _Node:
    __slots__ = ("parent", "var", "lo", "hi", "bound")

    def __init__(self, parent, var, lo, hi, bound):
        self.parent = parent
        self.var = var
        self.lo = lo
        self.hi = hi
        self.bound = bound

    def box(self, md: _MinData):
        lb = list(md.lb0)
        ub = list(md.ub0)
        seen = set()
        node = self
        while node is not None and node.var is not None:
            if node.var not in seen:
                seen.add(node.var)
                lb[node.var] = node.lo
                ub[node.var] = node.hi
            node = node.parent
        return lb, ub


def _model_with_bounds(model: MilpModel, lb, ub) -> MilpModel:
    out = MilpModel(model.name + "+node")
    for j, v in enumerate(model.variables):
        out.add_var(name=v.name, lb=lb[j], ub=ub[j], integer=False)
    for r in model.constraints:
        out.add_constraint(r.coeffs, r.sense, r.rhs)
    out.set_objective(model.objective, model.objective_sense)
    return out


def mip_solve(model: MilpModel, node_cap: int = 10 ** 6,
              initial_incumbent: Optional[Sequence] = None) -> MilpSolution:
    """Exact mixed 0-1/integer optimization; see module docstring."""
    model.check_integer_bounds()
    if not model.integer_indices():
        return lp_solve(model)
    md = _MinData(model)
    n = md.n
    lb0f = np.array([-np.inf if v is None else float(v) for v in md.lb0])
    ub0f = np.array([np.inf if v is None else float(v) for v in md.ub0])
    flp = FloatLP(n, md.float_rows(), md.float_c(), lb0f, ub0f)
    small = (model.nvars + model.nrows) <= _EXACT_FALLBACK_SIZE

    inc_x = None
    inc_val: Optional[Rat] = None
    if initial_incumbent is not None:
        cand = [rat(v) for v in initial_incumbent]
        if model.point_feasible(cand):
            inc_x = list(cand)
            inc_val = sum((v * cand[j] for j, v in md.c.items()), ZERO)

    counter = itertools.count()
    heap: list = []
    root = _Node(None, None, None, None, None)
    heapq.heappush(heap, (0, ZERO, next(counter), root))
    processed = 0
    branches = 0
    capped = False
    unbounded = False

    def node_key(bound: Optional[Rat]):
        if bound is None:
            return (0, ZERO)
        return (1, bound)

    def push(node: _Node):
        k = node_key(node.bound)
        heapq.heappush(heap, (k[0], k[1], next(counter), node))

    def snap_int(value: float, lo, hi) -> int:
        v = int(round(value))
        if lo is not None and v < lo:
            v = int(lo)
        if hi is not None and v > hi:
            v = int(hi)
        return v

    def branch_children(node, j, split_lo, lbj, ubj, bound):
        nonlocal branches
        branches += 1
        left = _Node(node, j, lbj, rat(split_lo), bound)
        right = _Node(node, j, rat(split_lo + 1), ubj, bound)
        push(left)
        push(right)

    while heap:
        if processed >= node_cap:
            capped = True
            break
        _, _, _, node = heapq.heappop(heap)
        if inc_val is not None and node.bound is not None and node.bound >= inc_val:
            continue
        processed += 1
        lb, ub = node.box(md)
        lbf = np.array([-np.inf if v is None else float(v) for v in lb])
        ubf = np.array([np.inf if v is None else float(v) for v in ub])
        flp.set_structural_bounds(lbf, ubf)
        st = flp.first_solve() if processed == 1 else flp.reoptimize()

        exact_x = None  # set when the exact fallback ran
        node_bound: Optional[Rat] = node.bound
        if st == "stalled" or st == "unbounded":
            if small:
                sol = lp_solve(_model_with_bounds(model, lb, ub))
                if sol.status == Status.INFEASIBLE:
                    continue
                if sol.status == Status.UNBOUNDED:
                    unbounded = True
                    break
                exact_x = sol.x
                node_bound = sol.objective if md.minimize else -sol.objective
                if inc_val is not None and node_bound >= inc_val:
                    continue
            else:
                node_bound = node.bound
        elif st == "infeasible":
            row = flp.farkas_row()
            if row is not None and farkas_certified(md, row, lb, ub):
                continue
            if small:
                sol = lp_solve(_model_with_bounds(model, lb, ub))
                if sol.status == Status.INFEASIBLE:
                    continue
                if sol.status == Status.UNBOUNDED:
                    unbounded = True
                    break
                exact_x = sol.x
                node_bound = sol.objective if md.minimize else -sol.objective
                if inc_val is not None and node_bound >= inc_val:
                    continue
        else:  # float optimal
            zf = flp.objective()
            certified = None
            if inc_val is not None and zf > float(inc_val) - _PRUNE_MARGIN * (
                    1 + abs(float(inc_val))):
                certified = safe_dual_bound(md, flp.row_duals(), lb, ub)
                if certified is not None and certified >= inc_val:
                    continue
            if certified is not None:
                node_bound = certified

        # pick branching variable
        if exact_x is not None:
            xs = exact_x
            frac = []
            for j in md.int_idx:
                q = rat(xs[j])
                if q.denominator != 1:
                    fl = q.numerator // q.denominator
                    frac.append((j, q - fl, fl))
            if frac:
                j, f, fl = max(frac, key=lambda it: (min(it[1], 1 - it[1]), -it[0]))
                branch_children(node, j, int(fl), lb[j], ub[j], node_bound)
                continue
            snapped = {j: int(rat(xs[j]).numerator) for j in md.int_idx}
        elif st in ("stalled", "unbounded", "infeasible"):
            # could not resolve by floats nor certify: branch blindly
            j = next((j for j in md.int_idx
                      if lb[j] is None or ub[j] is None or lb[j] != ub[j]), None)
            if j is None:
                snapped = {j2: int(lb[j2]) for j2 in md.int_idx}
                res = _complete_candidate(md, snapped, lb, ub)
                if res == "unbounded":
                    unbounded = True
                    break
                if res is not None:
                    x, objv = res
                    if inc_val is None or objv < inc_val:
                        inc_x, inc_val = x, objv
                continue
            mid = math.floor((float(lb[j]) + float(ub[j])) / 2)
            mid = snap_int(mid, lb[j], min(ub[j], ub[j] - 1) if ub[j] is not None else None)
            if ub[j] is not None and rat(mid) >= ub[j]:
                mid = int(ub[j]) - 1
            branch_children(node, j, mid, lb[j], ub[j], node_bound)
            continue
        else:
            xf = flp.solution()
            fracs = []
            for j in md.int_idx:
                v = xf[j]
                f = v - math.floor(v)
                dist = min(f, 1.0 - f)
                if dist > 1e-6:
                    fracs.append((dist, -j, j))
            if fracs:
                dist, _, j = max(fracs)
                split = math.floor(xf[j])
                if ub[j] is not None and rat(split) >= ub[j]:
                    split = int(ub[j]) - 1
                if lb[j] is not None and rat(split) < lb[j]:
                    split = int(lb[j])
                branch_children(node, j, split, lb[j], ub[j], node_bound)
                continue
            snapped = {j: snap_int(xf[j], lb[j], ub[j]) for j in md.int_idx}

        # all integers integral: exact candidate, then close the node
        res = _complete_candidate(md, snapped, lb, ub)
        if res == "unbounded":
            unbounded = True
            break
        if res is not None:
            x, objv = res
            if inc_val is None or objv < inc_val:
                inc_x, inc_val = x, objv
        bound_now = node_bound
        if bound_now is None and st not in ("stalled", "unbounded", "infeasible"):
            bound_now = safe_dual_bound(md, flp.row_duals(), lb, ub)
        if bound_now is not None and inc_val is not None and bound_now >= inc_val:
            continue
        if small and exact_x is None:
            sol = lp_solve(_model_with_bounds(model, lb, ub))
            if sol.status == Status.INFEASIBLE:
                continue
            if sol.status == Status.UNBOUNDED:
                unbounded = True
                break
            ex_bound = sol.objective if md.minimize else -sol.objective
            if inc_val is not None and ex_bound >= inc_val:
                continue
            xs = sol.x
            fr = [j for j in md.int_idx if rat(xs[j]).denominator != 1]
            if fr:
                j = fr[0]
                q = rat(xs[j])
                split = int(q.numerator // q.denominator)
                branch_children(node, j, split, lb[j], ub[j], ex_bound)
                continue
            # exact LP optimum is integral and below incumbent: adopt it
            snapped2 = {j: int(rat(xs[j]).numerator) for j in md.int_idx}
            res2 = _complete_candidate(md, snapped2, lb, ub)
            if res2 not in (None, "unbounded"):
                x2, objv2 = res2
                if inc_val is None or objv2 < inc_val:
                    inc_x, inc_val = x2, objv2
            continue
        # cannot certify: branch on some unfixed integer to make progress
        j = next((j for j in md.int_idx
                  if lb[j] is None or ub[j] is None or lb[j] != ub[j]), None)
        if j is None:
            continue
        split = snapped[j]
        if ub[j] is not None and rat(split) >= ub[j]:
            split = int(ub[j]) - 1
        if lb[j] is not None and rat(split) < lb[j]:
            split = int(lb[j])
        branch_children(node, j, split, lb[j], ub[j], node_bound)

    if unbounded:
        return MilpSolution(status=Status.UNBOUNDED, node_count=branches)
    open_bounds = [node.bound for _, _, _, node in heap]
    if capped:
        gb = None
        known = [b for b in open_bounds if b is not None]
        if inc_val is not None:
            known.append(inc_val)
        if known and len(known) == len(open_bounds) + (1 if inc_val is not None else 0):
            gb = min(known)
        return MilpSolution(
            status=Status.CAP_EXCEEDED,
            x=tuple(inc_x) if inc_x is not None else None,
            objective=md.orient(inc_val),
            bound=md.orient(gb),
            node_count=branches,
            message=f"node cap {node_cap} hit with {len(heap)} open nodes")
    if inc_x is None:
        return MilpSolution(status=Status.INFEASIBLE, node_count=branches)
    return MilpSolution(status=Status.OPTIMAL, x=tuple(inc_x),
                        objective=md.orient(inc_val), bound=md.orient(inc_val),
                        node_count=branches)
