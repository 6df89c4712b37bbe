"""Exact separation of multi-cover cuts via integer programming.

Two formulations:

- a two-cover model restricted to the discrepancy shapes {{1},{2..t}}
  and {{1,t+1},{2..t}} (optionally also plain cover inequalities when
  the two-element lower bound on the second block is dropped);
- a generic per-skeleton model.

The two-cover model is kept in two equivalent forms. The display form
carries exactly the documented constraint list (it is what the LP-file
audit export shows, and small instances cross-check the two forms for
equal optima). The compiled form replaces the quadratically many
pairwise big-M rows by prefix/suffix running-max variables, which leaves
optimal values and the meaning of all shared variables unchanged while
keeping the branch-and-bound tableau small.

Both forms add the explicit unit lower bounds alpha_i >= u_i and
beta_i >= v_i on selected items. The pairwise rows imply them except for
the largest index, where nothing forces the generator's unit
initialization; without the repair the optimizer can park a zero
coefficient on a selected item and return an inequality outside the
family.

A returned cut is never trusted: the cover pair is rebuilt, its shape
and cover status re-checked, the right-hand side recomputed, violation
re-verified, and the coefficient cap (twice the item count minus one,
which the closed forms bound) asserted, all in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ._rat import Rat, ZERO, rat
from .core import Tomks, index_set, is_cover
from .cuts import CutInequality, MINIMAL, mci, satisfies_generator_bounds
from .errors import CapExceeded, InvalidSkeleton, ReconstructionFailed
from .milp import EQ, GE, LE, MilpModel, Status, mip_solve, write_lp
from .multicover import (MultiCover, Skeleton, _assemble, make_skeleton,
                         verify_multicover)

DEFAULT_NODE_CAP = 10 ** 6


def big_m_for(n: int) -> int:
    """Safe big-M: closed forms bound optimal coefficients by 2n-1."""
    return 2 * n + 1


@dataclass
class Sep2Model:
    """Two-cover separation MIP (display form) plus variable handles."""

    model: MilpModel
    n: int
    m: int
    M: int
    include_ci: bool
    point: tuple
    u: list[int] = field(default_factory=list)
    v: list[int] = field(default_factory=list)
    w: list[int] = field(default_factory=list)
    w1: list[int] = field(default_factory=list)
    w2: list[int] = field(default_factory=list)
    lam: list[int] = field(default_factory=list)
    mu: list[int] = field(default_factory=list)
    alpha: list[int] = field(default_factory=list)
    beta: list[int] = field(default_factory=list)
    gamma: list[int] = field(default_factory=list)
    t: int = -1

    def export_lp(self) -> str:
        return write_lp(self.model)


def _sep2_vars(model: MilpModel, K: Tomks, M: int):
    n = K.n
    h = Sep2Model(model=model, n=n, m=K.m, M=M, include_ci=False, point=())
    h.u = [model.add_binary(f"u{i}") for i in range(1, n + 1)]
    h.v = [model.add_binary(f"v{i}") for i in range(1, n + 1)]
    h.w = [model.add_binary(f"w{i}") for i in range(1, n + 1)]
    h.w1 = [model.add_binary(f"w1_{i}") for i in range(1, n + 1)]
    h.w2 = [model.add_binary(f"w2_{i}") for i in range(1, n + 1)]
    h.lam = [model.add_binary(f"lam{j}") for j in range(1, K.m + 1)]
    h.mu = [model.add_binary(f"mu{j}") for j in range(1, K.m + 1)]
    h.alpha = [model.add_var(f"alpha{i}", lb=0, ub=M, integer=True)
               for i in range(1, n + 1)]
    h.beta = [model.add_var(f"beta{i}", lb=0, ub=M, integer=True)
              for i in range(1, n + 1)]
    h.gamma = [model.add_var(f"gamma{i}", lb=0, ub=M, integer=True)
               for i in range(1, n + 1)]
    return h


def _sep2_shared_rows(h: Sep2Model, K: Tomks, include_ci: bool):
    """Rows common to the display and compiled forms."""
    model, n, M = h.model, h.n, h.M
    model.add_constraint({**{h.alpha[i]: 1 for i in range(n)}, h.t: -1},
                         LE, 0, name="t_alpha")
    model.add_constraint({**{h.beta[i]: 1 for i in range(n)}, h.t: -1},
                         LE, 0, name="t_beta")
    for i in range(n):
        model.add_constraint({h.u[i]: 1, h.v[i]: 1, h.w[i]: 1}, LE, 1,
                             name=f"part{i + 1}")
    for i in range(n):
        model.add_constraint({h.w1[i]: 1, h.w2[i]: 1, h.w[i]: -1}, EQ, 0,
                             name=f"wsplit{i + 1}")
        model.add_constraint({h.alpha[i]: 1, h.u[i]: -M}, LE, 0,
                             name=f"acap{i + 1}")
        model.add_constraint({h.beta[i]: 1, h.v[i]: -M}, LE, 0,
                             name=f"bcap{i + 1}")
        model.add_constraint({h.gamma[i]: 1, h.w[i]: -M}, LE, 0,
                             name=f"gcap{i + 1}")
        model.add_constraint({h.alpha[i]: 1, h.u[i]: -1}, GE, 0,
                             name=f"aunit{i + 1}")
        model.add_constraint({h.beta[i]: 1, h.v[i]: -1}, GE, 0,
                             name=f"bunit{i + 1}")
    nM = h.n * M
    for i in range(n):
        row = {h.gamma[i]: 1, h.w1[i]: -(1 + nM)}
        for j in range(i + 1, n):
            row[h.alpha[j]] = row.get(h.alpha[j], 0) - 1
        model.add_constraint(row, GE, -nM, name=f"gsum1_{i + 1}")
        row = {h.gamma[i]: 1, h.w2[i]: -(1 + nM)}
        for j in range(i + 1, n):
            row[h.beta[j]] = row.get(h.beta[j], 0) - 1
        model.add_constraint(row, GE, -nM, name=f"gsum2_{i + 1}")
    for hh in range(K.m):
        row = {}
        for i in range(n):
            a = K.rows[hh][i]
            if a:
                row[h.u[i]] = a
                row[h.w[i]] = a
        row[h.lam[hh]] = -(K.b[hh] + 1)
        model.add_constraint(row, GE, 0, name=f"cover1_{hh + 1}")
        row = {}
        for i in range(n):
            a = K.rows[hh][i]
            if a:
                row[h.v[i]] = a
                row[h.w[i]] = a
        row[h.mu[hh]] = -(K.b[hh] + 1)
        model.add_constraint(row, GE, 0, name=f"cover2_{hh + 1}")
    model.add_constraint({j: 1 for j in h.lam}, GE, 1, name="some_lam")
    model.add_constraint({j: 1 for j in h.mu}, GE, 1, name="some_mu")
    if not include_ci:
        model.add_constraint({j: 1 for j in h.v}, GE, 2, name="v_two")
    for i in range(n):
        row = {h.u[j]: 1 for j in range(i)}
        row[h.v[i]] = -1
        model.add_constraint(row, GE, 0, name=f"u_before_v{i + 1}")
        row = {h.u[j]: 1 for j in range(i + 1)}
        row[h.v[i]] = row.get(h.v[i], 0) + 1
        model.add_constraint(row, LE, 2, name=f"shape{i + 1}")


def _sep2_objective(h: Sep2Model, point: Sequence):
    obj = {h.t: rat(1)}
    for i in range(h.n):
        xi = rat(point[i])
        obj[h.gamma[i]] = 1 - xi
        if xi != 0:
            obj[h.alpha[i]] = -xi
            obj[h.beta[i]] = -xi
    h.model.set_objective(obj, "min")
    h.point = tuple(rat(p) for p in point)


def build_sep2(K: Tomks, point: Sequence, include_ci: bool = True,
               M: Optional[int] = None) -> Sep2Model:
    """The documented two-cover separation MIP (display form)."""
    M = M or big_m_for(K.n)
    model = MilpModel("sep2")
    h = _sep2_vars(model, K, M)
    h.include_ci = include_ci
    h.t = model.add_var("t", lb=0, ub=None)
    n = K.n
    for i in range(n):
        for j in range(i + 1, n):
            model.add_constraint(
                {h.alpha[i]: 1, h.beta[j]: -1, h.u[i]: -(1 + M)}, GE, -M,
                name=f"step_a{i + 1}_{j + 1}")
            model.add_constraint(
                {h.beta[i]: 1, h.alpha[j]: -1, h.v[i]: -(1 + M)}, GE, -M,
                name=f"step_b{i + 1}_{j + 1}")
    for i in range(n):
        for j in range(i):
            model.add_constraint(
                {h.gamma[i]: 1, h.alpha[j]: -1, h.w1[i]: -M}, GE, -M,
                name=f"gmax1_{i + 1}_{j + 1}")
            model.add_constraint(
                {h.gamma[i]: 1, h.beta[j]: -1, h.w2[i]: -M}, GE, -M,
                name=f"gmax2_{i + 1}_{j + 1}")
    _sep2_shared_rows(h, K, include_ci)
    _sep2_objective(h, point)
    return h


def build_sep2_fast(K: Tomks, point: Sequence, include_ci: bool = True,
                    M: Optional[int] = None) -> Sep2Model:
    """Compiled twin: pairwise rows replaced by running-max chains."""
    M = M or big_m_for(K.n)
    model = MilpModel("sep2-fast")
    h = _sep2_vars(model, K, M)
    h.include_ci = include_ci
    h.t = model.add_var("t", lb=0, ub=K.n * M)
    n = K.n
    # SB_i >= max(beta_{i+1..n}, 0), used by alpha_i's step row
    SB = [model.add_var(f"SB{i}", lb=0, ub=M) for i in range(1, n)]
    SA = [model.add_var(f"SA{i}", lb=0, ub=M) for i in range(1, n)]
    for i in range(n - 1):
        model.add_constraint({SB[i]: 1, h.beta[i + 1]: -1}, GE, 0)
        model.add_constraint({SA[i]: 1, h.alpha[i + 1]: -1}, GE, 0)
        if i + 1 < n - 1:
            model.add_constraint({SB[i]: 1, SB[i + 1]: -1}, GE, 0)
            model.add_constraint({SA[i]: 1, SA[i + 1]: -1}, GE, 0)
    for i in range(n - 1):
        model.add_constraint({h.alpha[i]: 1, SB[i]: -1, h.u[i]: -(1 + M)},
                             GE, -M, name=f"step_a{i + 1}")
        model.add_constraint({h.beta[i]: 1, SA[i]: -1, h.v[i]: -(1 + M)},
                             GE, -M, name=f"step_b{i + 1}")
    # PA_i >= max(alpha_{1..i-1}, 0) for gamma's prefix-max rows
    PA = [model.add_var(f"PA{i}", lb=0, ub=M) for i in range(2, n + 1)]
    PB = [model.add_var(f"PB{i}", lb=0, ub=M) for i in range(2, n + 1)]
    for k in range(n - 1):
        model.add_constraint({PA[k]: 1, h.alpha[k]: -1}, GE, 0)
        model.add_constraint({PB[k]: 1, h.beta[k]: -1}, GE, 0)
        if k:
            model.add_constraint({PA[k]: 1, PA[k - 1]: -1}, GE, 0)
            model.add_constraint({PB[k]: 1, PB[k - 1]: -1}, GE, 0)
    for i in range(1, n):
        model.add_constraint({h.gamma[i]: 1, PA[i - 1]: -1, h.w1[i]: -M},
                             GE, -M, name=f"gmax1_{i + 1}")
        model.add_constraint({h.gamma[i]: 1, PB[i - 1]: -1, h.w2[i]: -M},
                             GE, -M, name=f"gmax2_{i + 1}")
    _sep2_shared_rows(h, K, include_ci)
    _sep2_objective(h, point)
    return h


def _supp(sol, idxs) -> tuple[int, ...]:
    return tuple(i + 1 for i, j in enumerate(idxs) if rat(sol.x[j]) == 1)


def _two_cover_shape_ok(d1: tuple, d2: tuple) -> bool:
    """Shapes {{1},{2..t}} or {{1,t+1},{2..t}} (t >= 1 block)."""
    if not d1 or not d2:
        return False
    if len(d1) == 1:
        return d1[0] < d2[0]
    if len(d1) == 2:
        return d1[0] < d2[0] and d1[1] > d2[-1]
    return False


def _reconstruct(K: Tomks, h: Sep2Model, sol,
                 strict_multicover_cap: int = 16):
    n = h.n
    su = _supp(sol, h.u)
    sv = _supp(sol, h.v)
    sw = _supp(sol, h.w)
    alpha = [int(rat(sol.x[h.alpha[i]])) for i in range(n)]
    beta = [int(rat(sol.x[h.beta[i]])) for i in range(n)]
    gamma = [int(rat(sol.x[h.gamma[i]])) for i in range(n)]
    tval = rat(sol.x[h.t])
    coeffs = tuple(alpha[i] + beta[i] + gamma[i] for i in range(n))
    rhs_rat = tval + sum(gamma) - 1
    if rat(rhs_rat).denominator != 1:
        raise ReconstructionFailed("non-integer right-hand side")
    rhs = int(rhs_rat)
    c1 = tuple(sorted(set(su) | set(sw)))
    c2 = tuple(sorted(set(sv) | set(sw)))
    if not c1 or not is_cover(K, c1) or (c2 and not is_cover(K, c2)):
        raise ReconstructionFailed("rebuilt supports are not covers")
    if tval != max(sum(alpha), sum(beta)):
        raise ReconstructionFailed("t is not the larger coefficient sum")
    cap = 2 * n - 1
    if any(c > cap for c in coeffs):
        raise ReconstructionFailed(
            f"a coefficient exceeds the big-M safety cap {cap}")
    if c1 == c2 or not sv:
        # plain or weighted single-cover inequality
        family_cover = c1
        mc = verify_multicover(K, [family_cover])
        expect = sum(coeffs[i - 1] for i in family_cover) - 1
        if rhs != expect:
            raise ReconstructionFailed("rhs does not match the cover sum")
        kind = "CI" if all(coeffs[i - 1] == 1 for i in family_cover) else "MCI"
        cut = CutInequality(coeffs=coeffs, rhs=rhs, kind=kind,
                            provenance={"covers": [list(family_cover)],
                                        "separated": True})
        return mc, cut
    d1 = tuple(i for i in c1 if i not in set(c2))
    d2 = tuple(i for i in c2 if i not in set(c1))
    if not _two_cover_shape_ok(d1, d2):
        raise ReconstructionFailed(
            f"discrepancy pair {d1}/{d2} is outside the two target shapes")
    if len(d1) + len(d2) <= strict_multicover_cap:
        mc = verify_multicover(K, [c1, c2])
    else:
        mc = _assemble(K.n, [c1, c2])
    expect = max(sum(coeffs[i - 1] for i in c) for c in (c1, c2)) - 1
    if rhs != expect:
        raise ReconstructionFailed("rhs does not match the best cover sum")
    kind = "MCI"
    if satisfies_generator_bounds(mc, CutInequality(coeffs=coeffs, rhs=rhs,
                                                    kind="MCI")):
        minimal = mci(mc, MINIMAL)
        if minimal.coeffs == coeffs and minimal.rhs == rhs:
            kind = "SMCI"
    cut = CutInequality(coeffs=coeffs, rhs=rhs, kind=kind,
                        provenance={"covers": [list(c1), list(c2)],
                                    "separated": True})
    return mc, cut


def _violation_value(cut: CutInequality, point) -> Rat:
    return sum((rat(c) * rat(p) for c, p in zip(cut.coeffs, point)), ZERO) \
        - cut.rhs


def separate_mci(K: Tomks, point: Sequence, include_ci: bool = True,
                 node_cap: int = DEFAULT_NODE_CAP
                 ) -> Optional[tuple[MultiCover, CutInequality]]:
    """Exact two-cover separation at an exact rational point.

    Returns a verified (family, cut) with the cut strictly violated at
    the point, or None when the model optimum is certified >= 1. Raises
    CapExceeded when the node cap leaves the verdict open. Ties among
    optimal cuts are broken toward the smallest coefficient total, then
    toward encoding plain covers with the intersection variables.
    """
    h = build_sep2_fast(K, point, include_ci=include_ci)
    sol = mip_solve(h.model, node_cap=node_cap)
    if sol.status == Status.CAP_EXCEEDED:
        if sol.objective is not None and sol.objective < 1:
            pass  # a violated cut was found; use it even if not optimal
        elif sol.bound is not None and sol.bound >= 1:
            return None
        else:
            raise CapExceeded(
                f"separation undecided after node cap {node_cap}")
    elif sol.status != Status.OPTIMAL:
        raise ReconstructionFailed(f"separation solve ended {sol.status}")
    if sol.objective >= 1:
        return None
    # tie-break stage: among solutions at least as violated, prefer the
    # smallest coefficient total, then the fewest selector bits
    pin = dict(h.model.objective)
    h2 = build_sep2_fast(K, point, include_ci=include_ci)
    h2.model.add_constraint(pin, LE, sol.objective, name="pin_primary")
    # lexicographic: coefficient total, then selector bits, then t itself
    # (so t settles at the larger coefficient sum and the rhs is pinned)
    w_t = K.n * h2.M + 1
    w_sel = w_t
    w_coef = w_sel * (2 * K.n + 1)
    sec = {h2.t: rat(1)}
    for i in range(K.n):
        sec[h2.alpha[i]] = w_coef
        sec[h2.beta[i]] = w_coef
        sec[h2.gamma[i]] = w_coef
        sec[h2.u[i]] = w_sel
        sec[h2.v[i]] = w_sel
    h2.model.set_objective(sec, "min")
    hint = list(sol.x) if sol.x is not None else None
    sol2 = mip_solve(h2.model, node_cap=node_cap, initial_incumbent=hint)
    use = sol2 if sol2.x is not None else sol
    target = h2 if sol2.x is not None else h
    mc, cut = _reconstruct(K, target, use)
    viol = _violation_value(cut, target.point)
    if viol <= 0:
        raise ReconstructionFailed("returned cut is not violated")
    return mc, cut


# -- generic skeleton model --------------------------------------------------

@dataclass
class SepSkeletonModel:
    model: MilpModel
    n: int
    m: int
    M: int
    skeleton: Skeleton
    point: tuple
    u: dict = field(default_factory=dict)      # (s, i) -> var
    alpha: dict = field(default_factory=dict)  # (s, i) -> var
    w: list[int] = field(default_factory=list)
    wh: dict = field(default_factory=dict)     # (h, i) -> var
    gamma: list[int] = field(default_factory=list)
    lam: dict = field(default_factory=dict)    # (h, j) -> var
    t: int = -1

    def export_lp(self) -> str:
        return write_lp(self.model)


def build_sep_skeleton(K: Tomks, skeleton, point: Sequence,
                       M: Optional[int] = None) -> SepSkeletonModel:
    """The generic per-skeleton separation MIP, exactly as documented."""
    if not isinstance(skeleton, Skeleton):
        skeleton = make_skeleton(skeleton)
    else:
        make_skeleton(skeleton.sets)  # re-validate, raises InvalidSkeleton
    n = K.n
    M = M or big_m_for(n)
    model = MilpModel("sep-skeleton")
    sm = SepSkeletonModel(model=model, n=n, m=K.m, M=M, skeleton=skeleton,
                          point=tuple(rat(p) for p in point))
    S = list(range(1, skeleton.u + 1))
    k = len(skeleton.sets)
    for s in S:
        for i in range(1, n + 1):
            sm.u[s, i] = model.add_binary(f"u{s}_{i}")
            sm.alpha[s, i] = model.add_var(f"al{s}_{i}", lb=0, ub=M,
                                           integer=True)
    sm.w = [model.add_binary(f"w{i}") for i in range(1, n + 1)]
    sm.gamma = [model.add_var(f"g{i}", lb=0, ub=M, integer=True)
                for i in range(1, n + 1)]
    for hh in range(1, k + 1):
        for i in range(1, n + 1):
            sm.wh[hh, i] = model.add_binary(f"wh{hh}_{i}")
        for j in range(1, K.m + 1):
            sm.lam[hh, j] = model.add_binary(f"lm{hh}_{j}")
    sm.t = model.add_var("t", lb=0, ub=None)
    # t >= per-cover coefficient sums
    for hh, sh in enumerate(skeleton.sets, start=1):
        row = {sm.t: -1}
        for s in sh:
            for i in range(1, n + 1):
                row[sm.alpha[s, i]] = 1
        model.add_constraint(row, LE, 0, name=f"t_cover{hh}")
    for i in range(1, n + 1):
        row = {sm.u[s, i]: 1 for s in S}
        row[sm.w[i - 1]] = 1
        model.add_constraint(row, LE, 1, name=f"part{i}")
        for s in S:
            model.add_constraint({sm.alpha[s, i]: 1, sm.u[s, i]: -M}, LE, 0)
            model.add_constraint({sm.alpha[s, i]: 1, sm.u[s, i]: -1}, GE, 0)
        model.add_constraint({sm.gamma[i - 1]: 1, sm.w[i - 1]: -M}, LE, 0)
    for s in S:
        model.add_constraint({sm.u[s, i]: 1 for i in range(1, n + 1)}, EQ, 1,
                             name=f"assign{s}")
    # descending-pass rows through the separating positions
    for s in S:
        pis = skeleton.pi(s)
        for sp in pis:
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    model.add_constraint(
                        {sm.alpha[s, i]: 1, sm.alpha[sp, j]: -1,
                         sm.u[s, i]: -(1 + M)}, GE, -M)
    for i in range(1, n + 1):
        row = {sm.wh[hh, i]: 1 for hh in range(1, k + 1)}
        row[sm.w[i - 1]] = -1
        model.add_constraint(row, EQ, 0, name=f"wsplit{i}")
    for hh, sh in enumerate(skeleton.sets, start=1):
        comp = [s for s in S if s not in set(sh)]
        big = n * len(comp) * M
        for i in range(1, n + 1):
            row = {sm.gamma[i - 1]: 1, sm.wh[hh, i]: -(1 + big)}
            for s in comp:
                for j in range(i + 1, n + 1):
                    row[sm.alpha[s, j]] = row.get(sm.alpha[s, j], 0) - 1
            model.add_constraint(row, GE, -big, name=f"gsum{hh}_{i}")
            if comp:
                cap = len(comp) * M
                for j in range(1, i):
                    row = {sm.gamma[i - 1]: 1, sm.wh[hh, i]: -cap}
                    for s in comp:
                        row[sm.alpha[s, j]] = row.get(sm.alpha[s, j], 0) - 1
                    model.add_constraint(row, GE, -cap)
    for hh, sh in enumerate(skeleton.sets, start=1):
        for j in range(1, K.m + 1):
            row = {}
            for i in range(1, n + 1):
                a = K.weight(j, i)
                if a:
                    for s in sh:
                        row[sm.u[s, i]] = a
                    row[sm.w[i - 1]] = a
            row[sm.lam[hh, j]] = -(K.b[j - 1] + 1)
            model.add_constraint(row, GE, 0, name=f"cover{hh}_{j}")
        model.add_constraint({sm.lam[hh, j]: 1 for j in range(1, K.m + 1)},
                             GE, 1, name=f"some_lam{hh}")
    for s in S[:-1]:
        for i in range(1, n + 1):
            row = {sm.u[s, i]: 1}
            for j in range(1, i):
                row[sm.u[s + 1, j]] = 1
            model.add_constraint(row, LE, 1, name=f"order{s}_{i}")
    obj = {sm.t: rat(1)}
    for i in range(1, n + 1):
        xi = rat(point[i - 1])
        obj[sm.gamma[i - 1]] = 1 - xi
        if xi != 0:
            for s in S:
                obj[sm.alpha[s, i]] = -xi
    model.set_objective(obj, "min")
    return sm


def separate_skeleton(K: Tomks, skeleton, point: Sequence,
                      node_cap: int = DEFAULT_NODE_CAP
                      ) -> Optional[tuple[MultiCover, CutInequality]]:
    """Solve the per-skeleton model; verify and return any separating cut."""
    sm = build_sep_skeleton(K, skeleton, point)
    sol = mip_solve(sm.model, node_cap=node_cap)
    if sol.status == Status.CAP_EXCEEDED:
        if sol.objective is not None and sol.objective < 1:
            pass
        elif sol.bound is not None and sol.bound >= 1:
            return None
        else:
            raise CapExceeded("skeleton separation undecided under node cap")
    elif sol.status != Status.OPTIMAL:
        raise ReconstructionFailed(f"skeleton solve ended {sol.status}")
    if sol.objective >= 1:
        return None
    S = list(range(1, sm.skeleton.u + 1))
    pos = {}
    for s in S:
        hits = [i for i in range(1, K.n + 1) if rat(sol.x[sm.u[s, i]]) == 1]
        if len(hits) != 1:
            raise ReconstructionFailed("a position maps to several items")
        pos[s] = hits[0]
    c0 = tuple(i + 1 for i in range(K.n) if rat(sol.x[sm.w[i]]) == 1)
    covers = []
    for sh in sm.skeleton.sets:
        covers.append(tuple(sorted(set(c0) | {pos[s] for s in sh})))
    mc = verify_multicover(K, covers)
    n = K.n
    coeffs = []
    for i in range(1, n + 1):
        tot = int(rat(sol.x[sm.gamma[i - 1]]))
        for s in S:
            tot += int(rat(sol.x[sm.alpha[s, i]]))
        coeffs.append(tot)
    rhs = rat(sol.x[sm.t]) + sum(int(rat(sol.x[g])) for g in sm.gamma) - 1
    if rat(rhs).denominator != 1:
        raise ReconstructionFailed("non-integer right-hand side")
    cut = CutInequality(coeffs=tuple(coeffs), rhs=int(rhs), kind="MCI",
                        provenance={"covers": [list(c) for c in covers],
                                    "separated": True, "skeleton":
                                        [list(s) for s in sm.skeleton.sets]})
    if _violation_value(cut, sm.point) <= 0:
        raise ReconstructionFailed("returned cut is not violated")
    return mc, cut
