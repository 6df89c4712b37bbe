"""Brute-force polyhedral ground truth.

Everything here is an oracle: full enumeration of feasible points,
validity and facet checks by exact rank computation, hull equality by
exact vertex enumeration, the sufficient facet conditions for minimal
multi-cover cuts, clutter minor detection, and the constructive family
of instances whose hull needs exactly one multi-cover cut.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from ._rat import rat
from .core import IndexSet, Tomks, index_set, is_cover, is_minimal_cover, \
    validate_instance
from .covers import enumerate_minimal_covers
from .cuts import CutInequality, MINIMAL, mci
from .errors import CapExceeded, ConstructionFailed, NotValid
from .milp import enumerate_vertices
from .multicover import MultiCover

_ENUM_LIMIT = 24


@lru_cache(maxsize=48)
def _feasible_cached(K: Tomks) -> tuple[tuple[int, ...], ...]:
    sums = [0] * K.m
    chosen = [0] * K.n
    out: list[tuple[int, ...]] = []

    def walk(i: int):
        if i > K.n:
            out.append(tuple(chosen))
            return
        chosen[i - 1] = 0
        walk(i + 1)
        ok = True
        for h in range(K.m):
            sums[h] += K.weight(h + 1, i)
            if sums[h] > K.b[h]:
                ok = False
        if ok:
            chosen[i - 1] = 1
            walk(i + 1)
            chosen[i - 1] = 0
        for h in range(K.m):
            sums[h] -= K.weight(h + 1, i)

    walk(1)
    return tuple(out)


def enumerate_feasible(K: Tomks) -> list[tuple[int, ...]]:
    """All binary points satisfying every row (n <= 24)."""
    if K.n > _ENUM_LIMIT:
        raise CapExceeded(f"n={K.n} exceeds enumeration limit {_ENUM_LIMIT}")
    return list(_feasible_cached(K))


@lru_cache(maxsize=48)
def _feasible_matrix(K: Tomks) -> np.ndarray:
    return np.array(_feasible_cached(K), dtype=np.int8).reshape(-1, K.n)


def is_valid_inequality(K: Tomks, cut: CutInequality) -> bool:
    """True iff the cut holds at every feasible binary point."""
    if K.n > _ENUM_LIMIT:
        raise CapExceeded(f"n={K.n} exceeds enumeration limit {_ENUM_LIMIT}")
    F = _feasible_matrix(K)
    if F.size == 0:
        return True
    vals = F @ np.array(cut.coeffs, dtype=np.int64)
    return int(vals.max(initial=0)) <= cut.rhs


def _rank_int(rows: list[list[int]]) -> int:
    """Exact rank of an integer matrix (fraction-free elimination)."""
    mat = [list(r) for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    row = 0
    for col in range(cols):
        piv = next((r for r in range(row, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        pr = mat[row]
        for r in range(row + 1, len(mat)):
            if mat[r][col] != 0:
                f1, f2 = pr[col], mat[r][col]
                mat[r] = [f1 * a - f2 * b for a, b in zip(mat[r], pr)]
        rank += 1
        row += 1
        if row == len(mat):
            break
    return rank


def is_facet(K: Tomks, cut: CutInequality) -> bool:
    """Exact facet test: tight feasible points must have affine dimension
    n - 1."""
    if not is_valid_inequality(K, cut):
        raise NotValid("cut is not valid for the instance")
    F = _feasible_matrix(K)
    vals = F @ np.array(cut.coeffs, dtype=np.int64)
    tight = F[vals == cut.rhs]
    if tight.shape[0] == 0:
        return False
    base = tight[0]
    diffs = [list(map(int, row - base)) for row in tight[1:]]
    if not diffs:
        return K.n == 1
    return _rank_int(diffs) == K.n - 1


def hull_equals(K: Tomks, cuts: Sequence[CutInequality],
                basis_cap: int = 500000) -> bool:
    """Whether the box intersected with the cuts equals the integer hull.

    All cuts must be valid (checked; NotValid otherwise); then equality
    holds iff every vertex of the cut system is integral and feasible.
    """
    if K.n > 12:
        raise CapExceeded("hull check limited to n <= 12")
    for cut in cuts:
        if not is_valid_inequality(K, cut):
            raise NotValid(f"cut {cut.coeffs} <= {cut.rhs} is not valid")
    n = K.n
    rows: list[tuple[list[int], int]] = []
    for i in range(n):
        e = [0] * n
        e[i] = -1
        rows.append((list(e), 0))
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((list(e), 1))
    for cut in cuts:
        rows.append((list(cut.coeffs), cut.rhs))
    verts = enumerate_vertices(n, rows, start_basis=range(n),
                               basis_cap=basis_cap)
    for v in verts:
        point = []
        for coord in v:
            q = rat(coord)
            if q.denominator != 1:
                return False
            point.append(int(q.numerator))
        for h in range(1, K.m + 1):
            if sum(K.weight(h, i + 1) * point[i] for i in range(n)) > K.b[h - 1]:
                return False
    return True


# -- sufficient facet conditions for the minimal multi-cover cut ----------

@dataclass
class ConditionReport:
    """Literal evaluation of the five sufficient facet conditions, with
    per-condition witnesses (chosen cover indices and swap elements)."""

    passed: dict[int, bool] = field(default_factory=dict)
    witnesses: dict[int, object] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.passed.get(i, False) for i in range(1, 6))

    def summary(self) -> str:
        return " ".join(
            f"cond{i}={'PASS' if self.passed.get(i) else 'FAIL'}"
            for i in range(1, 6))


def smci_facet_conditions(K: Tomks, mc: MultiCover,
                          smci: CutInequality) -> ConditionReport:
    """Check the five sufficient conditions under which the minimal cut
    of a multi-cover defines a facet.

    1. empty family intersection; 2. every member minimal; 3. for each
    coefficient level t >= 2 a member cover through the smallest level-t
    index and the largest level-1 index tolerates swapping its largest
    level-t index for some level-(t-1) outsider without staying a cover;
    4. a member through the smallest level-1 index tolerates swapping in
    any item outside the union; 5. the chosen members are all tight.
    """
    if smci.coeffs != mci(mc, MINIMAL).coeffs or smci.rhs != mci(mc, MINIMAL).rhs:
        raise ValueError("cut is not the minimal cut of this multi-cover")
    rep = ConditionReport()
    rep.passed[1] = len(mc.c0) == 0
    rep.witnesses[1] = list(mc.c0)
    minimal_flags = [is_minimal_cover(K, c) for c in mc.covers]
    rep.passed[2] = all(minimal_flags)
    rep.witnesses[2] = [list(mc.covers[h]) for h, ok in
                        enumerate(minimal_flags) if not ok]
    c0 = set(mc.c0)
    free = [i for i in mc.union if i not in c0]
    amax = max((smci.coeff(i) for i in free), default=0)
    levels: dict[int, list[int]] = {t: [] for t in range(1, amax + 1)}
    for i in free:
        levels.setdefault(smci.coeff(i), []).append(i)
    gap = [t for t in range(1, amax + 1) if not levels[t]]
    beta_plus = smci.rhs + 1

    cond3_ok = not gap and amax >= 1
    cond3_w = {}
    cond5_ok3 = True
    if gap:
        cond3_ok = False
        cond3_w["empty_levels"] = gap
    else:
        for t in range(2, amax + 1):
            i_t1 = levels[t][0]
            i_tn = levels[t][-1]
            i_1n = levels[1][-1]
            cands = []
            for h, ch in enumerate(mc.covers):
                cset = set(ch)
                if i_t1 not in cset or i_1n not in cset:
                    continue
                for w in levels[t - 1]:
                    if w in cset:
                        continue
                    swapped = (cset | {w}) - {i_tn}
                    if not is_cover(K, swapped):
                        cands.append((h, w))
            if not cands:
                cond3_ok = False
                cond3_w[t] = None
            else:
                cond3_w[t] = cands[0]
                if not any(sum(smci.coeff(i) for i in mc.covers[h]) == beta_plus
                           for h, _ in cands):
                    cond5_ok3 = False
    rep.passed[3] = cond3_ok
    rep.witnesses[3] = cond3_w

    cond4_cands = []
    if not gap and levels.get(1):
        i_11 = levels[1][0]
        outside = [i for i in range(1, K.n + 1) if i not in set(mc.union)]
        for h, ch in enumerate(mc.covers):
            cset = set(ch)
            if i_11 not in cset:
                continue
            if all(not is_cover(K, (cset | {ip}) - {i_11}) for ip in outside):
                cond4_cands.append(h)
    rep.passed[4] = bool(cond4_cands)
    rep.witnesses[4] = cond4_cands

    cond5_ok = cond5_ok3 and rep.passed[3] and rep.passed[4]
    if cond5_ok:
        if not any(sum(smci.coeff(i) for i in mc.covers[h]) == beta_plus
                   for h in cond4_cands):
            cond5_ok = False
    rep.passed[5] = cond5_ok
    rep.witnesses[5] = beta_plus
    return rep


# -- clutters and their minors ---------------------------------------------

@dataclass(frozen=True)
class Clutter:
    """Inclusion-wise incomparable family over ground set 1..ground."""

    ground: int
    sets: tuple[IndexSet, ...]

    def __post_init__(self):
        fs = [set(s) for s in self.sets]
        for a, b in itertools.combinations(range(len(fs)), 2):
            if fs[a] <= fs[b] or fs[b] <= fs[a]:
                raise ValueError("family is not a clutter")

    def to_json(self) -> dict:
        return {"ground": self.ground, "sets": [list(s) for s in self.sets]}


def minimal_cover_clutter(K: Tomks, cap: int = 25) -> Clutter:
    covers = enumerate_minimal_covers(K, cap=cap)
    return Clutter(ground=K.n, sets=tuple(covers))


def _minimalize(sets: list[frozenset]) -> list[frozenset]:
    uniq = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    out: list[frozenset] = []
    for s in uniq:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def _match_apex_shape(sets: list[frozenset]) -> Optional[int]:
    """q when the family is {B} + {{z,b} : b in B} with |B| = q-1, else
    None."""
    q = len(sets)
    if q < 3:
        return None
    for bidx, B in enumerate(sets):
        if len(B) != q - 1:
            continue
        rest = [s for i, s in enumerate(sets) if i != bidx]
        if any(len(s) != 2 for s in rest):
            continue
        apex = set.intersection(*map(set, rest))
        if len(apex) != 1:
            continue
        z = next(iter(apex))
        if z in B:
            continue
        others = set()
        ok = True
        for s in rest:
            o = set(s) - {z}
            if len(o) != 1:
                ok = False
                break
            others |= o
        if ok and others == set(B):
            return q
    return None


def has_jq_minor(cl: Clutter) -> Optional[tuple[int, IndexSet, IndexSet]]:
    """Search all disjoint deletion/contraction pairs for a minor shaped
    like one apex joined to every element of a base set (plus the base).

    Contraction takes minimal sets afterwards to restore clutterhood.
    Returns (q, deleted, contracted) for the first hit in ascending mask
    order, or None.
    """
    g = cl.ground
    if g > 16:
        raise CapExceeded("minor search limited to ground sets <= 16")
    members = [frozenset(s) for s in cl.sets]
    elems = list(range(1, g + 1))
    for dmask in range(1 << g):
        zd = frozenset(e for k, e in enumerate(elems) if dmask >> k & 1)
        kept = [s for s in members if not (s & zd)]
        if len(kept) < 3:
            continue
        rest_elems = [e for e in elems if e not in zd]
        for cmask in range(1 << len(rest_elems)):
            zc = frozenset(e for k, e in enumerate(rest_elems)
                           if cmask >> k & 1)
            minor = _minimalize([s - zc for s in kept])
            q = _match_apex_shape(minor)
            if q is not None:
                return q, tuple(sorted(zd)), tuple(sorted(zc))
    return None


# -- the family of instances solved by one multi-cover cut ----------------

def _apex_target_sets(p: int, q: int) -> list[IndexSet]:
    big = tuple(i for i in range(1, q + 1) if i != p)
    out = [big]
    for i in range(p + 1, q + 1):
        out.append(tuple(list(range(1, p + 1)) + [i]))
    return sorted(out)


def apex_clutter_instance(p: int, q: int, n: int,
                          weight_bound: Optional[int] = None) -> Tomks:
    """Search for a single-row instance whose minimal covers are exactly
    {1..q}\\{p} together with {1..p,i} for i > p.

    Weights are restricted to the pattern X >= Y >= Z >= W on the blocks
    (1..p-1, p, p+1..q, q+1..n) within [1, weight_bound]; every candidate
    is verified by full enumeration before being returned.
    """
    if not (1 <= p <= q - 2):
        raise ValueError("need 1 <= p <= q-2")
    if q > n:
        raise ValueError("need q <= n")
    bound = weight_bound or 3 * q
    target = _apex_target_sets(p, q)
    tail = n - q
    for Z in range(1, bound + 1):
        for Y in range(Z, bound + 1):
            xs = [Y] if p == 1 else range(Y, bound + 1)
            for X in xs:
                ws = [Z] if tail == 0 else range(1, Z + 1)
                for W in ws:
                    lows = [
                        (p - 1) * X + Y + tail * W,
                        (p - 1) * X + (q - p - 1) * Z + tail * W,
                    ]
                    if p >= 2:
                        lows.append((p - 2) * X + Y + (q - p) * Z + tail * W)
                    ups = [(p - 1) * X + (q - p) * Z,
                           (p - 1) * X + Y + Z]
                    b = max(lows)
                    if b >= min(ups):
                        continue
                    weights = ([X] * (p - 1) + [Y] + [Z] * (q - p)
                               + [W] * tail)
                    K = validate_instance([weights], [b])
                    if sorted(enumerate_minimal_covers(K)) == target:
                        return K
    raise ConstructionFailed(
        f"no weight pattern within [1,{bound}] realizes p={p}, q={q}, n={n}")


def apex_clutter_hull_cuts(p: int, q: int, n: int) -> list[CutInequality]:
    """The cover inequalities plus the single multi-cover cut that
    describe the hull for the family above."""
    if not (1 <= p <= q - 2) or q > n:
        raise ValueError("need 1 <= p <= q-2 <= n-2")
    cuts = []
    for j in range(p + 1, q + 1):
        coeffs = [0] * n
        for i in range(1, p + 1):
            coeffs[i - 1] = 1
        coeffs[j - 1] = 1
        cuts.append(CutInequality(coeffs=tuple(coeffs), rhs=p, kind="CI",
                                  provenance={"family": "apex", "j": j}))
    coeffs = [0] * n
    for i in range(1, p):
        coeffs[i - 1] = 1
    for i in range(p + 1, q + 1):
        coeffs[i - 1] = 1
    cuts.append(CutInequality(coeffs=tuple(coeffs), rhs=q - 2, kind="CI",
                              provenance={"family": "apex", "big": True}))
    coeffs = [0] * n
    for i in range(1, p):
        coeffs[i - 1] = q - p
    coeffs[p - 1] = q - p - 1
    for i in range(p + 1, q + 1):
        coeffs[i - 1] = 1
    cuts.append(CutInequality(coeffs=tuple(coeffs), rhs=p * (q - p) - 1,
                              kind="MCI", provenance={"family": "apex"}))
    return cuts
