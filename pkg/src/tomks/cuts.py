"""Cut generation from multi-covers.

The generator walks the non-intersection indices of the cover union in
descending order, giving each a coefficient at least one more than the
largest later coefficient it "competes" with inside some cover's
complement; intersection indices then get the cheapest bound over the
covers. The right-hand side is the largest cover's coefficient sum minus
one. Fixing every bound with equality gives the unique minimal cut
(S-MCI); nonnegative offsets reproduce the whole family.

Also here: the closed-form families for three specific skeleton shapes,
the coefficient extension to items below the covers, the classical
extended cover inequality, the single-knapsack (1,k)-configuration cut,
and exact sequential up-lifting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .core import IndexSet, Tomks, index_set, is_cover, is_minimal_cover
from .errors import NotACover, PreconditionViolated, SkeletonMismatch
from .multicover import MultiCover, skeleton_of

CUT_KINDS = ("CI", "ECI", "LCI", "MCI", "SMCI", "EMCI", "LMCI", "ONE_K")


@dataclass(frozen=True)
class CutInequality:
    """Integer inequality sum(coeffs[i] * x_i) <= rhs over n items."""

    coeffs: tuple[int, ...]
    rhs: int
    kind: str
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in CUT_KINDS:
            raise ValueError(f"unknown cut kind {self.kind!r}")
        if self.rhs < 0:
            raise ValueError("cut rhs must be >= 0")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def support(self) -> IndexSet:
        return tuple(i for i, a in enumerate(self.coeffs, start=1) if a)

    def value_at(self, x: Sequence) -> object:
        return sum(a * x[i] for i, a in enumerate(self.coeffs))

    def coeff(self, i: int) -> int:
        return self.coeffs[i - 1]

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "rhs": self.rhs,
                "kind": self.kind, "provenance": self.provenance}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def load_cut(doc: dict) -> CutInequality:
    return CutInequality(coeffs=tuple(int(a) for a in doc["coeffs"]),
                         rhs=int(doc["rhs"]), kind=doc.get("kind", "CI"),
                         provenance=doc.get("provenance", {}))


@dataclass(frozen=True)
class MciPolicy:
    """How to resolve the "any integer >= bound" freedom.

    minimal=True pins every coefficient to its bound. Otherwise `offsets`
    maps an index to the nonnegative increment added to its bound. The
    largest non-intersection index is initialized to one and never
    revisited, so it accepts no offset.
    """

    minimal: bool = True
    offsets: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.minimal and self.offsets:
            raise ValueError("minimal policy takes no offsets")
        for i, inc in self.offsets.items():
            if int(inc) < 0:
                raise ValueError(f"offset for index {i} must be >= 0")

    def offset(self, i: int) -> int:
        return int(self.offsets.get(i, 0))


MINIMAL = MciPolicy(minimal=True)


def _free_indices(mc: MultiCover) -> tuple[list[int], list[int]]:
    """(descending-step indices, intersection indices); the last union
    index outside the intersection is pinned at one."""
    non_c0 = [i for i in mc.union if i not in set(mc.c0)]
    return non_c0, list(mc.c0)


def step_bound_outer(mc: MultiCover, alpha: Mapping[int, int], i: int) -> int:
    """Lower bound for a non-intersection index from the descending pass."""
    best = 0
    for h in range(mc.k):
        if i in set(mc.covers[h]):
            inner = max((alpha[l] for l in mc.complements[h] if l > i),
                        default=0)
            if inner > best:
                best = inner
    return best + 1


def step_bound_intersection(mc: MultiCover, alpha: Mapping[int, int],
                            j: int) -> int:
    """Lower bound for an intersection index: cheapest cover branch of
    max(prefix max, suffix sum + 1) over that cover's complement."""
    best = None
    for h in range(mc.k):
        comp = mc.complements[h]
        prefix = max((alpha[l] for l in comp if l < j), default=0)
        suffix = sum(alpha[l] for l in comp if l > j) + 1
        val = max(prefix, suffix)
        if best is None or val < best:
            best = val
    return best if best is not None else 1


def mci(mc: MultiCover, policy: MciPolicy = MINIMAL) -> CutInequality:
    """Generate the cut for a verified multi-cover under the given policy."""
    non_c0, c0 = _free_indices(mc)
    adjustable = set(non_c0[:-1]) | set(c0)
    for key in policy.offsets:
        if key not in adjustable:
            raise ValueError(f"offset key {key} is not an adjustable index")
    alpha = {i: 0 for i in range(1, mc.n + 1)}
    for i in non_c0:
        alpha[i] = 1
    for t in range(len(non_c0) - 1, 0, -1):
        i = non_c0[t - 1]
        alpha[i] = step_bound_outer(mc, alpha, i) + policy.offset(i)
    for j in c0:
        alpha[j] = step_bound_intersection(mc, alpha, j) + policy.offset(j)
    beta = max(sum(alpha[i] for i in ch) for ch in mc.covers) - 1
    if mc.k == 1 and policy.minimal:
        kind = "CI"
    elif policy.minimal:
        kind = "SMCI"
    else:
        kind = "MCI"
    prov = {"covers": [list(c) for c in mc.covers]}
    if not policy.minimal:
        prov["offsets"] = {str(k): int(v) for k, v in policy.offsets.items()}
    coeffs = tuple(alpha[i] for i in range(1, mc.n + 1))
    return CutInequality(coeffs=coeffs, rhs=beta, kind=kind, provenance=prov)


def satisfies_generator_bounds(mc: MultiCover, cut: CutInequality) -> bool:
    """Whether a coefficient vector obeys every generator inequality (all
    step bounds, unit value on the last free index, zero off the union,
    rhs equal to the largest cover sum minus one)."""
    alpha = {i: cut.coeff(i) for i in range(1, mc.n + 1)}
    non_c0, c0 = _free_indices(mc)
    if any(alpha[i] != 0 for i in range(1, mc.n + 1) if i not in set(mc.union)):
        return False
    if non_c0 and alpha[non_c0[-1]] != 1:
        return False
    for t in range(len(non_c0) - 1, 0, -1):
        i = non_c0[t - 1]
        if alpha[i] < step_bound_outer(mc, alpha, i):
            return False
    for j in c0:
        if alpha[j] < step_bound_intersection(mc, alpha, j):
            return False
    beta = max(sum(alpha[i] for i in ch) for ch in mc.covers) - 1
    return cut.rhs == beta


def _positions(mc: MultiCover) -> list[int]:
    out = sorted(set().union(*map(set, mc.discrepancy))) if mc.discrepancy else []
    return out


def _shape_singleton_block(mc: MultiCover) -> Optional[int]:
    """If the discrepancy family is {{i1},{i2..it}} with i1 minimal,
    return t, else None."""
    if mc.k != 2:
        return None
    d = mc.discrepancy
    pos = _positions(mc)
    t = len(pos)
    singles = [h for h in range(2) if len(d[h]) == 1]
    for h in singles:
        if d[h][0] == pos[0] and set(d[1 - h]) == set(pos[1:]):
            return t
    return None


def _shape_straddling_pair(mc: MultiCover) -> Optional[int]:
    """If the discrepancy family is {{i1,i_{t+1}},{i2..it}}, return t."""
    if mc.k != 2:
        return None
    d = mc.discrepancy
    pos = _positions(mc)
    if len(pos) < 3:
        return None
    t = len(pos) - 1
    for h in range(2):
        if set(d[h]) == {pos[0], pos[-1]} and set(d[1 - h]) == set(pos[1:-1]):
            return t
    return None


def closed_form_singleton_block(mc: MultiCover) -> CutInequality:
    """Closed form for discrepancy shape {{i1},{i2..it}}, t >= 3.

    Equivalent to the generator with offset t-3 on i1: coefficient t below
    i1, t-1 from i1 up to i2, decreasing between later block elements, one
    on the block and above it.
    """
    t = _shape_singleton_block(mc)
    if t is None or t < 3:
        raise SkeletonMismatch("discrepancy family is not {{i1},{i2..it}} "
                               "with t >= 3")
    pos = _positions(mc)
    i1 = pos[0]
    cut = mci(mc, MciPolicy(minimal=False, offsets={i1: t - 3}))
    alpha = _closed_singleton_block_formula(mc, pos, t)
    got = {i: cut.coeff(i) for i in mc.union}
    if got != alpha:
        raise AssertionError(f"closed form mismatch: {alpha} vs {got}")
    prov = dict(cut.provenance)
    prov["closed_form"] = "singleton_block"
    return CutInequality(coeffs=cut.coeffs, rhs=cut.rhs, kind="MCI",
                         provenance=prov)


def _closed_singleton_block_formula(mc, pos, t) -> dict[int, int]:
    alpha = {}
    for i in mc.union:
        if i < pos[0]:
            alpha[i] = t
        elif i in pos[1:]:
            alpha[i] = 1
        elif pos[0] <= i < pos[1]:
            alpha[i] = t - 1
        elif i > pos[-1]:
            alpha[i] = 1
        else:
            l = next(l for l in range(2, t) if pos[l - 1] < i < pos[l])
            alpha[i] = t - (l + 1) + 2
    return alpha


def closed_form_straddling_pair(mc: MultiCover) -> CutInequality:
    """Closed form for discrepancy shape {{i1,i_{t+1}},{i2..it}}, t >= 3.

    This one is the minimal cut; the generator output is asserted equal.
    """
    t = _shape_straddling_pair(mc)
    if t is None or t < 3:
        raise SkeletonMismatch("discrepancy family is not "
                               "{{i1,i_{t+1}},{i2..it}} with t >= 3")
    pos = _positions(mc)
    alpha = {}
    for i in mc.union:
        if i < pos[0]:
            alpha[i] = 2 * t - 1
        elif i in pos[1:-1]:
            alpha[i] = 2
        elif i == pos[-1]:
            alpha[i] = 1
        elif pos[0] <= i < pos[1]:
            alpha[i] = 2 * t - 3
        elif pos[-2] < i < pos[-1] or i > pos[-1]:
            alpha[i] = 2
        else:
            l = next(l for l in range(2, t) if pos[l - 1] < i < pos[l])
            alpha[i] = 2 * t - 2 * (l + 1) + 3
    cut = mci(mc, MINIMAL)
    got = {i: cut.coeff(i) for i in mc.union}
    if got != alpha:
        raise AssertionError(f"closed form mismatch: {alpha} vs {got}")
    prov = dict(cut.provenance)
    prov["closed_form"] = "straddling_pair"
    return CutInequality(coeffs=cut.coeffs, rhs=cut.rhs, kind="SMCI",
                         provenance=prov)


_THREE_COVER_SHAPE = ((1, 3), (1, 4, 5), (2, 3, 5))


def closed_form_three_cover(mc: MultiCover) -> CutInequality:
    """Closed form for the three-cover skeleton {{1,3},{1,4,5},{2,3,5}}."""
    sk = skeleton_of(mc)
    if set(sk.sets) != set(_THREE_COVER_SHAPE):
        raise SkeletonMismatch(
            "skeleton is not {{1,3},{1,4,5},{2,3,5}}")
    pos = _positions(mc)
    alpha = {}
    for i in mc.union:
        if i < pos[0]:
            alpha[i] = 5
        elif i == pos[1]:
            alpha[i] = 2
        elif i == pos[2]:
            alpha[i] = 2
        elif i == pos[3]:
            alpha[i] = 1
        elif i == pos[4]:
            alpha[i] = 1
        elif pos[0] <= i < pos[1]:
            alpha[i] = 3
        elif pos[1] < i < pos[2]:
            alpha[i] = 3
        elif pos[2] < i < pos[3]:
            alpha[i] = 2
        elif pos[3] < i < pos[4]:
            alpha[i] = 2
        else:
            alpha[i] = 2
    cut = mci(mc, MINIMAL)
    got = {i: cut.coeff(i) for i in mc.union}
    if got != alpha:
        raise AssertionError(f"closed form mismatch: {alpha} vs {got}")
    prov = dict(cut.provenance)
    prov["closed_form"] = "three_cover"
    return CutInequality(coeffs=cut.coeffs, rhs=cut.rhs, kind="SMCI",
                         provenance=prov)


def second_least(values: Sequence[int]) -> int:
    """Second least element counting multiplicity; the single element of a
    one-element multiset (most permissive reading of the convention that
    duplicated minima collapse to the minimum)."""
    vs = sorted(values)
    if len(vs) == 1:
        return vs[0]
    return vs[1]


def extended_mci(mc: MultiCover, cut: CutInequality) -> CutInequality:
    """Raise coefficients of items below the covers.

    Each item i outside the union gets max over covers entirely above i of
    that cover's second-least coefficient; rhs unchanged.
    """
    if cut.n != mc.n:
        raise ValueError("cut and multi-cover sizes differ")
    coeffs = list(cut.coeffs)
    cset = set(mc.union)
    for i in range(1, mc.n + 1):
        if i in cset:
            continue
        best = 0
        for ch in mc.covers:
            if i < min(ch):
                cand = second_least([cut.coeff(j) for j in ch])
                if cand > best:
                    best = cand
        coeffs[i - 1] = best
    prov = dict(cut.provenance)
    prov["extended_from"] = cut.kind
    return CutInequality(coeffs=tuple(coeffs), rhs=cut.rhs, kind="EMCI",
                         provenance=prov)


def eci(K: Tomks, cover: Iterable[int]) -> CutInequality:
    """Extended cover inequality: unit coefficients on the cover and on
    every item below its least element."""
    c = index_set(cover, K.n)
    if not is_cover(K, c):
        raise NotACover(f"{list(c)} is not a cover")
    coeffs = [0] * K.n
    for i in range(1, min(c)):
        coeffs[i - 1] = 1
    for i in c:
        coeffs[i - 1] = 1
    return CutInequality(coeffs=tuple(coeffs), rhs=len(c) - 1, kind="ECI",
                         provenance={"cover": list(c)})


def one_k_configuration(K: Tomks, Q: Iterable[int], t: int, r: int,
                        Tr: Iterable[int], validate: bool = True
                        ) -> CutInequality:
    """Single-knapsack configuration cut (r-k+1) x_t + x(Tr) <= r.

    Hypotheses checked: Q fits in the knapsack, t sits outside Q, and a
    unique k exists such that every k-subset of Q plus t is a minimal
    cover. Tr is an r-subset of Q with k <= r <= |Q|. In validate mode the
    inequality is also brute-forced over {0,1}^n (n <= 20).
    """
    if K.m != 1:
        raise PreconditionViolated("configuration cuts need a single row")
    q = index_set(Q, K.n)
    tr = index_set(Tr, K.n)
    if not q:
        raise PreconditionViolated("Q must be nonempty")
    if t in q:
        raise PreconditionViolated("t must lie outside Q")
    a = K.rows[0]
    b = K.b[0]
    if sum(a[i - 1] for i in q) > b:
        raise PreconditionViolated("Q does not fit in the knapsack")
    weights = sorted((a[i - 1] for i in q))
    at = a[t - 1]
    k = None
    for kk in range(1, len(q) + 1):
        lightest_k = sum(weights[:kk])
        heaviest_km1 = sum(sorted(weights, reverse=True)[:kk - 1])
        if lightest_k + at > b and heaviest_km1 + at <= b:
            k = kk
            break
    if k is None:
        raise PreconditionViolated(
            "no k makes every k-subset of Q plus t a minimal cover")
    if not set(tr) <= set(q) or len(tr) != r or not (k <= r <= len(q)):
        raise PreconditionViolated(
            f"Tr must be an r-subset of Q with {k} <= r <= {len(q)}")
    coeffs = [0] * K.n
    coeffs[t - 1] = r - k + 1
    for j in tr:
        coeffs[j - 1] = 1
    cut = CutInequality(coeffs=tuple(coeffs), rhs=r, kind="ONE_K",
                        provenance={"Q": list(q), "t": t, "k": k, "r": r,
                                    "Tr": list(tr)})
    if validate and K.n <= 20:
        from .verify import is_valid_inequality

        if not is_valid_inequality(K, cut):
            raise AssertionError("configuration hypotheses hold but the cut "
                                 "is invalid; this is a bug")
    return cut


def _max_weighted_feasible(K: Tomks, weights: Sequence[int],
                           fixed_one: int | None = None):
    """Exact max of sum(weights[i-1] x_i) over K, optionally with one
    variable fixed to one. Returns None when infeasible."""
    if K.n <= 16:
        from .verify import enumerate_feasible

        best = None
        for point in enumerate_feasible(K):
            if fixed_one is not None and not point[fixed_one - 1]:
                continue
            val = sum(w for w, xi in zip(weights, point) if xi)
            if best is None or val > best:
                best = val
        return best
    from .milp import knapsack_max

    return knapsack_max(K, weights, fixed_one=fixed_one)


def sequential_uplift(K: Tomks, cut: CutInequality,
                      order: Sequence[int]) -> CutInequality:
    """Exact sequential up-lifting of zero-coefficient variables.

    In the given order, each zero coefficient becomes rhs minus the exact
    optimum of the current cut's left side with that variable fixed to
    one; infeasible fixings get coefficient rhs and are recorded.
    """
    if sorted(order) != list(range(1, K.n + 1)):
        raise ValueError("order must be a permutation of 1..n")
    coeffs = list(cut.coeffs)
    lifted = []
    forced = []
    for i in order:
        if coeffs[i - 1] != 0:
            continue
        z = _max_weighted_feasible(K, coeffs, fixed_one=i)
        if z is None:
            coeffs[i - 1] = cut.rhs
            forced.append(i)
        else:
            new = cut.rhs - z
            if new < 0:
                raise AssertionError(
                    "lifting produced a negative coefficient; input cut "
                    "was not valid for the instance")
            coeffs[i - 1] = new
            if new:
                lifted.append(i)
    kind = {"CI": "LCI", "ECI": "LCI"}.get(cut.kind, "LMCI")
    prov = dict(cut.provenance)
    prov["lifted_from"] = cut.kind
    if lifted:
        prov["lifted"] = lifted
    if forced:
        prov["infeasible_fixings"] = forced
    return CutInequality(coeffs=tuple(coeffs), rhs=cut.rhs, kind=kind,
                         provenance=prov)
