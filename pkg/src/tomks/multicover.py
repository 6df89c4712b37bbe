"""Discrepancy families, multi-cover verification, skeleton extraction.

A family of covers C_1..C_k is a multi-cover when every subset T of the
union of discrepancy sets that is not itself a discrepancy set is
comparable (under dominance) with some discrepancy set. That condition
only depends on the relative order of the discrepancy elements, i.e. on
the skeleton, so the check runs in rank space.

Recognition is by full enumeration over subsets of the discrepancy union
(the general recognition problem is conjectured hard; desk-scale
exhaustion is the honest choice). The enumeration cap is configurable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import IndexSet, Tomks, index_set, is_cover
from .errors import CapExceeded, InvalidSkeleton, NotACover, NotAMultiCover

DEFAULT_ENUMERATION_CAP = 20


def discrepancy_family(covers: Sequence[Iterable[int]]) -> tuple[IndexSet, ...]:
    """The family {C_h \\ (C_1 ∩ ... ∩ C_k)}, in input order."""
    cs = [index_set(c) for c in covers]
    if not cs:
        raise ValueError("need at least one cover")
    common = set(cs[0])
    for c in cs[1:]:
        common &= set(c)
    return tuple(tuple(i for i in c if i not in common) for c in cs)


def _rank_map(universe: Sequence[int]) -> dict[int, int]:
    return {v: r for r, v in enumerate(sorted(universe), start=1)}


def _prefix_counts(members: Iterable[int], u: int) -> list[int]:
    pc = [0] * (u + 1)
    for v in members:
        pc[v] += 1
    for t in range(1, u + 1):
        pc[t] += pc[t - 1]
    return pc


def sets_satisfy_multicover_condition(sets: Sequence[IndexSet],
                                      cap: int = DEFAULT_ENUMERATION_CAP):
    """Exhaustive comparability check over subsets of the union.

    `sets` live in any integer space; only relative order matters. Returns
    None when the condition holds, else a witness subset (in the input
    space) incomparable with every member.
    """
    universe = sorted(set(itertools.chain.from_iterable(sets)))
    u = len(universe)
    if u > cap:
        raise CapExceeded(f"discrepancy union has {u} > {cap} elements")
    rank = _rank_map(universe)
    ranked = [tuple(sorted(rank[v] for v in s)) for s in sets]
    member_masks = set()
    for s in ranked:
        mask = 0
        for v in s:
            mask |= 1 << (v - 1)
        member_masks.add(mask)
    pcs = [(_prefix_counts(s, u), len(s)) for s in ranked]
    inv = {r: v for v, r in rank.items()}
    for mask in range(1 << u):
        if mask in member_masks:
            continue
        pct = [0] * (u + 1)
        size = 0
        for t in range(1, u + 1):
            size += (mask >> (t - 1)) & 1
            pct[t] = size
        ok = False
        for pcd, dsize in pcs:
            if size >= dsize and all(pct[t] >= pcd[t] for t in range(1, u + 1)):
                ok = True  # T |> D'
                break
            if dsize >= size and all(pcd[t] >= pct[t] for t in range(1, u + 1)):
                ok = True  # D' |> T
                break
        if not ok:
            witness = tuple(inv[t] for t in range(1, u + 1) if (mask >> (t - 1)) & 1)
            return witness
    return None


@dataclass(frozen=True)
class MultiCover:
    """Verified family of covers with cached set algebra.

    covers: C_1..C_k; c0 = intersection; union = C; complements = C \\ C_h;
    discrepancy = C_h \\ c0. n is the ambient item count.
    """

    n: int
    covers: tuple[IndexSet, ...]
    c0: IndexSet
    union: IndexSet
    complements: tuple[IndexSet, ...]
    discrepancy: tuple[IndexSet, ...]

    @property
    def k(self) -> int:
        return len(self.covers)

    def to_json(self) -> dict:
        return {"covers": [list(c) for c in self.covers]}


def _assemble(n: int, cs: Sequence[IndexSet]) -> MultiCover:
    common = set(cs[0])
    for c in cs[1:]:
        common &= set(c)
    union: set[int] = set()
    for c in cs:
        union |= set(c)
    c0 = tuple(sorted(common))
    cu = tuple(sorted(union))
    comps = tuple(tuple(i for i in cu if i not in set(c)) for c in cs)
    disc = tuple(tuple(i for i in c if i not in common) for c in cs)
    return MultiCover(n=n, covers=tuple(cs), c0=c0, union=cu,
                      complements=comps, discrepancy=disc)


def verify_multicover(K: Tomks, covers: Sequence[Iterable[int]],
                      cap: int = DEFAULT_ENUMERATION_CAP) -> MultiCover:
    """Check covers and the comparability condition; return the MultiCover.

    Duplicate covers (empty discrepancy sets with k >= 2) are rejected:
    they add nothing and break the skeleton bijection.
    """
    cs = [index_set(c, K.n) for c in covers]
    if not cs:
        raise ValueError("need at least one cover")
    for h, c in enumerate(cs, start=1):
        if not is_cover(K, c):
            raise NotACover(f"member {h} ({list(c)}) is not a cover")
    mc = _assemble(K.n, cs)
    if mc.k >= 2 and any(len(d) == 0 for d in mc.discrepancy):
        raise NotAMultiCover("a cover contains the whole family intersection "
                             "(duplicate or nested duplicate)")
    if mc.k >= 2:
        witness = sets_satisfy_multicover_condition(mc.discrepancy, cap=cap)
        if witness is not None:
            raise NotAMultiCover(
                f"subset {list(witness)} is incomparable with every "
                f"discrepancy set", witness=witness)
    return mc


@dataclass(frozen=True)
class Skeleton:
    """Rank-relabeled discrepancy family over ground set {1..u}."""

    sets: tuple[IndexSet, ...]

    @property
    def u(self) -> int:
        return max((max(s) for s in self.sets if s), default=0)

    def pi(self, s: int) -> IndexSet:
        """Positions s' > s separated from s by some member set."""
        out = set()
        for sh in self.sets:
            if s in sh:
                for sp in range(s + 1, self.u + 1):
                    if sp not in sh:
                        out.add(sp)
        return tuple(sorted(out))

    def to_json(self) -> dict:
        return {"sets": [list(s) for s in self.sets]}


def make_skeleton(sets: Sequence[Iterable[int]],
                  cap: int = DEFAULT_ENUMERATION_CAP) -> Skeleton:
    """Validate and build a Skeleton: ranked ground set, empty common
    intersection, and the multi-cover comparability condition."""
    ss = tuple(index_set(s) for s in sets)
    if not ss or any(len(s) == 0 for s in ss):
        raise InvalidSkeleton("skeleton sets must be nonempty")
    if len(set(ss)) != len(ss):
        raise InvalidSkeleton("skeleton sets must be distinct")
    ground = set(itertools.chain.from_iterable(ss))
    u = len(ground)
    if ground != set(range(1, u + 1)):
        raise InvalidSkeleton("skeleton ground set must be 1..u")
    common = set(ss[0])
    for s in ss[1:]:
        common &= set(s)
    if len(ss) >= 2 and common:
        raise InvalidSkeleton("skeleton sets share a common element")
    if len(ss) >= 2:
        witness = sets_satisfy_multicover_condition(ss, cap=cap)
        if witness is not None:
            raise InvalidSkeleton(
                f"subset {list(witness)} incomparable with every member")
    return Skeleton(sets=ss)


def skeleton_of(mc: MultiCover) -> Skeleton:
    """Rank-relabel the discrepancy family (1 = least element of the union)."""
    universe = sorted(set(itertools.chain.from_iterable(mc.discrepancy)))
    rank = _rank_map(universe)
    sets = tuple(tuple(sorted(rank[v] for v in d)) for d in mc.discrepancy)
    return Skeleton(sets=sets)


def two_cover_skeletons(t: int) -> list[Skeleton]:
    """The two 2-cover skeleton shapes with block size t-1 >= 1:
    {{1},{2..t}} and {{1,t+1},{2..t}}."""
    out = [Skeleton(sets=((1,), tuple(range(2, t + 1))))]
    out.append(Skeleton(sets=((1, t + 1), tuple(range(2, t + 1)))))
    return out


def enumerate_multicovers(K: Tomks, skeleton: Skeleton | Sequence[Iterable[int]],
                          cap: int = 200000) -> Iterator[MultiCover]:
    """All multi-covers of K with exactly the given skeleton.

    Exhausts every strictly-increasing assignment of skeleton positions to
    item indices and every admissible intersection set; each resulting
    family whose members are all covers is yielded. The multi-cover
    condition is a property of the skeleton alone, so it is checked once.
    Test oracle; intended for small n.
    """
    if not isinstance(skeleton, Skeleton):
        skeleton = make_skeleton(skeleton)
    u = skeleton.u
    n = K.n
    count = 0
    free_all = list(range(1, n + 1))
    for positions in itertools.combinations(free_all, u):
        dsets = [tuple(positions[s - 1] for s in sh) for sh in skeleton.sets]
        used = set(positions)
        rest = [i for i in free_all if i not in used]
        # quickest reject: even the fattest family member is no cover
        if any(not is_cover(K, tuple(sorted(set(d) | set(rest))))
               for d in dsets):
            continue
        for r in range(len(rest) + 1):
            for c0 in itertools.combinations(rest, r):
                cs = [tuple(sorted(set(d) | set(c0))) for d in dsets]
                if all(is_cover(K, c) for c in cs):
                    count += 1
                    if count > cap:
                        raise CapExceeded(f"more than {cap} multi-covers")
                    yield _assemble(n, cs)
