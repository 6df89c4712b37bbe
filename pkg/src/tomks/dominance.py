"""Dominance partial order on index sets.

S1 dominates S2 (written S1 |> S2) when there is an injection f: S2 -> S1
with f(i) <= i for every i. The fast test used everywhere is the prefix
count characterization: S1 |> S2 iff |S1 ∩ [t]| >= |S2 ∩ [t]| for every
threshold t. Its equivalence with the injection definition is pinned by
exhaustive tests against the matching oracle below.

Dominance is evaluated inside exponential loops (multi-cover verification),
so the fast test is O(|S1| + |S2|).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import IndexSet, index_set


@dataclass(frozen=True)
class DominanceWitness:
    """Pairs (source in S2, image in S1) realizing an injection f(i) <= i."""

    pairs: tuple[tuple[int, int], ...]

    def ok(self, s1: Iterable[int], s2: Iterable[int]) -> bool:
        s1, s2 = set(s1), set(s2)
        sources = [p[0] for p in self.pairs]
        images = [p[1] for p in self.pairs]
        return (
            sorted(sources) == sorted(s2)
            and len(set(images)) == len(images)
            and all(img in s1 and img <= src for src, img in self.pairs)
        )


def dominates(S1: Iterable[int], S2: Iterable[int]) -> bool:
    """Prefix-count test for S1 |> S2."""
    a = index_set(S1)
    b = index_set(S2)
    if len(a) < len(b):
        return False
    # merge scan: count of a-elements <= t must never trail count of b's
    ia = 0
    for ib, t in enumerate(b, start=1):
        while ia < len(a) and a[ia] <= t:
            ia += 1
        if ia < ib:
            return False
    return True


def dominates_oracle(S1: Iterable[int], S2: Iterable[int]
                     ) -> Optional[DominanceWitness]:
    """Bipartite-matching oracle for the injection definition.

    Builds the graph i in S2 -> {j in S1 : j <= i} and runs augmenting
    paths. Returns a witness when a perfect matching of S2 exists. Test
    oracle only; quadratic, independent of the prefix-count shortcut.
    """
    a = index_set(S1)
    b = index_set(S2)
    match_of_image: dict[int, int] = {}

    def try_assign(src: int, seen: set[int]) -> bool:
        for img in a:
            if img > src or img in seen:
                continue
            seen.add(img)
            if img not in match_of_image or try_assign(match_of_image[img], seen):
                match_of_image[img] = src
                return True
        return False

    for src in reversed(b):
        if not try_assign(src, set()):
            return None
    pairs = tuple(sorted((src, img) for img, src in match_of_image.items()))
    return DominanceWitness(pairs=pairs)


def comparable(S1: Iterable[int], S2: Iterable[int]) -> bool:
    return dominates(S1, S2) or dominates(S2, S1)
