"""Instance model and basic cover predicates.

A totally-ordered multiple knapsack set (TOMKS) is a 0-1 multiple knapsack
set whose constraint-matrix columns form a chain under component-wise
order: for i < j, A[h][i] >= A[h][j] on every row h (ties allowed).

Item indices are 1-based everywhere in the public API, including JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import NegativeEntry, NotACover, NotTotallyOrdered

IndexSet = tuple[int, ...]


def index_set(items: Iterable[int], n: int | None = None) -> IndexSet:
    """Normalize to a sorted duplicate-free tuple, optionally range-checked."""
    out = tuple(sorted(set(int(i) for i in items)))
    if out and out[0] < 1:
        raise ValueError(f"indices are 1-based, got {out[0]}")
    if n is not None and out and out[-1] > n:
        raise ValueError(f"index {out[-1]} out of range 1..{n}")
    return out


@dataclass(frozen=True)
class Tomks:
    """Validated TOMKS instance. Immutable; all operations on it are pure."""

    n: int
    m: int
    rows: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    c: Optional[tuple[int, ...]] = None

    def weight(self, row: int, item: int) -> int:
        """A[row][item], both 1-based."""
        return self.rows[row - 1][item - 1]

    def row_weight(self, row: int, items: Iterable[int]) -> int:
        r = self.rows[row - 1]
        return sum(r[i - 1] for i in items)

    def to_json(self) -> dict:
        doc = {"n": self.n, "m": self.m, "A": [list(r) for r in self.rows],
               "b": list(self.b)}
        if self.c is not None:
            doc["c"] = list(self.c)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def validate_instance(A: Sequence[Sequence[int]], b: Sequence[int],
                      c: Sequence[int] | None = None) -> Tomks:
    """Validate data and build a Tomks.

    Rejects negative entries and any column pair breaking the chain order;
    the error names the first violating (i, j, row) triple.
    """
    rows = tuple(tuple(int(x) for x in row) for row in A)
    if not rows:
        raise ValueError("need at least one row")
    n = len(rows[0])
    m = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("ragged constraint matrix")
    bt = tuple(int(x) for x in b)
    if len(bt) != m:
        raise ValueError(f"len(b)={len(bt)} does not match m={m}")
    for h, row in enumerate(rows, start=1):
        for i, x in enumerate(row, start=1):
            if x < 0:
                raise NegativeEntry(f"A[{h}][{i}] = {x} < 0")
    for h, x in enumerate(bt, start=1):
        if x < 0:
            raise NegativeEntry(f"b[{h}] = {x} < 0")
    # chain order: adjacent columns suffice (>= is transitive componentwise)
    for j in range(1, n):
        for h in range(m):
            if rows[h][j - 1] < rows[h][j]:
                raise NotTotallyOrdered(j, j + 1, h + 1)
    ct = None
    if c is not None:
        ct = tuple(int(x) for x in c)
        if len(ct) != n:
            raise ValueError(f"len(c)={len(ct)} does not match n={n}")
        if any(x < 0 for x in ct):
            raise NegativeEntry("objective entries must be >= 0")
    return Tomks(n=n, m=m, rows=rows, b=bt, c=ct)


def load_instance(doc: dict) -> Tomks:
    """Read the instance JSON schema {"n","m","A","b","c"?}."""
    inst = validate_instance(doc["A"], doc["b"], doc.get("c"))
    if "n" in doc and doc["n"] != inst.n:
        raise ValueError(f"declared n={doc['n']} but A has {inst.n} columns")
    if "m" in doc and doc["m"] != inst.m:
        raise ValueError(f"declared m={doc['m']} but A has {inst.m} rows")
    return inst


def loads_instance(text: str) -> Tomks:
    return load_instance(json.loads(text))


def is_cover(K: Tomks, S: Iterable[int]) -> bool:
    """True iff the incidence vector of S violates at least one knapsack row."""
    s = index_set(S, K.n)
    return any(K.row_weight(h, s) > K.b[h - 1] for h in range(1, K.m + 1))


def is_minimal_cover(K: Tomks, S: Iterable[int]) -> bool:
    """True iff S is a cover and every proper subset is not.

    Under chain order it suffices to delete the largest (lightest) element:
    that deletion leaves the heaviest proper subset on every row at once.
    """
    s = index_set(S, K.n)
    if not is_cover(K, s):
        raise NotACover(f"{list(s)} is not a cover")
    return not is_cover(K, s[:-1])
