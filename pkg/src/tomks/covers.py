"""Classical cover-inequality machinery and its exact separation.

Separation solves one knapsack-cover IP per row (a cover certifies the
violation of at least one row, so per-row decomposition is exact); ties
are broken by lowest row index, then by the lexicographically smallest
optimal cover.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ._rat import ZERO, rat
from .core import IndexSet, Tomks, index_set, is_cover
from .cuts import CutInequality
from .errors import CapExceeded, NotACover
from .milp import GE, LE, MilpModel, Status, mip_solve


def enumerate_minimal_covers(K: Tomks, cap: int = 25) -> list[IndexSet]:
    """All minimal covers by depth-first subset search.

    Extending stops at the first index turning the set into a cover;
    under chain order the set found this way is automatically minimal
    (its heaviest proper subset is the build prefix, which was feasible).
    """
    if K.n > cap:
        raise CapExceeded(f"n={K.n} exceeds cap {cap}")
    out: list[IndexSet] = []
    sums = [0] * K.m
    chosen: list[int] = []

    def extend(start: int):
        for i in range(start, K.n + 1):
            over = False
            for h in range(K.m):
                sums[h] += K.weight(h + 1, i)
                if sums[h] > K.b[h]:
                    over = True
            chosen.append(i)
            if over:
                out.append(tuple(chosen))
            else:
                extend(i + 1)
            chosen.pop()
            for h in range(K.m):
                sums[h] -= K.weight(h + 1, i)

    extend(1)
    return out


def ci(K: Tomks, cover: Iterable[int]) -> CutInequality:
    """The plain cover inequality x(C) <= |C| - 1."""
    c = index_set(cover, K.n)
    if not is_cover(K, c):
        raise NotACover(f"{list(c)} is not a cover")
    coeffs = [0] * K.n
    for i in c:
        coeffs[i - 1] = 1
    return CutInequality(coeffs=tuple(coeffs), rhs=len(c) - 1, kind="CI",
                         provenance={"cover": list(c)})


def _row_cover_ip(K: Tomks, h: int, point: Sequence, node_cap: int):
    """min sum (1 - x~_i) z_i subject to row h exceeding its capacity.

    Returns (optimum, lexicographically smallest optimal cover) or None
    when the row admits no cover at all."""
    row = K.rows[h - 1]
    total = sum(row)
    if total <= K.b[h - 1]:
        return None
    m = MilpModel(f"cover-sep-row{h}")
    for i in range(1, K.n + 1):
        m.add_binary(name=f"z{i}")
    m.add_constraint({i: row[i] for i in range(K.n) if row[i]}, GE,
                     K.b[h - 1] + 1)
    m.set_objective({i: 1 - rat(point[i]) for i in range(K.n)}, "min")
    sol = mip_solve(m, node_cap=node_cap)
    if sol.status != Status.OPTIMAL:
        raise CapExceeded(f"row {h} separation hit the node cap")
    opt = sol.objective
    # second stage: among optimal covers pick the lexicographically
    # smallest (binary weights 2^(n-i) encode the set order exactly)
    m2 = MilpModel(f"cover-sep-row{h}-lex")
    for i in range(1, K.n + 1):
        m2.add_binary(name=f"z{i}")
    m2.add_constraint({i: row[i] for i in range(K.n) if row[i]}, GE,
                      K.b[h - 1] + 1)
    m2.add_constraint({i: 1 - rat(point[i]) for i in range(K.n)}, LE, opt)
    m2.set_objective({i: -(1 << (K.n - 1 - i)) for i in range(K.n)}, "max")
    sol2 = mip_solve(m2, node_cap=node_cap,
                     initial_incumbent=sol.x)
    if sol2.status != Status.OPTIMAL:
        raise CapExceeded(f"row {h} lex stage hit the node cap")
    cover = tuple(i + 1 for i in range(K.n) if sol2.x[i] == 1)
    return opt, cover


def separate_ci(K: Tomks, point: Sequence,
                node_cap: int = 10 ** 6) -> Optional[CutInequality]:
    """Exact cover-inequality separation at a fractional point.

    Returns a violated CI (the most violated over rows, with the
    documented tie-breaks) or None when every CI holds at the point.
    """
    pt = [rat(v) for v in point]
    best = None
    for h in range(1, K.m + 1):
        res = _row_cover_ip(K, h, pt, node_cap)
        if res is None:
            continue
        opt, cover = res
        if opt < 1 and (best is None or opt < best[0]):
            best = (opt, h, cover)
    if best is None:
        return None
    _, h, cover = best
    cut = ci(K, cover)
    prov = dict(cut.provenance)
    prov["separating_row"] = h
    return CutInequality(coeffs=cut.coeffs, rhs=cut.rhs, kind="CI",
                         provenance=prov)
