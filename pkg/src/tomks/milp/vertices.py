"""Exact vertex enumeration for small polytopes given as A x <= b.

Pivots between bases of n tight rows under a lexicographic right-hand
side perturbation b -> b + (eps, eps^2, ...). The perturbed polytope is
simple, its basis graph is the (connected) vertex graph, and every
vertex of the original polytope is the unperturbed image of at least one
lex-feasible basis, so a breadth-first walk enumerates them all. All
arithmetic is rational.

The caller supplies a starting basis (n row indices whose rows are tight
at a known vertex); for systems containing the rows -x_i <= 0 with the
origin feasible, those rows are that basis.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .._rat import Rat, ZERO, ONE, rat
from ..errors import CapExceeded


class Polyhedron:
    def __init__(self, n: int, rows: Sequence[tuple[Sequence, object]]):
        self.n = n
        self.A = [[rat(v) for v in coeffs] for coeffs, _ in rows]
        self.b = [rat(rhs) for _, rhs in rows]
        self.m = len(self.A)


def _invert(mat: list[list[Rat]]) -> Optional[list[list[Rat]]]:
    n = len(mat)
    aug = [row[:] + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _matvec(m: list[list[Rat]], v: list[Rat]) -> list[Rat]:
    return [sum((a * x for a, x in zip(row, v)), ZERO) for row in m]


class _Frame:
    """One basis: inverse of the basis rows and derived lex data."""

    def __init__(self, poly: Polyhedron, basis: tuple[int, ...]):
        self.poly = poly
        self.basis = basis
        mat = [poly.A[r] for r in basis]
        self.Minv = _invert(mat)
        if self.Minv is None:
            raise ValueError("basis rows are dependent")
        self.x = _matvec(self.Minv, [poly.b[r] for r in basis])

    def lex_slack(self, r: int):
        """(constant slack, eps coefficients sparse dict row->Rat)."""
        poly = self.poly
        a = poly.A[r]
        const = poly.b[r] - sum((ai * xi for ai, xi in zip(a, self.x)), ZERO)
        coeffs = {r: ONE}
        # -A_r M columns align with basis rows
        for p, br in enumerate(self.basis):
            val = -sum((a[k] * self.Minv[k][p] for k in range(poly.n)), ZERO)
            if val != 0:
                coeffs[br] = coeffs.get(br, ZERO) + val
        if coeffs.get(r) == 0:
            del coeffs[r]
        return const, coeffs

    def lex_feasible(self) -> bool:
        base = set(self.basis)
        for r in range(self.poly.m):
            if r in base:
                continue
            const, coeffs = self.lex_slack(r)
            if const > 0:
                continue
            if const < 0:
                return False
            sign = _first_sign(coeffs)
            if sign < 0:
                return False
        return True


def _first_sign(coeffs: dict[int, Rat]) -> int:
    for r in sorted(coeffs):
        if coeffs[r] != 0:
            return 1 if coeffs[r] > 0 else -1
    return 0


def _lex_cmp_scaled(sa, fa: Rat, sb, fb: Rat) -> int:
    """Compare sa/fa vs sb/fb lexicographically; s = (const, coeff dict),
    f > 0 scale factors."""
    ca, da = sa
    cb, db = sb
    lhs = ca * fb
    rhs = cb * fa
    if lhs != rhs:
        return -1 if lhs < rhs else 1
    rowset = set(da) | set(db)
    for r in sorted(rowset):
        va = da.get(r, ZERO) * fb
        vb = db.get(r, ZERO) * fa
        if va != vb:
            return -1 if va < vb else 1
    return 0


def enumerate_vertices(n: int, rows: Sequence[tuple[Sequence, object]],
                       start_basis: Iterable[int],
                       basis_cap: int = 200000) -> list[tuple]:
    """All vertices of {x : A x <= b}; see module docstring."""
    poly = Polyhedron(n, rows)
    start = tuple(sorted(start_basis))
    frame = _Frame(poly, start)
    if not frame.lex_feasible():
        raise ValueError("starting basis is not lexicographically feasible")
    seen = {start}
    verts: dict[tuple, tuple] = {}
    stack = [start]
    while stack:
        if len(seen) > basis_cap:
            raise CapExceeded(f"more than {basis_cap} bases")
        basis = stack.pop()
        fr = _Frame(poly, basis)
        verts.setdefault(tuple(fr.x), tuple(fr.x))
        base = set(basis)
        slack_memo: dict[int, tuple] = {}

        def get_slack(r: int):
            if r not in slack_memo:
                slack_memo[r] = fr.lex_slack(r)
            return slack_memo[r]

        # leave each basis row in turn: edge direction w = column of Minv
        for p in range(n):
            w = [fr.Minv[k][p] for k in range(n)]
            # moving with A_{basis[p]} x = b_p - t: x(t) = x - t*w
            best_r = -1
            best = None  # (slack pair, gain factor)
            best_gain = ZERO
            for r in range(poly.m):
                if r in base:
                    continue
                gain = sum((a * wk for a, wk in zip(poly.A[r], w)), ZERO)
                # slack_r(t) = slack_r + t * (A_r w); blocking if A_r w < 0
                if gain >= 0:
                    continue
                sl = get_slack(r)
                if best is None or _lex_cmp_scaled(sl, -gain, best, -best_gain) < 0:
                    best = sl
                    best_gain = gain
                    best_r = r
            if best_r < 0:
                continue  # unbounded edge: cannot happen for polytopes
            nb = tuple(sorted((set(basis) - {basis[p]}) | {best_r}))
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return sorted(verts)
