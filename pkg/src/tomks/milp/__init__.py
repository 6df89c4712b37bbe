"""Exact-rational LP/MIP kernel: models, simplex, branch and bound,
vertex enumeration, LP-file export."""

from __future__ import annotations

from typing import Optional, Sequence

from .model import EQ, GE, LE, MilpModel, MilpSolution, Status
from .exact import ExactSimplex, check_lp_certificate, lp_solve
from .bb import mip_solve
from .lpformat import write_lp
from .vertices import enumerate_vertices

__all__ = [
    "EQ", "GE", "LE", "MilpModel", "MilpSolution", "Status",
    "ExactSimplex", "check_lp_certificate", "lp_solve", "mip_solve",
    "write_lp", "enumerate_vertices", "knapsack_max",
]


def knapsack_max(K, weights: Sequence[int], fixed_one: Optional[int] = None,
                 node_cap: int = 10 ** 6):
    """Exact max of sum(weights[i-1] x_i) over a knapsack instance K,
    optionally with one variable fixed to one. Returns an int, or None
    when the fixing is infeasible."""
    model = MilpModel("knapsack")
    for i in range(1, K.n + 1):
        lo = 1 if fixed_one == i else 0
        model.add_var(name=f"x{i}", lb=lo, ub=1, integer=True)
    for h in range(K.m):
        row = {i: K.rows[h][i] for i in range(K.n) if K.rows[h][i]}
        model.add_constraint(row, LE, K.b[h])
    model.set_objective({i - 1: weights[i - 1] for i in range(1, K.n + 1)
                         if weights[i - 1]}, "max")
    sol = mip_solve(model, node_cap=node_cap)
    if sol.status == Status.INFEASIBLE:
        return None
    if sol.status != Status.OPTIMAL:
        raise RuntimeError(f"knapsack solve failed: {sol.status}")
    return int(sol.objective)
