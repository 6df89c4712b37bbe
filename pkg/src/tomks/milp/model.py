"""Linear/integer model container and solution record.

All data is exact-rational. Models are built once and treated as
immutable by the solvers; each solve owns its private state, so separate
solves of separate models may run concurrently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .._rat import Rat, rat, rat_str

LE, GE, EQ = "<=", ">=", "="
SENSES = (LE, GE, EQ)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    CAP_EXCEEDED = "cap_exceeded"


@dataclass
class Variable:
    name: str
    lb: Optional[Rat]
    ub: Optional[Rat]
    integer: bool


@dataclass
class Constraint:
    coeffs: dict[int, Rat]
    sense: str
    rhs: Rat
    name: str = ""


class MilpModel:
    """Rational LP/MIP: variables with bounds and integrality, linear
    rows with <=, >= or =, one linear objective."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.objective: dict[int, Rat] = {}
        self.objective_sense: str = "min"

    # -- construction -----------------------------------------------------
    def add_var(self, name: str = "", lb=0, ub=None, integer: bool = False) -> int:
        idx = len(self.variables)
        self.variables.append(Variable(
            name=name or f"x{idx}",
            lb=None if lb is None else rat(lb),
            ub=None if ub is None else rat(ub),
            integer=integer))
        return idx

    def add_binary(self, name: str = "") -> int:
        return self.add_var(name=name, lb=0, ub=1, integer=True)

    def add_constraint(self, coeffs: Mapping[int, object], sense: str, rhs,
                       name: str = "") -> int:
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        row = {int(j): rat(v) for j, v in coeffs.items() if rat(v) != 0}
        self.constraints.append(Constraint(coeffs=row, sense=sense,
                                           rhs=rat(rhs), name=name))
        return len(self.constraints) - 1

    def set_objective(self, coeffs: Mapping[int, object], sense: str = "min"):
        if sense not in ("min", "max"):
            raise ValueError(f"bad objective sense {sense!r}")
        self.objective = {int(j): rat(v) for j, v in coeffs.items()
                          if rat(v) != 0}
        self.objective_sense = sense

    # -- introspection ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def nrows(self) -> int:
        return len(self.constraints)

    def integer_indices(self) -> list[int]:
        return [j for j, v in enumerate(self.variables) if v.integer]

    def check_integer_bounds(self):
        for j in self.integer_indices():
            v = self.variables[j]
            if v.lb is None or v.ub is None:
                raise ValueError(f"integer variable {v.name} needs finite bounds")

    def eval_row(self, row: Constraint, x: Sequence) -> Rat:
        return sum((c * x[j] for j, c in row.coeffs.items()), rat(0))

    def eval_objective(self, x: Sequence) -> Rat:
        return sum((c * x[j] for j, c in self.objective.items()), rat(0))

    def point_feasible(self, x: Sequence, integrality: bool = True) -> bool:
        for j, v in enumerate(self.variables):
            if v.lb is not None and x[j] < v.lb:
                return False
            if v.ub is not None and x[j] > v.ub:
                return False
            if integrality and v.integer and rat(x[j]).denominator != 1:
                return False
        for row in self.constraints:
            val = self.eval_row(row, x)
            if row.sense == LE and val > row.rhs:
                return False
            if row.sense == GE and val < row.rhs:
                return False
            if row.sense == EQ and val != row.rhs:
                return False
        return True


@dataclass
class MilpSolution:
    status: Status
    x: Optional[tuple] = None
    objective: Optional[Rat] = None
    duals: Optional[tuple] = None
    reduced_costs: Optional[tuple] = None
    node_count: int = 0
    bound: Optional[Rat] = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == Status.OPTIMAL

    def summary(self) -> str:
        obj = rat_str(self.objective) if self.objective is not None else "-"
        return f"{self.status.value} obj={obj} nodes={self.node_count}"
