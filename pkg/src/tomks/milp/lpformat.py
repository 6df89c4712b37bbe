"""Text export of models in a CPLEX-LP subset, for external cross checks.

Sections: objective, constraints, bounds, generals/binaries. All model
data is rational; non-integer coefficients are scaled to integers by a
common denominator, recorded in a leading comment, so the file stays
exact.
"""

from __future__ import annotations

from math import lcm

from .._rat import rat
from .model import EQ, GE, LE, MilpModel


def _scale(values) -> int:
    denom = 1
    for v in values:
        denom = lcm(denom, int(rat(v).denominator))
    return denom


def _term(coeff, name: str, first: bool) -> str:
    c = int(coeff)
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    lead = "" if first and sign == "" else f"{sign} "
    return f"{lead}{mag} {name}"


def write_lp(model: MilpModel) -> str:
    lines = [f"\\ model {model.name}"]
    obj_scale = _scale(model.objective.values())
    if obj_scale != 1:
        lines.append(f"\\ objective scaled by {obj_scale}")
    lines.append("Maximize" if model.objective_sense == "max" else "Minimize")
    terms = []
    first = True
    for j in sorted(model.objective):
        v = model.objective[j] * obj_scale
        terms.append(_term(v, model.variables[j].name, first))
        first = False
    lines.append(" obj: " + (" ".join(terms) if terms else "0 " +
                             (model.variables[0].name if model.variables else "x0")))
    lines.append("Subject To")
    for i, row in enumerate(model.constraints):
        scale = _scale(list(row.coeffs.values()) + [row.rhs])
        terms = []
        first = True
        for j in sorted(row.coeffs):
            terms.append(_term(row.coeffs[j] * scale, model.variables[j].name,
                               first))
            first = False
        op = {LE: "<=", GE: ">=", EQ: "="}[row.sense]
        name = row.name or f"c{i}"
        note = f"  \\ scaled by {scale}" if scale != 1 else ""
        lines.append(f" {name}: {' '.join(terms) or '0 ' + model.variables[0].name}"
                     f" {op} {int(row.rhs * scale)}{note}")
    lines.append("Bounds")
    for v in model.variables:
        lo = "-inf" if v.lb is None else str(rat(v.lb))
        hi = "+inf" if v.ub is None else str(rat(v.ub))
        if v.lb is not None and v.lb == v.ub:
            lines.append(f" {v.name} = {lo}")
        else:
            lines.append(f" {lo} <= {v.name} <= {hi}")
    binaries = [v.name for v in model.variables
                if v.integer and v.lb == 0 and v.ub == 1]
    generals = [v.name for v in model.variables
                if v.integer and not (v.lb == 0 and v.ub == 1)]
    if generals:
        lines.append("Generals")
        lines.append(" " + " ".join(generals))
    if binaries:
        lines.append("Binaries")
        lines.append(" " + " ".join(binaries))
    lines.append("End")
    return "\n".join(lines) + "\n"
