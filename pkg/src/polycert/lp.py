"""Exact rational linear feasibility via phase-one simplex with Bland's rule.

Pivoting decisions are made on exact Fractions only, so verdicts are
reproducible and never affected by rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .poly import as_fraction

SENSES = ("<=", ">=", "==")


@dataclass
class Constraint:
    coeffs: dict
    sense: str
    rhs: Fraction

    def satisfied_by(self, assignment: Mapping[str, Fraction]) -> bool:
        lhs = sum((c * assignment[v] for v, c in self.coeffs.items()), Fraction(0))
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class FeasibilityProblem:
    """Named rational unknowns, a subset constrained >= 0, and linear constraints."""

    variables: list = field(default_factory=list)
    nonneg: set = field(default_factory=set)
    constraints: list = field(default_factory=list)

    def add_variable(self, name: str, nonneg: bool = False) -> str:
        if name in self.nonneg or name in self._names():
            raise ValueError(f"variable {name!r} declared twice")
        self.variables.append(name)
        if nonneg:
            self.nonneg.add(name)
        return name

    def _names(self):
        return set(self.variables)

    def add_constraint(self, coeffs: Mapping[str, object], sense: str, rhs=0):
        if sense not in SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        names = self._names()
        clean = {}
        for v, c in coeffs.items():
            if v not in names:
                raise ValueError(f"constraint references undeclared variable {v!r}")
            c = as_fraction(c)
            if c:
                clean[v] = c
        self.constraints.append(Constraint(clean, sense, as_fraction(rhs)))

    def check(self, assignment: Mapping[str, Fraction]) -> bool:
        if any(assignment[v] < 0 for v in self.nonneg):
            return False
        return all(c.satisfied_by(assignment) for c in self.constraints)


class SolverError(RuntimeError):
    pass


def _pivot(rows, basis, r, col):
    prow = rows[r]
    piv = prow[col]
    if piv != 1:
        inv = 1 / piv
        prow = [v * inv if v else v for v in prow]
        rows[r] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i != r:
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    basis[r] = col


def solve_feasibility(prob: FeasibilityProblem, max_pivots: int = 100_000):
    """Return an exact satisfying assignment (dict name -> Fraction) or None.

    Free variables are split into differences of nonnegative parts,
    inequalities get slack columns, and phase one minimizes the sum of
    artificial variables.  Bland's rule guarantees termination.
    """
    columns = []  # (name, sign) for structural columns
    index = {}
    for v in prob.variables:
        index[v] = [len(columns)]
        columns.append((v, 1))
        if v not in prob.nonneg:
            index[v].append(len(columns))
            columns.append((v, -1))
    nstruct = len(columns)
    nslack = sum(1 for c in prob.constraints if c.sense != "==")
    m = len(prob.constraints)
    width = nstruct + nslack + m + 1  # last column is rhs

    rows = []
    slack = nstruct
    for i, con in enumerate(prob.constraints):
        row = [Fraction(0)] * width
        for v, c in con.coeffs.items():
            cols = index[v]
            row[cols[0]] += c
            if len(cols) > 1:
                row[cols[1]] -= c
        if con.sense == "<=":
            row[slack] = Fraction(1)
            slack += 1
        elif con.sense == ">=":
            row[slack] = Fraction(-1)
            slack += 1
        row[-1] = con.rhs
        if row[-1] < 0:
            row = [-v for v in row]
        row[nstruct + nslack + i] = Fraction(1)
        rows.append(row)
    basis = [nstruct + nslack + i for i in range(m)]
    art0 = nstruct + nslack

    # phase-one objective: minimize sum of artificials, kept as reduced costs
    obj = [Fraction(0)] * width
    for row in rows:
        for j in range(width):
            if j < art0 or j == width - 1:
                obj[j] += row[j]

    for _ in range(max_pivots):
        col = next((j for j in range(art0) if obj[j] > 0), None)
        if col is None:
            break
        best = None
        for i, row in enumerate(rows):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase one: objective is bounded below
            raise SolverError("phase-one objective unbounded")
        r = best[1]
        _pivot(rows, basis, r, col)
        f = obj[col]
        prow = rows[r]
        for j, v in enumerate(prow):
            if v:
                obj[j] -= f * v
    else:
        raise SolverError(f"no convergence within {max_pivots} pivots")

    if obj[-1] > 0:
        return None

    values = [Fraction(0)] * nstruct
    for i, b in enumerate(basis):
        if b < nstruct:
            values[b] = rows[i][-1]
    assignment = {}
    for v in prob.variables:
        cols = index[v]
        val = values[cols[0]]
        if len(cols) > 1:
            val -= values[cols[1]]
        assignment[v] = val
    if not prob.check(assignment):
        raise SolverError("solver produced an assignment that violates the constraints")
    return assignment
