""" Exact rational two-phase simplex returning lexicographically minimal optimal vertices.

Phase 1 minimizes the sum of artificial variables. Phase 2 minimizes the cost and then, restricted to the optimal
face, x(e_1), x(e_2), ... in variable order; this is the lexicographic perturbation of the objective and makes the
returned vertex unique. Every stage pivots by Bland's rule, so degenerate cycling cannot occur.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence

import sympy

from .exceptions import InfeasibleError, UnboundedError

__all__ = (
    'LE',
    'EQ',
    'ConstraintTag',
    'LinearConstraint',
    'BasicSolution',
    'solve_vertex_lp',
    'vertex_certificate'
)

LE = '<='
EQ = '='
ZERO = Fraction(0)


@dataclass(frozen=True)
class ConstraintTag:
    """ identifies the set that generated a constraint

    kind is one of 'spanning_tree_set' (key: node set), 'matroid_set' (key: (node, edge set)), 'cardinality' and
    'bound' (key: edge id)
    """
    kind: str
    key: object = None

    def to_dict(self) -> Dict:
        key = self.key
        if isinstance(key, frozenset):
            key = sorted(key)
        elif isinstance(key, tuple):
            key = [sorted(k) if isinstance(k, frozenset) else k for k in key]
        return {'kind': self.kind, 'key': key}


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: Mapping[str, Fraction]
    sense: str
    rhs: Fraction
    tag: ConstraintTag

    def __post_init__(self):
        assert self.coefficients, f'constraint {self.tag} has no coefficients'
        assert self.sense in (LE, EQ), f'unknown sense {self.sense}'

    def __hash__(self):
        return hash(self.tag)

    def value(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x[e] for e, c in self.coefficients.items()), ZERO)

    def violation(self, x: Mapping[str, Fraction]) -> Fraction:
        """ positive when x violates the constraint """
        value = self.value(x)
        if self.sense == EQ:
            return abs(value - self.rhs)
        return value - self.rhs

    def is_tight(self, x: Mapping[str, Fraction]) -> bool:
        return self.value(x) == self.rhs


@dataclass
class BasicSolution:
    x: Dict[str, Fraction]
    objective: Fraction
    tight: List[LinearConstraint]
    vertex_certificate: bool
    rounds: int = 1
    cuts: int = 0
    constraints: List[LinearConstraint] = field(default_factory=list, repr=False)

    @property
    def support(self) -> List[str]:
        return [e for e in sorted(self.x) if self.x[e] != 0]


def _to_sympy(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def vertex_certificate(tight: Sequence[LinearConstraint], x: Mapping[str, Fraction]) -> bool:
    """ True iff the tight constraints restricted to the support of x have rank |support(x)| """
    support = [e for e in sorted(x) if x[e] != 0]
    if not support:
        return True
    rows = [[_to_sympy(c.coefficients.get(e, 0)) for e in support] for c in tight]
    if not rows:
        return False
    return sympy.Matrix(rows).rank() == len(support)


class _Tableau:
    """ dense tableau: rows of Fractions, the last column holding the right-hand side """

    def __init__(self, rows: List[List[Fraction]], basis: List[int], origin: List[int]):
        self.rows = rows
        self.basis = basis
        self.origin = origin

    def pivot(self, r: int, j: int, cost_rows: List[List[Fraction]]):
        pivot_row = self.rows[r]
        p = pivot_row[j]
        pivot_row = [v / p for v in pivot_row]
        self.rows[r] = pivot_row
        nonzero = [k for k, v in enumerate(pivot_row) if v != 0]
        for i, row in enumerate(self.rows):
            if i != r and row[j] != 0:
                factor = row[j]
                for k in nonzero:
                    row[k] -= factor * pivot_row[k]
        for row in cost_rows:
            if row[j] != 0:
                factor = row[j]
                for k in nonzero:
                    row[k] -= factor * pivot_row[k]
        self.basis[r] = j

    def reduced_costs(self, costs: Mapping[int, Fraction], width: int) -> List[Fraction]:
        row = [ZERO] * width
        for j, c in costs.items():
            row[j] = Fraction(c)
        for i, b in enumerate(self.basis):
            c = costs.get(b, ZERO)
            if c != 0:
                for k, v in enumerate(self.rows[i]):
                    if v != 0:
                        row[k] -= c * v
        return row

    def run(self, cost_row: List[Fraction], allowed: List[int]) -> List[int]:
        """ Bland's rule over the allowed columns until no entering column remains

        @return: allowed columns with zero reduced cost at the optimum
        """
        pivots = 0
        while True:
            basic = set(self.basis)
            entering = next((j for j in allowed if j not in basic and cost_row[j] < 0), None)
            if entering is None:
                logging.debug(f'simplex stage finished after {pivots} pivots')
                return [j for j in allowed if cost_row[j] == 0]
            leaving, best = None, None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                raise UnboundedError(f'objective is unbounded along column {entering}')
            self.pivot(leaving, entering, [cost_row])
            pivots += 1


def solve_vertex_lp(constraints: Sequence[LinearConstraint], objective: Mapping[str, Fraction]) -> BasicSolution:
    """ exact optimum at a vertex of {x ≥ 0 : constraints}

    @param constraints: a list of LinearConstraint over the keys of `objective`
    @param objective: cost per variable (the variables are the keys, ordered ascending)
    @return: BasicSolution of the lexicographically minimal optimum
    """
    variables = sorted(objective)
    index = {e: n for n, e in enumerate(variables)}
    n = len(variables)
    rows, senses, origin = [], [], []
    for c_id, c in enumerate(constraints):
        unknown = set(c.coefficients) - set(index)
        assert not unknown, f'constraint {c.tag} uses unknown variables {sorted(unknown)}'
        row = [ZERO] * n
        for e, a in c.coefficients.items():
            row[index[e]] = Fraction(a)
        rhs = Fraction(c.rhs)
        sense = c.sense
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            sense = '>=' if sense == LE else EQ
        rows.append((row, rhs))
        senses.append(sense)
        origin.append(c_id)

    n_slack = sum(1 for s in senses if s != EQ)
    n_artificial = sum(1 for s in senses if s != LE)
    width = n + n_slack + n_artificial + 1
    slack_col, art_col = n, n + n_slack
    artificial = set(range(n + n_slack, n + n_slack + n_artificial))
    tableau_rows, basis = [], []
    for (row, rhs), sense in zip(rows, senses):
        full = row + [ZERO] * (n_slack + n_artificial) + [rhs]
        if sense == LE:
            full[slack_col] = Fraction(1)
            basis.append(slack_col)
            slack_col += 1
        else:
            if sense == '>=':
                full[slack_col] = Fraction(-1)
                slack_col += 1
            full[art_col] = Fraction(1)
            basis.append(art_col)
            art_col += 1
        tableau_rows.append(full)
    tableau = _Tableau(tableau_rows, basis, origin)

    # phase 1
    if artificial:
        phase1 = tableau.reduced_costs({j: Fraction(1) for j in artificial}, width)
        tableau.run(phase1, list(range(width - 1)))
        if phase1[-1] != 0:
            i = next(i for i, b in enumerate(tableau.basis) if b in artificial and tableau.rows[i][-1] > 0)
            certificate = constraints[tableau.origin[i]]
            raise InfeasibleError(f'infeasible constraint system (phase 1 value {-phase1[-1]})', certificate=certificate)
        # drive zero-valued artificials out of the basis, dropping redundant rows
        for i in reversed(range(len(tableau.rows))):
            if tableau.basis[i] not in artificial:
                continue
            j = next((j for j in range(n + n_slack) if tableau.rows[i][j] != 0), None)
            if j is None:
                del tableau.rows[i], tableau.basis[i], tableau.origin[i]
            else:
                tableau.pivot(i, j, [])
    allowed = list(range(n + n_slack))

    # phase 2: cost first, then each variable in turn on the optimal face
    stage = tableau.reduced_costs({index[e]: Fraction(objective[e]) for e in variables}, width)
    allowed = tableau.run(stage, allowed)
    for k in range(n):
        if not set(allowed) - set(tableau.basis):
            break
        allowed = tableau.run(tableau.reduced_costs({k: Fraction(1)}, width), allowed)

    x = {e: ZERO for e in variables}
    for i, b in enumerate(tableau.basis):
        if b < n:
            x[variables[b]] = tableau.rows[i][-1]
    value = sum((Fraction(objective[e]) * x[e] for e in variables), ZERO)
    tight = [c for c in constraints if c.is_tight(x)]
    return BasicSolution(
        x=x, objective=value, tight=tight, vertex_certificate=vertex_certificate(tight, x),
        constraints=list(constraints))
