""" LP1 over the current multigraph: spanning tree polytope intersected with the matroid polytopes of the degree
constraints, solved exactly by cutting planes. Separation enumerates subsets under configurable thresholds.
"""
import logging
from fractions import Fraction
from typing import Callable, Iterable, List, Mapping, Optional

import sympy

from .exceptions import ConfigurationError, InfeasibleError, InvariantError, MatroidDomainError
from .matroid import Matroid, DirectSum, MATROID_THRESHOLD
from .multigraph import Multigraph
from .simplex import LE, EQ, ConstraintTag, LinearConstraint, BasicSolution, solve_vertex_lp
from .util import powerset, vector_sum

ST_THRESHOLD = 20

__all__ = (
    'ST_THRESHOLD',
    'spanning_tree_constraint',
    'separate_spanning_tree',
    'separate_matroid',
    'solve_lp1',
    'enumerate_tight_st_sets',
    'build_laminar_tight_family',
    'st_rank'
)


def _node_subsets(g: Multigraph, threshold: int, min_size: int = 2):
    if len(g.nodes) > threshold:
        raise ConfigurationError(
            f'{len(g.nodes)} nodes exceed the spanning-tree enumeration threshold {threshold}')
    for s in powerset(g.sorted_nodes(), min_size=min_size):
        yield frozenset(s)


def _set_value(g: Multigraph, x: Mapping[str, Fraction], s: frozenset) -> Fraction:
    return sum((x[f] for f, (a, b, _) in g.edges.items() if a in s and b in s), Fraction(0))


def spanning_tree_constraint(g: Multigraph, s: Iterable, sense: str = LE) -> LinearConstraint:
    """ x(F[s]) (sense) |s| - 1 """
    s = frozenset(s)
    inside = g.edges_within(s)
    if not inside:
        raise InfeasibleError(f'node set {sorted(s)} spans no edge', certificate=None)
    return LinearConstraint(
        coefficients={f: Fraction(1) for f in sorted(inside)}, sense=sense, rhs=Fraction(len(s) - 1),
        tag=ConstraintTag('spanning_tree_set', s))


def _cardinality_constraint(g: Multigraph) -> LinearConstraint:
    return LinearConstraint(
        coefficients={f: Fraction(1) for f in sorted(g.edges)}, sense=EQ, rhs=Fraction(len(g.nodes) - 1),
        tag=ConstraintTag('cardinality'))


def separate_spanning_tree(g: Multigraph,
                           x: Mapping[str, Fraction],
                           threshold: int = ST_THRESHOLD) -> Optional[LinearConstraint]:
    """ most violated spanning tree constraint

    @param g: multigraph
    @param x: point keyed by the edges of g
    @param threshold: [optional] maximum number of nodes for subset enumeration
    @return: violated constraint x(F[S]) ≤ |S|-1 (the cardinality equality when x(F) < |W|-1) or None
    """
    if g.edges and vector_sum(x, g.edges) < len(g.nodes) - 1:
        return _cardinality_constraint(g)
    best, best_violation = None, Fraction(0)
    for s in _node_subsets(g, threshold):
        violation = _set_value(g, x, s) - (len(s) - 1)
        if violation > best_violation:
            best, best_violation = s, violation
    if best is None:
        return None
    return spanning_tree_constraint(g, best)


def _most_violated(n: Matroid, x: Mapping[str, Fraction], threshold: int):
    if isinstance(n, DirectSum):
        chosen, total = frozenset(), Fraction(0)
        for part in n.parts:
            c, violation = _most_violated(part, x, threshold)
            if c is not None:
                chosen, total = chosen | c, total + violation
        return (chosen, total) if chosen else (None, Fraction(0))
    if len(n.ground) > threshold:
        raise ConfigurationError(
            f'ground set of size {len(n.ground)} exceeds the matroid enumeration threshold {threshold}')
    best, best_violation = None, Fraction(0)
    for c in powerset(n.ground, min_size=1):
        violation = vector_sum(x, c) - n.rank(c)
        if violation > best_violation:
            best, best_violation = frozenset(c), violation
    return best, best_violation


def separate_matroid(n: Matroid,
                     x_restricted: Mapping[str, Fraction],
                     threshold: int = MATROID_THRESHOLD,
                     owner=None) -> Optional[LinearConstraint]:
    """ most violated rank constraint x(C) ≤ r(C) of the matroid polytope

    @param n: matroid
    @param x_restricted: point keyed by the ground set of n
    @param threshold: [optional] maximum ground size for subset enumeration (checked per direct-sum part)
    @param owner: [optional] node id recorded in the constraint tag
    @return: violated constraint or None
    """
    if set(x_restricted) != set(n.ground_set):
        raise MatroidDomainError(f'point keys {sorted(x_restricted)} differ from the ground set {list(n.ground)}')
    c, _ = _most_violated(n, x_restricted, threshold)
    if c is None:
        return None
    return LinearConstraint(
        coefficients={e: Fraction(1) for e in sorted(c)}, sense=LE, rhs=Fraction(n.rank(c)),
        tag=ConstraintTag('matroid_set', (owner, c)))


def _seed_constraints(constraints: Mapping[int, Matroid]) -> List[LinearConstraint]:
    """ full-ground rank constraint of every part that is not free on its ground """
    seeds = []
    for w in sorted(constraints):
        m = constraints[w]
        for part in (m.parts if isinstance(m, DirectSum) else [m]):
            if part.ground and part.rank() < len(part.ground):
                seeds.append(LinearConstraint(
                    coefficients={e: Fraction(1) for e in part.ground}, sense=LE, rhs=Fraction(part.rank()),
                    tag=ConstraintTag('matroid_set', (w, part.ground_set))))
    return seeds


def solve_lp1(g: Multigraph,
              constraints: Mapping[int, Matroid],
              fixed_sets: Iterable[frozenset],
              costs: Mapping[str, Fraction],
              st_threshold: int = ST_THRESHOLD,
              matroid_threshold: int = MATROID_THRESHOLD,
              on_cut: Callable[[LinearConstraint], None] = None) -> BasicSolution:
    """ basic optimal solution of LP1 by cutting planes

    @param g: current multigraph (connected)
    @param constraints: a dictionary mapping node to its degree constraint N_w (ground δ(w))
    @param fixed_sets: node sets whose spanning tree constraints are pinned to equality
    @param costs: edge costs (keys ⊇ edges of g)
    @param st_threshold: [optional] node threshold of spanning tree separation
    @param matroid_threshold: [optional] ground threshold of matroid separation
    @param on_cut: [optional] called with every cut added to the relaxation
    @return: BasicSolution with `rounds` and `cuts` filled
    """
    if not g.edges:
        if len(g.nodes) <= 1:
            return BasicSolution(x={}, objective=Fraction(0), tight=[], vertex_certificate=True)
        raise InfeasibleError(f'{len(g.nodes)} nodes but no edges')
    for w, m in constraints.items():
        assert m.ground_set == g.delta(w), f'degree constraint of node {w} does not have ground δ(w)'

    relaxation = [_cardinality_constraint(g)]
    relaxation += [LinearConstraint({f: Fraction(1)}, LE, Fraction(1), ConstraintTag('bound', f))
                   for f in sorted(g.edges)]
    for s in sorted({frozenset(s) for s in fixed_sets if len(s) >= 2}, key=lambda s: (len(s), sorted(s))):
        relaxation.append(spanning_tree_constraint(g, s, sense=EQ))
    relaxation += _seed_constraints(constraints)
    seen = {c.tag for c in relaxation}
    objective = {f: Fraction(costs[f]) for f in g.edges}

    rounds, cuts = 0, 0
    while True:
        rounds += 1
        solution = solve_vertex_lp(relaxation, objective)
        x = solution.x
        new = []
        st_cut = separate_spanning_tree(g, x, threshold=st_threshold)
        if st_cut is not None:
            new.append(st_cut)
        for w in sorted(constraints):
            m = constraints[w]
            cut = separate_matroid(m, {e: x[e] for e in m.ground}, threshold=matroid_threshold, owner=w)
            if cut is not None:
                new.append(cut)
        if not new:
            break
        for cut in new:
            if cut.tag in seen:
                raise InvariantError(f'separated constraint {cut.tag} is already part of the relaxation')
            seen.add(cut.tag)
            relaxation.append(cut)
            cuts += 1
            logging.debug(f'cut {cut.tag.kind} {cut.tag.to_dict()["key"]} (violation {cut.violation(x)})')
            if on_cut is not None:
                on_cut(cut)
    solution.rounds = rounds
    solution.cuts = cuts
    logging.debug(f'LP1 solved after {rounds} rounds ({cuts} cuts): objective {solution.objective}')
    return solution


def enumerate_tight_st_sets(g: Multigraph,
                            x: Mapping[str, Fraction],
                            threshold: int = ST_THRESHOLD) -> List[frozenset]:
    """ all node sets S with |S| ≥ 2 and x(F[S]) = |S| - 1 """
    return [s for s in _node_subsets(g, threshold) if _set_value(g, x, s) == len(s) - 1]


def st_rank(g: Multigraph, family: Iterable[frozenset]) -> int:
    """ rank of the characteristic vectors χ(F[S]) of a family of node sets """
    edges = sorted(g.edges)
    rows = []
    for s in family:
        inside = g.edges_within(s)
        rows.append([1 if f in inside else 0 for f in edges])
    if not rows or not edges:
        return 0
    return sympy.Matrix(rows).rank()


def _crosses(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not a <= b and not b <= a


def build_laminar_tight_family(tight_sets: Iterable[frozenset],
                               g: Multigraph,
                               x: Mapping[str, Fraction]) -> List[frozenset]:
    """ laminar family of tight sets spanning every input set, by uncrossing

    A set outside the current span that crosses a member A is replaced by A∩S or A∪S, whichever is outside the
    span; the replacement crosses fewer members, so the insertion terminates.

    @param tight_sets: node sets tight for x
    @param g: multigraph
    @param x: point in the spanning tree polytope of g with positive entries
    @return: laminar family (in insertion order)
    """
    def is_tight(s):
        return len(s) < 2 or _set_value(g, x, s) == len(s) - 1

    family = []
    for t in sorted({frozenset(s) for s in tight_sets}, key=lambda s: (len(s), sorted(s))):
        if not is_tight(t):
            raise InvariantError(f'node set {sorted(t)} is not tight')
        candidate = t
        while len(candidate) >= 2 and st_rank(g, family + [candidate]) > st_rank(g, family):
            crossing = next((a for a in family if _crosses(a, candidate)), None)
            if crossing is None:
                family.append(candidate)
                break
            meet, join = candidate & crossing, candidate | crossing
            if not (is_tight(meet) and is_tight(join)):
                raise InvariantError(
                    f'uncrossing {sorted(candidate)} and {sorted(crossing)} gave a non-tight set')
            if len(meet) >= 2 and st_rank(g, family + [meet]) > st_rank(g, family):
                candidate = meet
            else:
                candidate = join
    return family
