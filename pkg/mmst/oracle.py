""" Brute-force ground truth and diagnostics for desk-scale instances """
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional

import networkx as nx
from networkx.utils import UnionFind

from .exceptions import ConfigurationError
from .matroid import Matroid, ConstraintDecomposition, MATROID_THRESHOLD
from .lp_relaxation import separate_matroid
from .multigraph import Multigraph
from .util import format_rational, powerset, vector_sum

ORACLE_NODE_THRESHOLD = 10
ORACLE_EDGE_THRESHOLD = 20
AUDIT_THRESHOLD = 12
VIOLATION_BOUND = 8

__all__ = (
    'ORACLE_NODE_THRESHOLD',
    'ORACLE_EDGE_THRESHOLD',
    'AUDIT_THRESHOLD',
    'VIOLATION_BOUND',
    'OracleReport',
    'SVertexSet',
    'enumerate_spanning_trees',
    'brute_force_opt',
    'classical_mst_cost',
    'verify_solution',
    'compute_S',
    'laminar_bound',
    'check_laminar_bounds',
    'tight_chain',
    'check_chain_bound',
    'audit_removal'
)


def _check(passed: bool, witness: str = None) -> Dict:
    return {'passed': bool(passed), 'witness': None if passed else witness}


def _skipped(reason: str) -> Dict:
    return {'passed': True, 'witness': None, 'skipped': reason}


@dataclass
class OracleReport:
    lp_value: Fraction
    integral_opt: Optional[Fraction]
    tree_cost: Fraction
    max_violation: int
    checks: Dict[str, Dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c['passed'] for c in self.checks.values())

    @property
    def failed(self) -> List[str]:
        return [k for k, c in sorted(self.checks.items()) if not c['passed']]

    def to_dict(self) -> Dict:
        return {
            'lp_value': format_rational(self.lp_value),
            'integral_opt': None if self.integral_opt is None else format_rational(self.integral_opt),
            'tree_cost': format_rational(self.tree_cost),
            'max_violation': self.max_violation,
            'passed': self.passed,
            'checks': self.checks
        }


@dataclass(frozen=True)
class SVertexSet:
    """ degree-2 nodes none of whose incident edge subsets has value exactly 1 """
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __contains__(self, w):
        return w in self.members

    def __iter__(self):
        return iter(sorted(self.members))


def _check_oracle_size(g: Multigraph, node_threshold: int, edge_threshold: int):
    if len(g.nodes) > node_threshold or len(g.edges) > edge_threshold:
        raise ConfigurationError(
            f'{len(g.nodes)} nodes / {len(g.edges)} edges exceed the oracle threshold '
            f'{node_threshold} / {edge_threshold}')


def enumerate_spanning_trees(g: Multigraph,
                             node_threshold: int = ORACLE_NODE_THRESHOLD,
                             edge_threshold: int = ORACLE_EDGE_THRESHOLD):
    """ every spanning tree of g exactly once, as frozensets of edge ids """
    _check_oracle_size(g, node_threshold, edge_threshold)
    for candidate in combinations(sorted(g.edges), len(g.nodes) - 1):
        components = UnionFind(g.nodes)
        for f in candidate:
            a, b = g.endpoints(f)
            if components[a] == components[b]:
                break
            components.union(a, b)
        else:
            yield frozenset(candidate)


def brute_force_opt(instance,
                    node_threshold: int = ORACLE_NODE_THRESHOLD,
                    edge_threshold: int = ORACLE_EDGE_THRESHOLD) -> Optional[Fraction]:
    """ minimum cost of a spanning tree whose incidence at every vertex is independent, None if there is none """
    best = None
    incident = {v: instance.incident(v) for v in instance.vertices}
    for tree in enumerate_spanning_trees(instance.graph(), node_threshold, edge_threshold):
        if all(instance.constraints[v].is_independent(tree & incident[v]) for v in instance.vertices):
            cost = vector_sum(instance.costs, tree)
            if best is None or cost < best:
                best = cost
    return best


def classical_mst_cost(g: Multigraph, costs: Mapping[str, Fraction]) -> Fraction:
    """ minimum spanning tree value ignoring degree constraints (Kruskal on the multigraph) """
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.nodes)
    for f, (a, b, _) in g.edges.items():
        graph.add_edge(a, b, key=f, weight=Fraction(costs[f]))
    tree = nx.minimum_spanning_tree(graph, weight='weight', algorithm='kruskal')
    return sum((d['weight'] for _, _, d in tree.edges(data=True)), Fraction(0))


def verify_solution(instance,
                    result,
                    node_threshold: int = ORACLE_NODE_THRESHOLD,
                    edge_threshold: int = ORACLE_EDGE_THRESHOLD) -> OracleReport:
    """ check a solver result against the instance and, at desk scale, against the integral optimum

    @param instance: Instance
    @param result: SolveResult (tree, cost, violations, lp_initial)
    @param node_threshold: [optional] node limit of the brute-force optimum
    @param edge_threshold: [optional] edge limit of the brute-force optimum
    @return: OracleReport
    """
    checks = {}
    tree = list(result.tree)
    unknown = sorted(f for f in tree if f not in instance.edges)
    graph = nx.MultiGraph()
    graph.add_nodes_from(instance.vertices)
    for f in tree:
        if f in instance.edges:
            graph.add_edge(*instance.edges[f], key=f)
    if unknown:
        checks['tree_spanning'] = _check(False, f'unknown edges {unknown}')
    elif len(set(tree)) != len(tree):
        checks['tree_spanning'] = _check(False, 'duplicated tree edges')
    else:
        checks['tree_spanning'] = _check(
            nx.is_tree(graph), f'{len(tree)} edges on {len(instance.vertices)} vertices do not form a spanning tree')

    known = frozenset(f for f in tree if f in instance.edges)
    cost = vector_sum(instance.costs, known)
    checks['cost_consistency'] = _check(
        cost == result.cost, f'reported cost {result.cost} but the tree edges sum to {cost}')
    checks['cost_vs_lp'] = _check(
        result.cost <= result.lp_initial, f'cost {result.cost} exceeds the initial LP value {result.lp_initial}')

    violations = {v: instance.constraints[v].min_removals_to_independent(known & instance.incident(v))
                  for v in instance.vertices}
    mismatch = sorted(v for v in instance.vertices if result.violations.get(v) != violations[v])
    checks['violation_consistency'] = _check(
        not mismatch and set(result.violations) == set(violations),
        f'reported violations differ at {mismatch or sorted(set(result.violations) ^ set(violations))}')
    max_violation = max(violations.values(), default=0)
    checks['violation_bound'] = _check(
        max_violation <= VIOLATION_BOUND,
        f'vertex {max(violations, key=violations.get) if violations else None} violated by {max_violation}')

    opt = None
    g = instance.graph()
    if len(g.nodes) > node_threshold or len(g.edges) > edge_threshold:
        reason = f'instance larger than the oracle threshold {node_threshold} / {edge_threshold}'
        checks['cost_vs_opt'] = _skipped(reason)
        checks['lp_vs_opt'] = _skipped(reason)
    else:
        opt = brute_force_opt(instance, node_threshold, edge_threshold)
        if opt is None:
            checks['cost_vs_opt'] = _skipped('no spanning tree respects every degree constraint')
            checks['lp_vs_opt'] = _skipped('no spanning tree respects every degree constraint')
        else:
            checks['cost_vs_opt'] = _check(result.cost <= opt, f'cost {result.cost} exceeds the optimum {opt}')
            checks['lp_vs_opt'] = _check(
                result.lp_initial <= opt, f'LP value {result.lp_initial} exceeds the optimum {opt}')

    report = OracleReport(
        lp_value=result.lp_initial, integral_opt=opt, tree_cost=result.cost, max_violation=max_violation,
        checks=checks)
    if not report.passed:
        logging.warning(f'verification failed: {report.failed}')
    return report


def compute_S(g: Multigraph, y: Mapping[str, Fraction]) -> SVertexSet:
    members = set()
    for w in g.nodes:
        delta = sorted(g.delta(w))
        if len(delta) != 2:
            continue
        f1, f2 = delta
        if y[f1] != 1 and y[f2] != 1 and y[f1] + y[f2] != 1:
            members.add(w)
    return SVertexSet(frozenset(members))


def laminar_bound(g: Multigraph, y: Mapping[str, Fraction], q: Iterable = None) -> int:
    """ |W| - 1 - ⌊|S(G', y')| / 2⌋ with G' the subgraph induced by the nodes outside Q """
    if q is None:
        from .adaptive_rounding import compute_Q
        q = compute_Q(g, y)
    reduced = g.induced_subgraph(g.nodes - set(q))
    s = compute_S(reduced, {f: y[f] for f in reduced.edges})
    return len(g.nodes) - 1 - len(s) // 2


def check_laminar_bounds(g: Multigraph,
                         y: Mapping[str, Fraction],
                         laminar_family: Iterable[frozenset],
                         q: Iterable = None) -> bool:
    """ an independent laminar family of tight sets is no larger than `laminar_bound` """
    if len(g.nodes) <= 1:
        return True
    family = list(laminar_family)
    bound = laminar_bound(g, y, q)
    if len(family) > bound:
        logging.error(f'laminar family of {len(family)} tight sets exceeds the bound {bound}')
        return False
    return True


def tight_chain(n: Matroid, x_restricted: Mapping[str, Fraction], threshold: int = MATROID_THRESHOLD) -> List[frozenset]:
    """ longest chain of non-empty tight sets x(C) = r(C)

    Tight sets are closed under union and intersection, so they form a graded lattice and extending by a smallest
    tight superset yields a chain of maximum length.
    """
    if len(n.ground) > threshold:
        raise ConfigurationError(f'ground set of size {len(n.ground)} exceeds the chain threshold {threshold}')
    tight = [frozenset(c) for c in powerset(n.ground, min_size=1) if vector_sum(x_restricted, c) == n.rank(c)]
    chain, current = [], frozenset()
    while True:
        bigger = next((c for c in tight if current < c), None)
        if bigger is None:
            return chain
        chain.append(bigger)
        current = bigger


def check_chain_bound(n: Matroid, x_restricted: Mapping[str, Fraction], threshold: int = MATROID_THRESHOLD) -> bool:
    chain = tight_chain(n, x_restricted, threshold)
    total = vector_sum(x_restricted, n.ground)
    if len(chain) > total:
        logging.error(f'tight chain of length {len(chain)} exceeds x(δ(w)) = {total}')
        return False
    return True


def audit_removal(old: ConstraintDecomposition,
                  new: ConstraintDecomposition,
                  u: Iterable[str],
                  x: Mapping[str, Fraction],
                  threshold: int = AUDIT_THRESHOLD,
                  full: bool = True,
                  matroid_threshold: int = MATROID_THRESHOLD) -> Dict[str, Dict]:
    """ check the guarantees of an edge removal from a degree constraint

    @param old: decomposition before the removal
    @param new: decomposition after the removal
    @param u: removed edges
    @param x: LP point the removal was computed from
    @param threshold: [optional] maximum part ground size for the enumeration checks
    @param full: [optional] run the enumeration checks (otherwise only feasibility of x)
    @param matroid_threshold: [optional] enumeration threshold of the feasibility check
    @return: a dictionary mapping check name to {'passed', 'witness'}
    """
    u = frozenset(u)
    checks = {}
    if full:
        same = set(old.parts) == set(new.parts) and all(
            old.parts[v].ground_set == new.parts[v].ground_set for v in old.parts)
        checks['disjoint_parts'] = _check(same, f'parts {sorted(old.parts)} became {sorted(new.parts)}')

        not_free = sorted(f for f in u if not new.parts[new.part_of(f)].is_free_element(f))
        checks['free_elements'] = _check(not not_free, f'removed edges {not_free} are not free')

        bound = math.ceil(len(u) - vector_sum(x, u))
        witness = None
        for v, part in new.parts.items():
            if not part.ground_set & u:
                continue
            if len(part.ground) > threshold:
                logging.debug(f'independence transform of {v} not audited: ground size {len(part.ground)}')
                continue
            for independent in part.independent_sets(threshold):
                removals = old.parts[v].min_removals_to_independent(independent)
                if removals > bound:
                    witness = f'{sorted(independent)} at {v} needs {removals} > {bound} removals'
                    break
            if witness is not None:
                break
        checks['independence_transform'] = _check(witness is None, witness)

    m = new.matroid()
    cut = separate_matroid(m, {e: x[e] for e in m.ground}, threshold=matroid_threshold)
    checks['still_feasible'] = _check(
        cut is None, None if cut is None else f'x({sorted(cut.coefficients)}) > {cut.rhs}')
    return checks
