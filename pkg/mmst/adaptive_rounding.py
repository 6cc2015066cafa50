""" Iterative rounding with degree adaptation for minimum spanning trees under matroidal degree constraints.

Every iteration solves LP1 on the contracted multigraph, deletes 0-edges, contracts 1-edges, pins all tight spanning
tree sets, and relaxes degree constraints (type A: edges still in both constraints, type B: contained edges away from
Q) whenever the removed edges have slack |U| - x(U) at most 4. The returned tree violates every degree constraint by
at most 8 units and costs no more than the initial LP value.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Set, Tuple

import networkx as nx
import numpy as np

from .exceptions import ConfigurationError, InfeasibleError, InvariantError, StuckError
from .lp_relaxation import (
    ST_THRESHOLD, solve_lp1, separate_matroid, enumerate_tight_st_sets, build_laminar_tight_family
)
from .matroid import (
    Matroid, ConstraintDecomposition, UniformMatroid, LoopExtension, FreeMatroid, MATROID_THRESHOLD,
    direct_sum, matroid_union, contract_matroid
)
from .multigraph import Multigraph
from .oracle import (
    ORACLE_NODE_THRESHOLD, ORACLE_EDGE_THRESHOLD, AUDIT_THRESHOLD, audit_removal, check_chain_bound,
    check_laminar_bounds
)
from .util import format_rational, vector_sum

SLACK_THRESHOLD = 4
DEFAULT_CONFIG = dict(
    st_threshold=ST_THRESHOLD, matroid_threshold=MATROID_THRESHOLD, oracle_node_threshold=ORACLE_NODE_THRESHOLD,
    oracle_edge_threshold=ORACLE_EDGE_THRESHOLD, slack_threshold=SLACK_THRESHOLD, seed=0, debug_asserts=False,
    property_audit_threshold=AUDIT_THRESHOLD, max_iterations=None
)

__all__ = (
    'SLACK_THRESHOLD',
    'DEFAULT_CONFIG',
    'AlgoState',
    'AdaptationRecord',
    'SolveResult',
    'DegreeBoundedMST',
    'run',
    'delete_zero_edges',
    'contract_one_edges',
    'compute_Q',
    'fix_tight_st',
    'classify_edges',
    'type_a_candidate',
    'type_b_candidate',
    'apply_type_a',
    'apply_type_b',
    'remove_edges_from_degree_constraint',
    'tree_violation',
    'assert_progress'
)


@dataclass
class AdaptationRecord:
    kind: str
    node: int
    removed: frozenset
    slack: Fraction
    affected_vertices: frozenset
    iteration: int = 0

    def __post_init__(self):
        assert self.kind in ('A', 'B'), f'unknown adaptation type {self.kind}'
        assert self.removed, 'adaptation removes no edge'

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'node': self.node, 'removed': sorted(self.removed),
                'slack': format_rational(self.slack), 'affected_vertices': sorted(self.affected_vertices),
                'iteration': self.iteration}


@dataclass
class AlgoState:
    h: Multigraph
    decomposition: Dict[int, ConstraintDecomposition]
    fixed_sets: Set[frozenset] = field(default_factory=set)
    chosen: List[str] = field(default_factory=list)
    counters: Dict[str, List[int]] = field(default_factory=dict)
    iteration: int = 0
    trace: List[Dict] = field(default_factory=list)
    adaptations: List[AdaptationRecord] = field(default_factory=list)

    @classmethod
    def initial(cls, instance) -> 'AlgoState':
        """ H = G and N_v = M_v """
        h = instance.graph()
        decomposition = {}
        for v in instance.vertices:
            w = h.vertex_map[v]
            if instance.constraints[v].ground_set != h.delta(w):
                raise ConfigurationError(f'degree constraint of {v} does not have the incident edges as ground set')
            decomposition[w] = ConstraintDecomposition({v: instance.constraints[v]})
        return cls(h=h, decomposition=decomposition, counters={v: [0, 0] for v in instance.vertices})

    def constraint(self, w) -> Matroid:
        return self.decomposition[w].matroid()

    def constraints(self) -> Dict[int, Matroid]:
        return {w: self.constraint(w) for w in self.h.nodes}

    def projected_fixed_sets(self) -> List[frozenset]:
        """ fixed sets mapped onto the current nodes, dropping those that collapsed into one node """
        projected = {self.h.node_set_of(s) for s in self.fixed_sets}
        return sorted((s for s in projected if len(s) >= 2), key=lambda s: (len(s), sorted(s)))

    def event(self, name: str, **payload):
        self.trace.append({'event': name, 'iteration': self.iteration, **payload})

    def dump(self) -> Dict:
        """ JSON-able snapshot used in invariant failures """
        return {
            'iteration': self.iteration,
            'nodes': {str(w): sorted(self.h.members[w]) for w in self.h.sorted_nodes()},
            'edges': {f: list(self.h.endpoints(f)) for f in sorted(self.h.edges)},
            'decomposition': {str(w): self.decomposition[w].describe() for w in self.h.sorted_nodes()},
            'fixed_sets': sorted(sorted(s) for s in self.fixed_sets),
            'chosen': list(self.chosen),
            'counters': {v: list(c) for v, c in sorted(self.counters.items())}
        }


@dataclass
class SolveResult:
    tree: List[str]
    cost: Fraction
    violations: Dict[str, int]
    lp_initial: Fraction
    trace: List[Dict] = field(default_factory=list)
    adaptations: List[AdaptationRecord] = field(default_factory=list)
    iterations: int = 0
    config: Dict = field(default_factory=dict)

    @property
    def max_violation(self) -> int:
        return max(self.violations.values(), default=0)

    def to_dict(self, include_trace: bool = False) -> Dict:
        result = {
            'status': 'optimal',
            'tree': sorted(self.tree),
            'cost': format_rational(self.cost),
            'violations': dict(sorted(self.violations.items())),
            'lp_initial': format_rational(self.lp_initial),
            'iterations': self.iterations,
            'adaptations': [a.to_dict() for a in self.adaptations],
            'config': self.config
        }
        if include_trace:
            result['trace'] = self.trace
        return result


def _fail(state: AlgoState, error_class, message: str):
    logging.error(f'{message}\n{state.dump()}')
    raise error_class(message, state=state.dump())


def delete_zero_edges(state: AlgoState, x: Mapping[str, Fraction]) -> List[str]:
    """ delete every edge with x(f) = 0 from H and from both endpoint constraints """
    deleted = [f for f in sorted(state.h.edges) if x[f] == 0]
    for f in deleted:
        for w in state.h.endpoints(f):
            state.decomposition[w] = state.decomposition[w].delete(f)
        state.h.delete_edge(f)
        state.event('delete', edge=f)
        logging.debug(f'deleted {f}')
    return deleted


def contract_one_edges(state: AlgoState, x: Mapping[str, Fraction]) -> List[str]:
    """ contract every edge with x(f) = 1; N_w of the merged node is the direct sum of N_w1 / f and N_w2 / f

    @return: contracted edge ids
    """
    if any(x[f] == 0 for f in state.h.edges):
        raise InvariantError('0-edges must be deleted before contraction')
    contracted = []

    def on_loop(g):
        if x[g] != 0:
            _fail(state, InvariantError, f'edge {g} with x = {x[g]} became a self-loop')

    for f in sorted(state.h.edges):
        if f not in state.h.edges or x[f] != 1:
            continue
        w1, w2 = state.h.endpoints(f)
        original = state.h.edges[f][2]
        merged_parts = state.decomposition.pop(w1).contract(f).merge(state.decomposition.pop(w2).contract(f))
        w = state.h.contract_edge(f, on_loop=on_loop)
        state.decomposition[w] = merged_parts
        state.chosen.append(original)
        contracted.append(f)
        state.event('contract', edge=f, node=w)
        logging.debug(f'contracted {f} into node {w}')
    return contracted


def _q_in_order(g: Multigraph, x: Mapping[str, Fraction], order: List[int]) -> frozenset:
    q = set()
    while True:
        inside = g.edges_within(g.nodes - q)
        w = next((w for w in order if w not in q and vector_sum(x, g.delta(w) & inside) == 1), None)
        if w is None:
            return frozenset(q)
        q.add(w)


def compute_Q(g: Multigraph, x: Mapping[str, Fraction], rng: np.random.Generator = None) -> frozenset:
    """ nodes added while some node outside Q has x(δ(w) ∩ F[W ∖ Q]) = 1

    @param g: multigraph without 1-edges
    @param x: LP point keyed by (a superset of) the edges of g
    @param rng: [optional] generator of a random scanning order the result is compared against
    @return: Q as a frozenset of nodes
    """
    assert all(x[f] != 1 for f in g.edges), 'Q is defined on a graph without 1-edges'
    q = _q_in_order(g, x, g.sorted_nodes())
    if rng is not None:
        order = [int(w) for w in rng.permutation(g.sorted_nodes())]
        other = _q_in_order(g, x, order)
        if other != q:
            logging.warning(f'Q depends on the scanning order: {sorted(q)} vs {sorted(other)} for {order}')
    return q


def fix_tight_st(state: AlgoState, x: Mapping[str, Fraction], threshold: int = ST_THRESHOLD) -> List[frozenset]:
    """ pin every tight spanning tree set of the current graph (stored as original vertex sets)

    @return: newly fixed sets
    """
    added = []
    for s in enumerate_tight_st_sets(state.h, x, threshold=threshold):
        vertices = state.h.vertices_of(s)
        if vertices not in state.fixed_sets:
            state.fixed_sets.add(vertices)
            added.append(vertices)
            state.event('fix', vertices=sorted(vertices))
    return added


def classify_edges(state: AlgoState) -> Tuple[frozenset, frozenset, frozenset]:
    """ (F0, F1, F2): edges contained in none, one or both endpoint constraints """
    groups = ([], [], [])
    for f in sorted(state.h.edges):
        count = sum(state.decomposition[w].is_contained(f) for w in state.h.endpoints(f))
        groups[count].append(f)
    return tuple(frozenset(g) for g in groups)


def type_a_candidate(state: AlgoState, w) -> frozenset:
    """ U = δ(w) ∩ F2 """
    h = state.h
    return frozenset(
        f for f in h.delta(w)
        if state.decomposition[w].is_contained(f) and state.decomposition[h.other_endpoint(f, w)].is_contained(f))


def type_b_candidate(state: AlgoState, w, q: frozenset) -> frozenset:
    """ U = contained edges of δ(w) with no endpoint in Q """
    if w in q:
        return frozenset()
    h = state.h
    return frozenset(
        f for f in h.delta(w) if state.decomposition[w].is_contained(f) and h.other_endpoint(f, w) not in q)


def _slack(u: frozenset, x: Mapping[str, Fraction]) -> Fraction:
    return len(u) - vector_sum(x, u)


def _adaptable(candidates, x: Mapping[str, Fraction], slack_threshold) -> bool:
    return any(u and _slack(u, x) <= slack_threshold for u in candidates)


def remove_edges_from_degree_constraint(state: AlgoState,
                                        w,
                                        u: frozenset,
                                        x: Mapping[str, Fraction],
                                        audit: bool = False,
                                        audit_threshold: int = AUDIT_THRESHOLD,
                                        matroid_threshold: int = MATROID_THRESHOLD) -> ConstraintDecomposition:
    """ make the edges `u` free elements of N_w

    Each part N_i on S_i with U_i = S_i ∩ u non-empty becomes ((M1 ∨ N_i) / U_i) ⊕ Free(U_i), where M1 is the
    uniform matroid of rank |U_i| - ⌊x(U_i)⌋ on U_i extended by the loops S_i ∖ U_i.

    @param state: solver state
    @param w: node
    @param u: edges of δ(w) to remove
    @param x: current LP point
    @param audit: [optional] also run the enumeration checks of the removal
    @param audit_threshold: [optional] part ground limit of the enumeration checks
    @param matroid_threshold: [optional] enumeration threshold of the union and the feasibility check
    @return: the new decomposition of N_w
    """
    u = frozenset(u)
    old = state.decomposition[w]
    assert u <= state.h.delta(w), f'{sorted(u - state.h.delta(w))} are not incident to node {w}'
    n_w = old.matroid()
    cut = separate_matroid(n_w, {f: x[f] for f in n_w.ground_set}, threshold=matroid_threshold, owner=w)
    if cut is not None:
        c = sorted(cut.coefficients)
        _fail(state, InvariantError,
              f'x is outside the polytope of N_{w}: x({c}) = {format_rational(vector_sum(x, c))} > {cut.rhs}')
    new_parts = {}
    for v, part in old.parts.items():
        u_i = part.ground_set & u
        if not u_i:
            continue
        m1 = LoopExtension(UniformMatroid(u_i, len(u_i) - math.floor(vector_sum(x, u_i))), part.ground_set - u_i)
        m2 = matroid_union(m1, part, threshold=matroid_threshold)
        m3 = contract_matroid(m2, u_i)
        new_parts[v] = direct_sum([m3, FreeMatroid(u_i)])
    new = old.replace(new_parts)
    checks = audit_removal(old, new, u, x, threshold=audit_threshold, full=audit, matroid_threshold=matroid_threshold)
    failed = sorted(k for k, c in checks.items() if not c['passed'])
    if failed:
        _fail(state, InvariantError,
              f'removal of {sorted(u)} at node {w} fails {failed}: {[checks[k]["witness"] for k in failed]}')
    state.decomposition[w] = new
    return new


def _adapt(state: AlgoState, kind: str, w, u: frozenset, x: Mapping[str, Fraction], config: Dict) -> AdaptationRecord:
    affected = frozenset(v for v, part in state.decomposition[w].parts.items() if part.ground_set & u)
    slack = _slack(u, x)
    remove_edges_from_degree_constraint(
        state, w, u, x, audit=config['debug_asserts'], audit_threshold=config['property_audit_threshold'],
        matroid_threshold=config['matroid_threshold'])
    index = 0 if kind == 'A' else 1
    for v in sorted(affected):
        state.counters[v][index] += 1
        if state.counters[v][index] > 1:
            _fail(state, InvariantError, f'vertex {v} received a second type {kind} adaptation')
    record = AdaptationRecord(
        kind=kind, node=w, removed=u, slack=slack, affected_vertices=affected, iteration=state.iteration)
    state.adaptations.append(record)
    state.event('adapt', adaptation=record.to_dict())
    logging.debug(f'type {kind} adaptation at node {w}: removed {sorted(u)} (slack {slack})')
    return record


def apply_type_a(state: AlgoState, x: Mapping[str, Fraction], config: Dict = None) -> List[AdaptationRecord]:
    """ scan nodes in ascending id and relax δ(w) ∩ F2 when its slack is at most the threshold """
    config = {**DEFAULT_CONFIG, **(config or {})}
    records = []
    for w in state.h.sorted_nodes():
        u = type_a_candidate(state, w)
        if u and _slack(u, x) <= config['slack_threshold']:
            records.append(_adapt(state, 'A', w, u, x, config))
    return records


def apply_type_b(state: AlgoState,
                 x: Mapping[str, Fraction],
                 q: frozenset,
                 config: Dict = None) -> List[AdaptationRecord]:
    """ scan nodes outside Q in ascending id and relax the contained edges away from Q """
    config = {**DEFAULT_CONFIG, **(config or {})}
    records = []
    for w in state.h.sorted_nodes():
        u = type_b_candidate(state, w, q)
        if u and _slack(u, x) <= config['slack_threshold']:
            records.append(_adapt(state, 'B', w, u, x, config))
    return records


def tree_violation(m_v: Matroid, tree_edges_at_v) -> int:
    return m_v.min_removals_to_independent(tree_edges_at_v)


def assert_progress(state: AlgoState,
                    x: Mapping[str, Fraction],
                    q: frozenset,
                    slack_threshold: Fraction = SLACK_THRESHOLD):
    """ with more than one node and no type B candidate, F2 is non-empty and some type A candidate exists """
    if len(state.h.nodes) <= 1:
        return
    _, _, f2 = classify_edges(state)
    if not f2:
        _fail(state, StuckError, 'no edge is contained in both endpoint constraints')
    if not _adaptable([type_a_candidate(state, w) for w in state.h.sorted_nodes()], x, slack_threshold):
        _fail(state, StuckError, f'neither a type A nor a type B adaptation applies (Q = {sorted(q)})')


class DegreeBoundedMST:
    """ minimum spanning tree under matroidal degree constraints by iterative rounding """

    def __init__(self,
                 st_threshold: int = ST_THRESHOLD,
                 matroid_threshold: int = MATROID_THRESHOLD,
                 oracle_node_threshold: int = ORACLE_NODE_THRESHOLD,
                 oracle_edge_threshold: int = ORACLE_EDGE_THRESHOLD,
                 slack_threshold: int = SLACK_THRESHOLD,
                 seed: int = 0,
                 debug_asserts: bool = False,
                 property_audit_threshold: int = AUDIT_THRESHOLD,
                 max_iterations: int = None,
                 log_file: str = None):
        """ minimum spanning tree under matroidal degree constraints

        @param st_threshold: node limit of spanning tree set enumeration
        @param matroid_threshold: ground limit of matroid subset enumeration
        @param oracle_node_threshold: node limit of the brute-force oracle
        @param oracle_edge_threshold: edge limit of the brute-force oracle
        @param slack_threshold: maximum slack |U| - x(U) of an adaptation (the violation bound assumes 4)
        @param seed: seed of the random Q scanning order
        @param debug_asserts: run every enumeration-based runtime check
        @param property_audit_threshold: part ground limit of the removal audit
        @param max_iterations: [optional] raise StuckError after this many iterations
        @param log_file: [optional] path of an additional log file
        """
        self.config = dict(
            st_threshold=st_threshold, matroid_threshold=matroid_threshold,
            oracle_node_threshold=oracle_node_threshold, oracle_edge_threshold=oracle_edge_threshold,
            slack_threshold=slack_threshold, seed=seed, debug_asserts=debug_asserts,
            property_audit_threshold=property_audit_threshold, max_iterations=max_iterations
        )
        for k in ('st_threshold', 'matroid_threshold', 'oracle_node_threshold', 'oracle_edge_threshold',
                  'property_audit_threshold'):
            if not isinstance(self.config[k], int) or self.config[k] < 1:
                raise ConfigurationError(f'{k} must be a positive integer, got {self.config[k]!r}')
        if slack_threshold < 0:
            raise ConfigurationError(f'slack_threshold must be non-negative, got {slack_threshold}')
        if slack_threshold != SLACK_THRESHOLD:
            logging.warning(f'slack threshold {slack_threshold}: the violation bound of 8 assumes {SLACK_THRESHOLD}')
        logging.info('hyperparameters')
        for k, v in self.config.items():
            logging.info(f'\t * {k}: {v}')

        if log_file is not None:
            logger = logging.getLogger()
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)-8s %(message)s'))
            logger.addHandler(file_handler)

    def run(self, instance) -> SolveResult:
        """ solve an instance

        @param instance: Instance with a connected graph
        @return: SolveResult
        """
        if not instance.is_connected():
            raise InfeasibleError('the graph is not connected')
        rng = np.random.default_rng(self.config['seed'])
        state = AlgoState.initial(instance)
        lp_initial = None
        previous_value = None
        previous_q = frozenset()
        while len(state.h.nodes) > 1:
            state.iteration += 1
            if self.config['max_iterations'] is not None and state.iteration > self.config['max_iterations']:
                _fail(state, StuckError, f'no tree after {self.config["max_iterations"]} iterations')
            chosen_cost = vector_sum(instance.costs, state.chosen)
            solution = self._solve(state, instance)
            value = chosen_cost + solution.objective
            if lp_initial is None:
                lp_initial = solution.objective
            elif value > previous_value:
                _fail(state, InvariantError, f'LP value increased from {previous_value} to {value}')
            previous_value = value
            x = solution.x
            state.event('lp', objective=format_rational(solution.objective), support=len(solution.support),
                        rounds=solution.rounds, cuts=solution.cuts, vertex_certificate=solution.vertex_certificate)
            logging.info(f'iteration {state.iteration}: |W| = {len(state.h.nodes)}, |F| = {len(state.h.edges)}, '
                         f'LP = {solution.objective}')

            # step a
            deleted = delete_zero_edges(state, x)
            if len(state.h.edges) > 3 * (len(state.h.nodes) - 1):
                _fail(state, InvariantError,
                      f'support of {len(state.h.edges)} edges on {len(state.h.nodes)} nodes is not sparse')
            if self.config['debug_asserts']:
                self._check_chains(state, x)

            # step b
            contracted = contract_one_edges(state, x)
            if len(state.h.nodes) == 1:
                break

            # step c
            fix_tight_st(state, x, threshold=self.config['st_threshold'])
            q = compute_Q(state.h, x, rng=rng)
            if self.config['debug_asserts']:
                self._check_q(state, x, q, previous_q)
            previous_q = q

            # steps d and e
            if not _adaptable(
                    [type_b_candidate(state, w, q) for w in state.h.sorted_nodes()], x, self.config['slack_threshold']):
                assert_progress(state, x, q, self.config['slack_threshold'])
            adapted = apply_type_a(state, x, self.config) + apply_type_b(state, x, q, self.config)
            if not (deleted or contracted or adapted):
                _fail(state, StuckError, f'iteration {state.iteration} deleted, contracted and adapted nothing')

        if lp_initial is None:
            lp_initial = Fraction(0)
        return self._result(instance, state, lp_initial)

    def _solve(self, state: AlgoState, instance):
        try:
            return solve_lp1(
                state.h, state.constraints(), state.projected_fixed_sets(), instance.costs,
                st_threshold=self.config['st_threshold'], matroid_threshold=self.config['matroid_threshold'],
                on_cut=lambda c: state.event('cut', **c.tag.to_dict()))
        except InfeasibleError:
            if state.iteration == 1:
                raise
            # the previous point stays feasible, so a later infeasibility is a broken invariant
            _fail(state, InvariantError, f'LP1 became infeasible at iteration {state.iteration}')

    def _check_chains(self, state: AlgoState, x: Mapping[str, Fraction]):
        for w in state.h.sorted_nodes():
            m = state.constraint(w)
            if len(m.ground) <= self.config['matroid_threshold'] and \
                    not check_chain_bound(m, {e: x[e] for e in m.ground}, self.config['matroid_threshold']):
                _fail(state, InvariantError, f'tight chain at node {w} is longer than x(δ(w))')

    def _check_q(self, state: AlgoState, x: Mapping[str, Fraction], q: frozenset, previous_q: frozenset):
        lost = sorted(w for w in previous_q if w in state.h.nodes and w not in q)
        if lost:
            _fail(state, InvariantError, f'nodes {lost} left Q without an incident contraction')
        y = {f: x[f] for f in state.h.edges}
        family = build_laminar_tight_family(enumerate_tight_st_sets(state.h, y, self.config['st_threshold']), state.h, y)
        if not check_laminar_bounds(state.h, y, family, q=q):
            _fail(state, InvariantError, f'laminar family of {len(family)} tight sets is too large')

    def _result(self, instance, state: AlgoState, lp_initial: Fraction) -> SolveResult:
        tree = sorted(state.chosen)
        graph = nx.MultiGraph()
        graph.add_nodes_from(instance.vertices)
        graph.add_edges_from((*instance.edges[f], f) for f in tree)
        if not nx.is_tree(graph):
            _fail(state, InvariantError, f'contracted edges {tree} do not form a spanning tree')
        cost = vector_sum(instance.costs, tree)
        if cost > lp_initial:
            _fail(state, InvariantError, f'tree cost {cost} exceeds the initial LP value {lp_initial}')
        tree_set = frozenset(tree)
        violations = {v: tree_violation(instance.constraints[v], tree_set & instance.incident(v))
                      for v in instance.vertices}
        logging.info(f'tree of cost {cost} after {state.iteration} iterations (LP {lp_initial}, '
                     f'{len(state.adaptations)} adaptations, max violation {max(violations.values(), default=0)})')
        return SolveResult(
            tree=tree, cost=cost, violations=violations, lp_initial=lp_initial, trace=state.trace,
            adaptations=state.adaptations, iterations=state.iteration, config=dict(self.config))


def run(instance, **config) -> SolveResult:
    """ solve an instance with a DegreeBoundedMST configured by keyword arguments """
    return DegreeBoundedMST(**config).run(instance)
