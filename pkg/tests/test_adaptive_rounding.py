""" UnitTest for iterative rounding with degree adaptation """
import unittest
import logging
from fractions import Fraction

import numpy as np

from mmst import DegreeBoundedMST, generate_instance, run
from mmst.adaptive_rounding import (
    AlgoState, delete_zero_edges, contract_one_edges, compute_Q, fix_tight_st, classify_edges, apply_type_a,
    apply_type_b, remove_edges_from_degree_constraint, tree_violation, assert_progress
)
from mmst.exceptions import ConfigurationError, InfeasibleError, InvariantError, StuckError
from mmst.instance import instance_from_dict
from mmst.matroid import UniformMatroid
from mmst.multigraph import Multigraph
from mmst.util import canonical_json, powerset

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')

DEBUG = {'debug_asserts': True}


def build(vertices, edges, constraints=None, cost=1):
    return instance_from_dict({
        'vertices': list(vertices),
        'edges': [{'id': f, 'u': u, 'v': v, 'cost': cost} for f, (u, v) in edges.items()],
        'constraints': constraints or {}
    })


def half(edges, value=Fraction(1, 2)):
    return {f: Fraction(value) for f in edges}


TRIANGLE = {'ab': ('a', 'b'), 'bc': ('b', 'c'), 'ac': ('a', 'c')}
K4 = {'ab': ('a', 'b'), 'ac': ('a', 'c'), 'ad': ('a', 'd'), 'bc': ('b', 'c'), 'bd': ('b', 'd'), 'cd': ('c', 'd')}


class Test(unittest.TestCase):
    """ Test rounding steps and the solver """

    def test_free_path(self):
        instance = build('abc', {'ab': ('a', 'b'), 'bc': ('b', 'c')})
        result = run(instance, debug_asserts=True)
        self.assertEqual(result.tree, ['ab', 'bc'])
        self.assertEqual(result.cost, 2)
        self.assertEqual(result.violations, {'a': 0, 'b': 0, 'c': 0})
        self.assertEqual(result.to_dict()['status'], 'optimal')

    def test_single_vertex(self):
        result = run(build('a', {}))
        self.assertEqual(result.tree, [])
        self.assertEqual(result.cost, 0)
        self.assertEqual(result.iterations, 0)

    def test_degree_bounded_triangle(self):
        instance = build('abc', TRIANGLE, {v: {'kind': 'uniform', 'rank': 2} for v in 'abc'})
        result = run(instance, debug_asserts=True)
        self.assertEqual(result.cost, 2)
        self.assertEqual(len(result.tree), 2)
        self.assertEqual(result.max_violation, 0)

    def test_infeasible(self):
        star = {f'f{i}': ('c', f'l{i}') for i in range(4)}
        instance = build(['c', 'l0', 'l1', 'l2', 'l3'], star, {'c': {'kind': 'uniform', 'rank': 1}})
        with self.assertRaises(InfeasibleError):
            run(instance)
        disconnected = build('abcd', {'ab': ('a', 'b'), 'cd': ('c', 'd')})
        with self.assertRaises(InfeasibleError):
            run(disconnected)

    def test_config(self):
        with self.assertRaises(ConfigurationError):
            DegreeBoundedMST(st_threshold=0)
        with self.assertRaises(ConfigurationError):
            DegreeBoundedMST(slack_threshold=-1)
        solver = DegreeBoundedMST(seed=3)
        self.assertEqual(solver.config['seed'], 3)
        self.assertEqual(solver.config['slack_threshold'], 4)

    def test_compute_q(self):
        cycle = {'ab': ('a', 'b'), 'bc': ('b', 'c'), 'cd': ('c', 'd'), 'da': ('d', 'a')}
        g = Multigraph.from_edges('abcd', cycle)
        self.assertEqual(compute_Q(g, half(cycle, Fraction(3, 4))), frozenset())

        edges = {'ab': ('a', 'b'), 'ac': ('a', 'c'), 'bc': ('b', 'c'), 'bd': ('b', 'd'), 'cd': ('c', 'd')}
        x = {'ab': Fraction(1, 2), 'ac': Fraction(1, 2), 'bc': Fraction(1, 2), 'bd': Fraction(3, 4),
             'cd': Fraction(3, 4)}
        g = Multigraph.from_edges('abcd', edges)
        self.assertEqual(compute_Q(g, x), frozenset({0}))
        self.assertEqual(compute_Q(g, x, rng=np.random.default_rng(0)), frozenset({0}))

        self.assertEqual(compute_Q(Multigraph.from_edges('a', {}), {}), frozenset())
        with self.assertRaises(AssertionError):
            compute_Q(Multigraph.from_edges('ab', {'f': ('a', 'b')}), {'f': Fraction(1)})

    def test_delete_and_contract(self):
        instance = build('ab', {'f': ('a', 'b'), 'g': ('a', 'b')}, {v: {'kind': 'uniform', 'rank': 1} for v in 'ab'})
        state = AlgoState.initial(instance)
        x = {'f': Fraction(1), 'g': Fraction(0)}
        with self.assertRaises(InvariantError):
            contract_one_edges(state, x)
        self.assertEqual(delete_zero_edges(state, x), ['g'])
        self.assertEqual(contract_one_edges(state, x), ['f'])
        self.assertEqual(state.h.nodes, {2})
        self.assertEqual(state.chosen, ['f'])
        parts = state.decomposition[2].parts
        self.assertEqual(sorted(parts), ['a', 'b'])
        self.assertTrue(all(p.ground == () and p.rank() == 0 for p in parts.values()))
        self.assertEqual([e['event'] for e in state.trace], ['delete', 'contract'])

        state = AlgoState.initial(build('abc', {'ab': ('a', 'b'), 'bc': ('b', 'c')}))
        contract_one_edges(state, half(['ab', 'bc'], 1))
        self.assertEqual(len(state.h.nodes), 1)
        self.assertEqual(state.h.vertices_of(state.h.nodes), frozenset('abc'))
        self.assertEqual(state.chosen, ['ab', 'bc'])

        state = AlgoState.initial(build('abc', TRIANGLE))
        self.assertEqual(contract_one_edges(state, half(TRIANGLE)), [])

    def test_fix_tight_st(self):
        state = AlgoState.initial(build('abc', TRIANGLE))
        x = half(TRIANGLE, Fraction(2, 3))
        self.assertEqual(fix_tight_st(state, x), [frozenset('abc')])
        self.assertEqual(fix_tight_st(state, x), [])
        self.assertEqual(state.projected_fixed_sets(), [frozenset({0, 1, 2})])

    def test_classify_edges(self):
        state = AlgoState.initial(build('abc', TRIANGLE, {v: {'kind': 'uniform', 'rank': 1} for v in 'abc'}))
        self.assertEqual(classify_edges(state), (frozenset(), frozenset(), frozenset(TRIANGLE)))
        state = AlgoState.initial(build('abc', TRIANGLE))
        self.assertEqual(classify_edges(state), (frozenset(TRIANGLE), frozenset(), frozenset()))

    def test_type_a(self):
        state = AlgoState.initial(build('abc', TRIANGLE, {v: {'kind': 'uniform', 'rank': 1} for v in 'abc'}))
        records = apply_type_a(state, half(TRIANGLE), DEBUG)
        self.assertEqual([(r.node, sorted(r.removed)) for r in records], [(0, ['ab', 'ac']), (1, ['bc'])])
        self.assertEqual(records[0].slack, 1)
        self.assertEqual(records[1].affected_vertices, frozenset({'b'}))
        self.assertEqual(state.counters, {'a': [1, 0], 'b': [1, 0], 'c': [0, 0]})
        self.assertEqual(classify_edges(state)[2], frozenset())

        state = AlgoState.initial(build('abcd', K4, {v: {'kind': 'uniform', 'rank': 2} for v in 'abcd'}))
        records = apply_type_a(state, half(K4), DEBUG)
        self.assertEqual(len(records), 3)
        self.assertEqual(records[0].slack, Fraction(3, 2))
        self.assertEqual(records[0].removed, frozenset({'ab', 'ac', 'ad'}))

        state = AlgoState.initial(build('abcd', K4, {v: {'kind': 'uniform', 'rank': 2} for v in 'abcd'}))
        # every node carries three contained edges of slack 3/2
        self.assertEqual(apply_type_a(state, half(K4), {'slack_threshold': 1, **DEBUG}), [])
        state = AlgoState.initial(build('abc', TRIANGLE))
        self.assertEqual(apply_type_a(state, half(TRIANGLE), DEBUG), [])

    def test_type_b(self):
        state = AlgoState.initial(build('abc', TRIANGLE, {v: {'kind': 'uniform', 'rank': 1} for v in 'abc'}))
        records = apply_type_b(state, half(TRIANGLE), frozenset({0}), DEBUG)
        self.assertEqual([(r.kind, r.node, sorted(r.removed)) for r in records], [('B', 1, ['bc']), ('B', 2, ['bc'])])
        self.assertEqual(state.counters, {'a': [0, 0], 'b': [0, 1], 'c': [0, 1]})

        path = {'ab': ('a', 'b'), 'bc': ('b', 'c')}
        state = AlgoState.initial(build('abc', path, {'b': {'kind': 'uniform', 'rank': 1}}))
        x = {'ab': Fraction(1, 2), 'bc': Fraction(1, 4)}
        records = apply_type_b(state, x, frozenset(), DEBUG)
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0].slack, Fraction(5, 4))
        self.assertTrue(all(state.constraint(1).is_free_element(f) for f in path))

    def test_remove_edges(self):
        instance = build('ab', {'f1': ('a', 'b'), 'f2': ('a', 'b')}, {'a': {'kind': 'uniform', 'rank': 1}})
        state = AlgoState.initial(instance)
        new = remove_edges_from_degree_constraint(state, 0, frozenset({'f1', 'f2'}), half(['f1', 'f2']), audit=True)
        m = new.matroid()
        self.assertEqual(m.rank(), 2)
        for a in powerset(m.ground):
            self.assertEqual(m.rank(a), len(a))

        instance = build('abc', {'f1': ('a', 'b'), 'f2': ('a', 'b'), 'g': ('b', 'c')}, {
            'b': {'kind': 'partition', 'blocks': [{'edges': ['f1', 'f2'], 'capacity': 1},
                                                  {'edges': ['g'], 'capacity': 1}]}})
        state = AlgoState.initial(instance)
        x = {'f1': Fraction(1, 2), 'f2': Fraction(1, 2), 'g': Fraction(1)}
        contract_one_edges(state, x)
        merged = state.h.vertex_map['b']
        unchanged = state.decomposition[merged].parts['c']
        new = remove_edges_from_degree_constraint(state, merged, frozenset({'f1', 'f2'}), x, audit=True)
        self.assertIs(new.parts['c'], unchanged)
        self.assertTrue(new.parts['b'].is_free_element('f1'))
        self.assertTrue(new.parts['b'].is_free_element('f2'))

    def test_remove_edges_point_outside_polytope(self):
        instance = build('ab', {'f1': ('a', 'b'), 'f2': ('a', 'b')}, {'a': {'kind': 'uniform', 'rank': 1}})
        for audit in (False, True):
            state = AlgoState.initial(instance)
            old = state.decomposition[0]
            with self.assertRaises(InvariantError) as context:
                remove_edges_from_degree_constraint(state, 0, frozenset({'f1', 'f2'}), half(['f1', 'f2'], 1),
                                                    audit=audit)
            self.assertIn('outside the polytope', str(context.exception))
            self.assertIs(state.decomposition[0], old)

    def test_tree_violation(self):
        m = UniformMatroid(['f1', 'f2', 'f3'], 1)
        self.assertEqual(tree_violation(m, {'f1', 'f2', 'f3'}), 2)
        self.assertEqual(tree_violation(m, {'f1'}), 0)

    def test_assert_progress(self):
        state = AlgoState.initial(build('abc', TRIANGLE))
        with self.assertRaises(StuckError):
            assert_progress(state, half(TRIANGLE, Fraction(2, 3)), frozenset())
        state = AlgoState.initial(build('abc', TRIANGLE, {v: {'kind': 'uniform', 'rank': 1} for v in 'abc'}))
        assert_progress(state, half(TRIANGLE), frozenset())
        assert_progress(AlgoState.initial(build('a', {})), {}, frozenset())

    def test_generated_runs(self):
        for seed, kind in enumerate(['uniform-deg', 'partition', 'laminar'] * 3):
            instance = generate_instance(kind, 5, 8, seed)
            first = run(instance, debug_asserts=True)
            second = run(instance, debug_asserts=True)
            self.assertEqual(canonical_json(first.to_dict(include_trace=True)),
                             canonical_json(second.to_dict(include_trace=True)))
            self.assertLessEqual(first.cost, first.lp_initial)
            self.assertLessEqual(first.max_violation, 8)
            kinds = {}
            for record in first.adaptations:
                for v in record.affected_vertices:
                    kinds[(v, record.kind)] = kinds.get((v, record.kind), 0) + 1
            self.assertTrue(all(count == 1 for count in kinds.values()), kinds)
            logging.info(f'{kind} seed {seed}: cost {first.cost}, LP {first.lp_initial}, '
                         f'{len(first.adaptations)} adaptations')


if __name__ == "__main__":
    unittest.main()
