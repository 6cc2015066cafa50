""" UnitTest for LP1 cutting planes """
import unittest
import logging
from fractions import Fraction

from mmst import generate_instance
from mmst.exceptions import ConfigurationError, InfeasibleError, InvariantError, MatroidDomainError
from mmst.lp_relaxation import (
    separate_spanning_tree, separate_matroid, solve_lp1, enumerate_tight_st_sets, build_laminar_tight_family, st_rank
)
from mmst.matroid import FreeMatroid, UniformMatroid, PartitionMatroid, DirectSum
from mmst.multigraph import Multigraph
from mmst.oracle import classical_mst_cost

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')

TRIANGLE = {'ab': ('a', 'b'), 'bc': ('b', 'c'), 'ac': ('a', 'c')}
CYCLE = {'ab': ('a', 'b'), 'bc': ('b', 'c'), 'cd': ('c', 'd'), 'da': ('d', 'a')}


def free_constraints(g: Multigraph):
    return {w: FreeMatroid(g.delta(w)) for w in g.nodes}


def point(edges, value):
    return {f: Fraction(value) for f in edges}


class Test(unittest.TestCase):
    """ Test separation, LP1 and tight set families """

    def test_separate_spanning_tree(self):
        g = Multigraph.from_edges('abc', TRIANGLE)
        cut = separate_spanning_tree(g, point(TRIANGLE, 1))
        self.assertEqual(cut.tag.key, frozenset({0, 1, 2}))
        self.assertEqual(cut.rhs, 2)
        self.assertIsNone(separate_spanning_tree(g, point(TRIANGLE, Fraction(2, 3))))
        self.assertEqual(separate_spanning_tree(g, point(TRIANGLE, 0)).tag.kind, 'cardinality')

        g = Multigraph.from_edges('abcd', CYCLE)
        x = {'ab': Fraction(1), 'bc': Fraction(1), 'cd': Fraction(0), 'da': Fraction(1)}
        self.assertIsNone(separate_spanning_tree(g, x))
        with self.assertRaises(ConfigurationError):
            separate_spanning_tree(g, x, threshold=3)

    def test_separate_matroid(self):
        m = UniformMatroid(['e1', 'e2'], 1)
        cut = separate_matroid(m, {'e1': Fraction(3, 4), 'e2': Fraction(3, 4)}, owner=0)
        self.assertEqual(set(cut.coefficients), {'e1', 'e2'})
        self.assertEqual(cut.rhs, 1)
        self.assertEqual(cut.tag.key, (0, frozenset({'e1', 'e2'})))
        self.assertIsNone(separate_matroid(m, {'e1': Fraction(1, 2), 'e2': Fraction(1, 2)}))

        p = PartitionMatroid([(['e1', 'e2'], 1), (['e3'], 1)])
        cut = separate_matroid(p, {'e1': Fraction(1, 2), 'e2': Fraction(3, 4), 'e3': Fraction(1, 2)})
        self.assertEqual(set(cut.coefficients), {'e1', 'e2'})

        s = DirectSum([UniformMatroid(['a', 'b'], 1), UniformMatroid(['c', 'd'], 1)])
        cut = separate_matroid(s, point('abcd', Fraction(3, 4)))
        self.assertEqual(set(cut.coefficients), {'a', 'b', 'c', 'd'})
        self.assertEqual(cut.rhs, 2)

        with self.assertRaises(MatroidDomainError):
            separate_matroid(m, {'e1': Fraction(1)})
        with self.assertRaises(ConfigurationError):
            separate_matroid(m, {'e1': Fraction(1), 'e2': Fraction(1)}, threshold=1)

    def test_solve_small(self):
        g = Multigraph.from_edges('abc', TRIANGLE)
        solution = solve_lp1(g, free_constraints(g), [], point(TRIANGLE, 1))
        self.assertEqual(solution.objective, 2)
        self.assertTrue(all(v in (0, 1) for v in solution.x.values()))
        self.assertTrue(solution.vertex_certificate)

        parallel = {'f1': ('a', 'b'), 'f2': ('a', 'b')}
        g = Multigraph.from_edges('ab', parallel)
        solution = solve_lp1(g, free_constraints(g), [], {'f1': Fraction(1), 'f2': Fraction(2)})
        self.assertEqual(solution.x, {'f1': 1, 'f2': 0})

        g = Multigraph.from_edges('a', {})
        self.assertEqual(solve_lp1(g, free_constraints(g), [], {}).objective, 0)
        g = Multigraph.from_edges('ab', {})
        with self.assertRaises(InfeasibleError):
            solve_lp1(g, free_constraints(g), [], {})

    def test_infeasible_star(self):
        star = {f'f{i}': ('c', f'l{i}') for i in range(4)}
        g = Multigraph.from_edges(['c', 'l0', 'l1', 'l2', 'l3'], star)
        constraints = free_constraints(g)
        constraints[0] = UniformMatroid(g.delta(0), 1)
        with self.assertRaises(InfeasibleError):
            solve_lp1(g, constraints, [], point(star, 1))

    def test_degree_constrained_triangle(self):
        g = Multigraph.from_edges('abc', TRIANGLE)
        constraints = {w: UniformMatroid(g.delta(w), 1) for w in g.nodes}
        # degree sum 3 cannot carry the two edges of a spanning tree
        with self.assertRaises(InfeasibleError):
            solve_lp1(g, constraints, [], point(TRIANGLE, 1))

        constraints = {w: UniformMatroid(g.delta(w), 2) for w in g.nodes}
        solution = solve_lp1(g, constraints, [frozenset({0, 1, 2})], point(TRIANGLE, 1))
        self.assertEqual(solution.objective, 2)
        logging.info(f'rounds {solution.rounds}, cuts {solution.cuts}')

    def test_free_matches_classical_mst(self):
        for seed in range(100):
            n = 3 + seed % 4
            m = min(9, n - 1 + seed % 5)
            instance = generate_instance('uniform-deg', n, m, seed)
            g = instance.graph()
            solution = solve_lp1(g, free_constraints(g), [], instance.costs)
            self.assertEqual(solution.objective, classical_mst_cost(g, instance.costs), f'seed {seed}')
            self.assertTrue(all(v in (0, 1) for v in solution.x.values()), f'seed {seed}')
            self.assertTrue(solution.vertex_certificate, f'seed {seed}')

    def test_tight_sets(self):
        g = Multigraph.from_edges('abc', TRIANGLE)
        self.assertEqual(enumerate_tight_st_sets(g, point(TRIANGLE, Fraction(2, 3))), [frozenset({0, 1, 2})])
        g = Multigraph.from_edges('abcd', CYCLE)
        self.assertEqual(enumerate_tight_st_sets(g, point(CYCLE, Fraction(3, 4))), [frozenset({0, 1, 2, 3})])

        path = {'ab': ('a', 'b'), 'bc': ('b', 'c')}
        g = Multigraph.from_edges('abc', path)
        x = point(path, 1)
        tight = enumerate_tight_st_sets(g, x)
        self.assertEqual(tight, [frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 1, 2})])
        family = build_laminar_tight_family(tight, g, x)
        self.assertEqual(family, [frozenset({0, 1}), frozenset({0, 1, 2})])
        self.assertEqual(st_rank(g, family), st_rank(g, tight))
        self.assertEqual(build_laminar_tight_family(family, g, x), family)
        self.assertEqual(build_laminar_tight_family([frozenset({0, 1, 2})], g, x), [frozenset({0, 1, 2})])
        with self.assertRaises(InvariantError):
            build_laminar_tight_family([frozenset({0, 2})], g, x)


if __name__ == "__main__":
    unittest.main()
