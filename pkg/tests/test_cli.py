""" UnitTest for command line tools """
import unittest
import logging
import json
import os
import tempfile
from unittest import mock

from mmst import DegreeBoundedMST, generate_instance, save_instance
from mmst.instance import instance_from_dict
from mmst.mmst_cl import solve, verify, generate

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')

STAR = {
    'vertices': ['c', 'l0', 'l1', 'l2'],
    'edges': [{'id': f'f{i}', 'u': 'c', 'v': f'l{i}', 'cost': 1} for i in range(3)],
    'constraints': {'c': {'kind': 'uniform', 'rank': 1}}
}


CONFIG = dict(seed=0, st_threshold=20, matroid_threshold=16, oracle_node_threshold=10, oracle_edge_threshold=20,
              debug_asserts=False)


def read(path):
    with open(path) as f:
        return f.read()


class Test(unittest.TestCase):
    """ Test mmst-solve, mmst-verify and mmst-gen """

    def test_solve(self):
        with tempfile.TemporaryDirectory() as tmp:
            instance_path = os.path.join(tmp, 'instance.json')
            save_instance(generate_instance('laminar', 5, 7, seed=2), instance_path)
            out = [os.path.join(tmp, f'result_{n}.json') for n in range(2)]
            for path in out:
                self.assertEqual(solve.main([instance_path, '-o', path, '--trace']), solve.EXIT_OPTIMAL)
            self.assertEqual(read(out[0]), read(out[1]))
            result = json.loads(read(out[0]))
            self.assertEqual(result['status'], 'optimal')
            self.assertIn('trace', result)

            verified = os.path.join(tmp, 'verified.json')
            self.assertEqual(solve.main([instance_path, '-o', verified, '--verify']), solve.EXIT_OPTIMAL)
            self.assertTrue(json.loads(read(verified))['verification']['passed'])

    def test_solve_infeasible_and_broken(self):
        with tempfile.TemporaryDirectory() as tmp:
            star = os.path.join(tmp, 'star.json')
            save_instance(instance_from_dict(STAR), star)
            out = os.path.join(tmp, 'out.json')
            self.assertEqual(solve.main([star, '-o', out]), solve.EXIT_INFEASIBLE)
            self.assertEqual(json.loads(read(out))['status'], 'infeasible')

            broken = os.path.join(tmp, 'broken.json')
            with open(broken, 'w') as f:
                f.write('{')
            self.assertEqual(solve.main([broken, '-o', out]), solve.EXIT_ERROR)
            self.assertEqual(json.loads(read(out))['status'], 'error')

            instance_path = os.path.join(tmp, 'instance.json')
            save_instance(generate_instance('uniform-deg', 4, 5, seed=0), instance_path)
            with mock.patch.object(DegreeBoundedMST, 'run', side_effect=AssertionError('Q is not a vertex set')):
                self.assertEqual(solve.main([instance_path, '-o', out]), solve.EXIT_ERROR)
            output = json.loads(read(out))
            self.assertEqual(output['status'], 'error')
            self.assertEqual(output['message'], 'AssertionError: Q is not a vertex set')

    def test_generate_and_verify(self):
        with tempfile.TemporaryDirectory() as tmp:
            single = os.path.join(tmp, 'single.json')
            self.assertEqual(generate.main(['-k', 'partition', '-n', '5', '-m', '7', '-s', '3', '-o', single]), 0)
            again = os.path.join(tmp, 'again.json')
            generate.main(['-k', 'partition', '-n', '5', '-m', '7', '-s', '3', '-o', again])
            self.assertEqual(read(single), read(again))

            directory = os.path.join(tmp, 'batch')
            self.assertEqual(generate.main(['-k', 'uniform-deg', '-n', '4', '-m', '6', '-c', '3', '-o', directory]), 0)
            self.assertEqual(sorted(os.listdir(directory)),
                             [f'uniform-deg_n4_m6_s{s}.json' for s in range(3)])

            report_path = os.path.join(tmp, 'report.json')
            self.assertEqual(verify.main([directory, '-o', report_path, '-j', '2']), solve.EXIT_OPTIMAL)
            report = json.loads(read(report_path))
            self.assertEqual(report['summary']['total'], 3)
            self.assertEqual(report['summary']['verified'], 3)
            self.assertEqual(report['summary']['failed'], [])

            save_instance(instance_from_dict(STAR), os.path.join(directory, 'star.json'))
            code, report = verify.verify_path(directory, CONFIG, jobs=1)
            self.assertEqual(code, solve.EXIT_INFEASIBLE)
            self.assertEqual(report['summary']['infeasible'], ['star.json'])

            tight = os.path.join(tmp, 'tight')
            self.assertEqual(generate.main(['-k', 'laminar', '-n', '5', '-m', '8', '-c', '2', '--tight', '-o', tight]), 0)
            self.assertEqual(sorted(os.listdir(tight)), [f'laminar_tight_n5_m8_s{s}.json' for s in range(2)])
            self.assertTrue(json.loads(read(os.path.join(tight, 'laminar_tight_n5_m8_s0.json')))['metadata']['tight'])

            with self.assertRaises(SystemExit):
                generate.main(['-k', 'uniform-deg', '-n', '4', '-m', '6', '-c', '2'])


if __name__ == "__main__":
    unittest.main()
