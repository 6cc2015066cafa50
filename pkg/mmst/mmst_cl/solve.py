""" Solve a degree-bounded minimum spanning tree instance """
import argparse
import logging
import sys
from typing import Dict, Tuple

from mmst import DegreeBoundedMST, parse_instance, verify_solution
from mmst.exceptions import InfeasibleError, MMSTError
from mmst.util import canonical_json

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')

EXIT_OPTIMAL = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def add_solver_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--seed', help='seed of the random Q-order check', default=0, type=int)
    parser.add_argument('--st-threshold', help='node limit of spanning tree set enumeration', default=20, type=int)
    parser.add_argument('--matroid-threshold', help='ground limit of matroid subset enumeration', default=16, type=int)
    parser.add_argument('--oracle-threshold', help='node limit of the brute-force oracle', default=10, type=int)
    parser.add_argument('--oracle-edge-threshold', help='edge limit of the brute-force oracle', default=20, type=int)
    parser.add_argument('--debug-asserts', help='run every enumeration-based runtime check', action='store_true')
    parser.add_argument('--trace', help='include the iteration trace in the result', action='store_true')


def solver_config(opt) -> Dict:
    return dict(
        seed=opt.seed, st_threshold=opt.st_threshold, matroid_threshold=opt.matroid_threshold,
        oracle_node_threshold=opt.oracle_threshold, oracle_edge_threshold=opt.oracle_edge_threshold,
        debug_asserts=opt.debug_asserts)


def solve_file(path: str, config: Dict, verify: bool = False, include_trace: bool = False) -> Tuple[int, Dict]:
    """ solve one instance file

    @param path: instance file
    @param config: keyword arguments of DegreeBoundedMST
    @param verify: [optional] attach an oracle report (a failed check turns the exit code into an error)
    @param include_trace: [optional] attach the iteration trace
    @return: (exit code, result file content)
    """
    try:
        instance = parse_instance(path)
        solver = DegreeBoundedMST(**config)
        result = solver.run(instance)
    except InfeasibleError as e:
        logging.info(f'{path}: infeasible ({e})')
        output = {'status': 'infeasible', 'message': str(e), 'config': config}
        if e.certificate is not None:
            output['certificate'] = e.certificate.tag.to_dict()
        return EXIT_INFEASIBLE, output
    except (MMSTError, AssertionError) as e:
        logging.error(f'{path}: {type(e).__name__}: {e}')
        return EXIT_ERROR, {'status': 'error', 'message': f'{type(e).__name__}: {e}', 'config': config}

    output = result.to_dict(include_trace=include_trace)
    if not verify:
        return EXIT_OPTIMAL, output
    report = verify_solution(
        instance, result, node_threshold=config['oracle_node_threshold'],
        edge_threshold=config['oracle_edge_threshold'])
    output['verification'] = report.to_dict()
    return (EXIT_OPTIMAL if report.passed else EXIT_ERROR), output


def write_output(output: Dict, path: str = None):
    text = canonical_json(output)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w') as f:
            f.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Solve a degree-bounded minimum spanning tree instance')
    parser.add_argument('instance', help='instance file (JSON)', type=str)
    parser.add_argument('-o', '--out', help='file to export the result (standard output as default)',
                        default=None, type=str)
    parser.add_argument('--verify', help='attach a verification report', action='store_true')
    add_solver_arguments(parser)
    opt = parser.parse_args(argv)

    code, output = solve_file(opt.instance, solver_config(opt), verify=opt.verify, include_trace=opt.trace)
    write_output(output, opt.out)
    return code


if __name__ == '__main__':
    sys.exit(main())
