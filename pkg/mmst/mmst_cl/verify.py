""" Solve and verify an instance file or every instance in a directory """
import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from glob import glob
from os.path import join as pj
from typing import Dict, Tuple

from mmst.mmst_cl.solve import (
    EXIT_OPTIMAL, EXIT_ERROR, EXIT_INFEASIBLE, add_solver_arguments, solver_config, solve_file, write_output
)

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')


def _verify_one(job: Tuple[str, Dict, bool]) -> Tuple[int, Dict]:
    path, config, include_trace = job
    return solve_file(path, config, verify=True, include_trace=include_trace)


def verify_path(path: str, config: Dict, jobs: int = 1, include_trace: bool = False) -> Tuple[int, Dict]:
    """ verify a single instance file, or each `*.json` file of a directory (one solver per instance)

    @return: (exit code, report)
    """
    if not os.path.isdir(path):
        return _verify_one((path, config, include_trace))
    files = sorted(glob(pj(path, '*.json')))
    job_list = [(f, config, include_trace) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(_verify_one, job_list))
    else:
        outcomes = [_verify_one(j) for j in job_list]

    instances = {}
    codes = []
    for f, (code, output) in zip(files, outcomes):
        instances[os.path.basename(f)] = output
        codes.append(code)
    failed = sorted(os.path.basename(f) for f, c in zip(files, codes) if c == EXIT_ERROR)
    infeasible = sorted(os.path.basename(f) for f, c in zip(files, codes) if c == EXIT_INFEASIBLE)
    violations = [o['verification']['max_violation'] for o in instances.values() if 'verification' in o]
    report = {
        'instances': instances,
        'summary': {
            'total': len(files),
            'verified': len(violations),
            'failed': failed,
            'infeasible': infeasible,
            'max_violation': max(violations, default=0)
        }
    }
    logging.info(f'{len(files)} instances: {len(failed)} failed, {len(infeasible)} infeasible, '
                 f'maximum violation {report["summary"]["max_violation"]}')
    if failed:
        return EXIT_ERROR, report
    return (EXIT_INFEASIBLE if infeasible else EXIT_OPTIMAL), report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Solve and verify instances against the brute-force oracle')
    parser.add_argument('path', help='instance file or directory of instance files', type=str)
    parser.add_argument('-o', '--out', help='file to export the report (standard output as default)',
                        default=None, type=str)
    parser.add_argument('-j', '--jobs', help='number of worker processes for a directory', default=1, type=int)
    add_solver_arguments(parser)
    opt = parser.parse_args(argv)

    code, report = verify_path(opt.path, solver_config(opt), jobs=opt.jobs, include_trace=opt.trace)
    write_output(report, opt.out)
    return code


if __name__ == '__main__':
    sys.exit(main())
