""" Generate random instances with a planted feasible tree """
import argparse
import logging
import os
import sys
from os.path import join as pj

from mmst import generate_instance, emit_instance, save_instance
from mmst.exceptions import ConfigurationError
from mmst.generator import GENERATOR_KINDS
from mmst.mmst_cl.solve import write_output

logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=logging.INFO, datefmt='%Y-%m-%d %H:%M:%S')


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Generate random degree-bounded spanning tree instances')
    parser.add_argument('-k', '--kind', help='constraint kind', choices=GENERATOR_KINDS, required=True, type=str)
    parser.add_argument('-n', help='number of vertices', required=True, type=int)
    parser.add_argument('-m', help='number of edges', required=True, type=int)
    parser.add_argument('-s', '--seed', help='random seed (the first seed when --count > 1)', default=0, type=int)
    parser.add_argument('-c', '--count', help='number of instances (seeds seed, seed+1, ...)', default=1, type=int)
    parser.add_argument('--tight', help='plant a path with zero slack (fractional root LPs)', action='store_true')
    parser.add_argument('-o', '--out', help='output file, or a directory when --count > 1 '
                                            '(standard output as default)', default=None, type=str)
    opt = parser.parse_args(argv)
    if opt.count < 1:
        parser.error('--count must be positive')
    if opt.count > 1 and opt.out is None:
        parser.error('--out (a directory) is required with --count > 1')

    try:
        instances = [(seed, generate_instance(opt.kind, opt.n, opt.m, seed, tight=opt.tight))
                     for seed in range(opt.seed, opt.seed + opt.count)]
    except ConfigurationError as e:
        parser.error(str(e))

    if opt.count == 1:
        write_output(emit_instance(instances[0][1]), opt.out)
        return 0
    os.makedirs(opt.out, exist_ok=True)
    prefix = f'{opt.kind}_tight' if opt.tight else opt.kind
    for seed, instance in instances:
        save_instance(instance, pj(opt.out, f'{prefix}_n{opt.n}_m{opt.m}_s{seed}.json'))
    logging.info(f'{opt.count} instances saved at {opt.out}')
    return 0


if __name__ == '__main__':
    sys.exit(main())
