""" Seeded random instances: a planted spanning tree plus random extra edges (parallel edges allowed). Every
capacity is at least the planted tree's usage, so each generated instance has a feasible tree.

With `tight=True` the planted tree is a Hamiltonian path, every capacity equals its usage, planted edges draw the
larger costs and about a quarter of the vertices are left unconstrained. The root LP of such an instance is often
fractional. """
import logging
from fractions import Fraction
from typing import Dict, List

import numpy as np

from .exceptions import ConfigurationError
from .instance import Instance
from .matroid import UniformMatroid, PartitionMatroid, LaminarMatroid, FreeMatroid

__all__ = ('GENERATOR_KINDS', 'generate_instance')

GENERATOR_KINDS = ('uniform-deg', 'partition', 'laminar')
FREE_VERTEX_RATE = 0.25


def _slack(rng: np.random.Generator, tight: bool) -> int:
    return 0 if tight else int(rng.integers(0, 2))


def _uniform(rng, incident: List[str], used: set, tight: bool):
    return UniformMatroid(incident, min(len(incident), len(used) + _slack(rng, tight)))


def _partition(rng, incident: List[str], used: set, tight: bool):
    order = [incident[i] for i in rng.permutation(len(incident))]
    cut = int(rng.integers(1, len(order))) if len(order) > 1 else 1
    blocks = []
    for block in (order[:cut], order[cut:]):
        if block:
            usage = len(used.intersection(block))
            blocks.append((block, min(len(block), usage + _slack(rng, tight))))
    return PartitionMatroid(blocks, ground=incident)


def _laminar(rng, incident: List[str], used: set, tight: bool):
    size = int(rng.integers(1, len(incident) + 1))
    inner = [incident[i] for i in sorted(rng.choice(len(incident), size=size, replace=False))]
    sets = [(inner, min(len(inner), len(used.intersection(inner)) + _slack(rng, tight)))]
    if len(inner) < len(incident):
        sets.append((incident, min(len(incident), len(used) + _slack(rng, tight))))
    return LaminarMatroid(incident, sets)


_BUILDERS = {'uniform-deg': _uniform, 'partition': _partition, 'laminar': _laminar}


def generate_instance(kind: str, n: int, m: int, seed: int = 0, tight: bool = False) -> Instance:
    """ random connected multigraph with rational costs and per-vertex constraints of one kind

    @param kind: 'uniform-deg' (degree bounds), 'partition' (two blocks per vertex) or 'laminar' (nested sets)
    @param n: number of vertices (≥ 2)
    @param m: number of edges (≥ n - 1)
    @param seed: random seed
    @param tight: [optional] plant a path with zero slack and expensive edges
    @return: Instance whose metadata records the planted tree
    """
    if kind not in GENERATOR_KINDS:
        raise ConfigurationError(f'unknown kind {kind}: choose from {GENERATOR_KINDS}')
    if n < 2 or m < n - 1:
        raise ConfigurationError(f'no connected graph with {n} vertices and {m} edges (need n ≥ 2 and m ≥ n - 1)')
    rng = np.random.default_rng(seed)
    vertices = [f'v{i:0{len(str(n - 1))}d}' for i in range(n)]

    order = rng.permutation(n)
    if tight:
        pairs = [(int(order[i]), int(order[i - 1])) for i in range(1, n)]
    else:
        pairs = [(int(order[i]), int(order[rng.integers(0, i)])) for i in range(1, n)]
    planted = set(range(n - 1))
    for _ in range(m - (n - 1)):
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    width = max(2, len(str(m - 1)))
    shuffle = rng.permutation(m)
    edges, costs, planted_ids = {}, {}, []
    for position, index in enumerate(shuffle):
        f = f'e{position:0{width}d}'
        u, v = pairs[int(index)]
        edges[f] = (vertices[u], vertices[v])
        if not tight:
            numerator = int(rng.integers(1, 10))
        elif int(index) in planted:
            numerator = int(rng.integers(6, 10))
        else:
            numerator = int(rng.integers(1, 5))
        costs[f] = Fraction(numerator, int(rng.integers(1, 4)))
        if int(index) in planted:
            planted_ids.append(f)

    constraints: Dict = {}
    for v in vertices:
        incident = sorted(f for f, ends in edges.items() if v in ends)
        used = set(incident).intersection(planted_ids)
        if not incident or (tight and rng.random() < FREE_VERTEX_RATE):
            constraints[v] = FreeMatroid(incident)
        else:
            constraints[v] = _BUILDERS[kind](rng, incident, used, tight)
    metadata = {'kind': kind, 'n': n, 'm': m, 'seed': seed, 'tight': tight, 'planted_tree': sorted(planted_ids),
                'feasible_by_construction': True}
    logging.debug(f'generated {kind} instance n={n} m={m} seed={seed} tight={tight}')
    return Instance(vertices=vertices, edges=edges, costs=costs, constraints=constraints, metadata=metadata)
