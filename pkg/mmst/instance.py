""" Instance file reader and writer.

{"vertices": [...], "edges": [{"id", "u", "v", "cost"}], "constraints": {vertex: descriptor}, "metadata": {...}}

Costs are integers or "p/q" strings. A vertex without a constraint entry is unconstrained.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx

from .exceptions import InstanceParseError, MMSTError, ConfigurationError
from .matroid import (
    Matroid, FreeMatroid, UniformMatroid, PartitionMatroid, LaminarMatroid, ExplicitMatroid
)
from .multigraph import Multigraph
from .util import json_load, json_save, parse_rational, format_rational

__all__ = (
    'Instance',
    'parse_instance',
    'instance_from_dict',
    'emit_instance',
    'save_instance',
    'build_matroid',
    'CONSTRAINT_KINDS'
)

CONSTRAINT_KINDS = ('free', 'uniform', 'partition', 'laminar', 'explicit')


@dataclass
class Instance:
    vertices: List[str]
    edges: Dict[str, Tuple[str, str]]
    costs: Dict[str, Fraction]
    constraints: Dict[str, Matroid]
    metadata: Dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return emit_instance(self) == emit_instance(other)

    def incident(self, v) -> frozenset:
        return frozenset(f for f, (a, b) in self.edges.items() if v in (a, b))

    def graph(self) -> Multigraph:
        return Multigraph.from_edges(self.vertices, self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for f in sorted(self.edges):
            graph.add_edge(*self.edges[f], key=f, weight=self.costs[f])
        return graph

    def is_connected(self) -> bool:
        return len(self.vertices) <= 1 or nx.is_connected(self.to_networkx())


def _edge_list(value, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(e, str) for e in value):
        raise InstanceParseError('expected a list of edge ids', field=where)
    return value


def _capacity_sets(descriptor: Dict, key: str, where: str) -> List[Tuple[List[str], int]]:
    entries = descriptor.get(key)
    if not isinstance(entries, list):
        raise InstanceParseError(f'expected a list of {{"edges", "capacity"}} objects', field=f'{where}.{key}')
    sets = []
    for n, entry in enumerate(entries):
        if not isinstance(entry, dict) or set(entry) != {'edges', 'capacity'}:
            raise InstanceParseError('expected keys "edges" and "capacity"', field=f'{where}.{key}[{n}]')
        sets.append((_edge_list(entry['edges'], f'{where}.{key}[{n}].edges'), entry['capacity']))
    return sets


def build_matroid(descriptor: Dict, ground: frozenset, where: str = 'constraint') -> Matroid:
    """ materialize a constraint descriptor over the incident edges `ground`

    @param descriptor: {"kind": free|uniform|partition|laminar|explicit, ...}
    @param ground: incident edge ids of the vertex
    @param where: field path used in error messages
    @return: Matroid with ground set equal to `ground`
    """
    if not isinstance(descriptor, dict) or descriptor.get('kind') not in CONSTRAINT_KINDS:
        raise InstanceParseError(f'kind must be one of {CONSTRAINT_KINDS}', field=f'{where}.kind')
    kind = descriptor['kind']
    if 'ground' in descriptor and set(_edge_list(descriptor['ground'], f'{where}.ground')) != set(ground):
        raise InstanceParseError(f'ground must equal the incident edges {sorted(ground)}', field=f'{where}.ground')
    try:
        if kind == 'free':
            m = FreeMatroid(ground)
        elif kind == 'uniform':
            m = UniformMatroid(ground, descriptor.get('rank'))
        elif kind == 'partition':
            blocks = _capacity_sets(descriptor, 'blocks', where)
            covered = {e for elements, _ in blocks for e in elements}
            if covered != set(ground):
                raise InstanceParseError(
                    f'blocks cover {sorted(covered)} but the incident edges are {sorted(ground)}',
                    field=f'{where}.blocks')
            m = PartitionMatroid(blocks, ground=ground)
        elif kind == 'laminar':
            m = LaminarMatroid(ground, _capacity_sets(descriptor, 'sets', where))
        else:
            bases = descriptor.get('bases')
            if not isinstance(bases, list):
                raise InstanceParseError('expected a list of bases', field=f'{where}.bases')
            bases = [_edge_list(b, f'{where}.bases[{n}]') for n, b in enumerate(bases)]
            m = ExplicitMatroid.from_bases(sorted(ground), bases)
    except InstanceParseError:
        raise
    except (MMSTError, TypeError) as e:
        raise InstanceParseError(str(e), field=where)
    assert m.ground_set == ground, f'{where}: ground {list(m.ground)} differs from {sorted(ground)}'
    return m


def instance_from_dict(data: Dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceParseError('expected a JSON object')
    vertices = data.get('vertices')
    if not isinstance(vertices, list):
        raise InstanceParseError('expected a list', field='vertices')
    for n, v in enumerate(vertices):
        if not isinstance(v, str):
            raise InstanceParseError(f'vertex ids are strings, got {v!r}', field=f'vertices[{n}]')
    if len(set(vertices)) != len(vertices):
        raise InstanceParseError('duplicated vertex id', field='vertices')
    known = set(vertices)

    raw_edges = data.get('edges')
    if not isinstance(raw_edges, list):
        raise InstanceParseError('expected a list', field='edges')
    edges, costs = {}, {}
    for n, e in enumerate(raw_edges):
        where = f'edges[{n}]'
        if not isinstance(e, dict) or set(e) != {'id', 'u', 'v', 'cost'}:
            raise InstanceParseError('expected keys "id", "u", "v" and "cost"', field=where)
        if not isinstance(e['id'], str):
            raise InstanceParseError(f'edge ids are strings, got {e["id"]!r}', field=f'{where}.id')
        if e['id'] in edges:
            raise InstanceParseError(f'duplicated edge id {e["id"]}', field=f'{where}.id')
        for end in ('u', 'v'):
            if e[end] not in known:
                raise InstanceParseError(f'unknown vertex {e[end]!r}', field=f'{where}.{end}')
        if e['u'] == e['v']:
            raise InstanceParseError(f'self-loop at {e["u"]}', field=where)
        try:
            cost = parse_rational(e['cost'])
        except (ValueError, ZeroDivisionError) as error:
            raise InstanceParseError(str(error), field=f'{where}.cost')
        if cost < 0:
            raise InstanceParseError(f'negative cost {e["cost"]}', field=f'{where}.cost')
        edges[e['id']] = (e['u'], e['v'])
        costs[e['id']] = cost

    raw_constraints = data.get('constraints', {})
    if not isinstance(raw_constraints, dict):
        raise InstanceParseError('expected an object keyed by vertex', field='constraints')
    for v in raw_constraints:
        if v not in known:
            raise InstanceParseError(f'unknown vertex {v!r}', field='constraints')
    constraints = {}
    for v in vertices:
        incident = frozenset(f for f, (a, b) in edges.items() if v in (a, b))
        descriptor = raw_constraints.get(v, {'kind': 'free'})
        constraints[v] = build_matroid(descriptor, incident, where=f'constraints.{v}')

    metadata = data.get('metadata', {})
    if not isinstance(metadata, dict):
        raise InstanceParseError('expected an object', field='metadata')
    return Instance(vertices=list(vertices), edges=edges, costs=costs, constraints=constraints, metadata=metadata)


def parse_instance(path: str) -> Instance:
    """ read and validate an instance file

    @param path: path to the JSON instance file
    @return: Instance
    """
    try:
        data = json_load(path)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f'line {e.lineno} column {e.colno}: {e.msg}', field=path)
    except OSError as e:
        raise InstanceParseError(str(e), field=path)
    return instance_from_dict(data)


def _cost_value(cost: Fraction):
    return cost.numerator if cost.denominator == 1 else format_rational(cost)


def emit_instance(instance: Instance) -> Dict:
    """ JSON-able dictionary in the instance file format """
    constraints = {}
    for v in sorted(instance.constraints):
        m = instance.constraints[v]
        if m.kind not in CONSTRAINT_KINDS:
            raise ConfigurationError(f'constraint of {v} has no file representation: {m.kind}')
        if m.kind != 'free':
            constraints[v] = m.describe()
    return {
        'vertices': list(instance.vertices),
        'edges': [{'id': f, 'u': instance.edges[f][0], 'v': instance.edges[f][1],
                   'cost': _cost_value(instance.costs[f])} for f in sorted(instance.edges)],
        'constraints': constraints,
        'metadata': instance.metadata
    }


def save_instance(instance: Instance, path: str):
    json_save(emit_instance(instance), path)
