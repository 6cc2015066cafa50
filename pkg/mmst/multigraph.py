""" Contracted multigraph H=(W,F).

Nodes are integers that are never reused: the original vertices get 0..n-1 in sorted order and every contraction
creates a fresh node. Edges keep their original ids.
"""
from typing import Callable, Dict, Iterable, List, Tuple

import networkx as nx

from .exceptions import GraphDomainError

__all__ = ('Multigraph',)


class Multigraph:
    """ undirected multigraph with node merging and a vertex-to-node map """

    def __init__(self,
                 nodes: Iterable[int],
                 edges: Dict[str, Tuple[int, int, str]],
                 vertex_map: Dict[str, int],
                 next_node: int = None):
        """ multigraph

        @param nodes: node ids
        @param edges: a dictionary mapping edge id to (endpoint node, endpoint node, original edge id)
        @param vertex_map: a dictionary mapping original vertex id to its current node
        @param next_node: [optional] the id given to the next merged node
        """
        self.nodes = set(nodes)
        self.edges = dict(edges)
        self.vertex_map = dict(vertex_map)
        self.members = {w: set() for w in self.nodes}
        for v, w in self.vertex_map.items():
            if w not in self.members:
                raise GraphDomainError(f'vertex {v} is mapped to unknown node {w}')
            self.members[w].add(v)
        self._incident = {w: set() for w in self.nodes}
        for f, (a, b, _) in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise GraphDomainError(f'edge {f} has an unknown endpoint')
            if a == b:
                raise GraphDomainError(f'edge {f} is a self-loop')
            self._incident[a].add(f)
            self._incident[b].add(f)
        self.next_node = max(self.nodes, default=-1) + 1 if next_node is None else next_node

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Dict[str, Tuple[str, str]]) -> 'Multigraph':
        """ build H=G from the original graph

        @param vertices: original vertex ids
        @param edges: a dictionary mapping edge id to its original endpoints (u, v)
        """
        vertex_map = {v: n for n, v in enumerate(sorted(vertices))}
        for f, (u, v) in edges.items():
            if u not in vertex_map or v not in vertex_map:
                raise GraphDomainError(f'edge {f} has an unknown endpoint')
        return cls(
            nodes=vertex_map.values(),
            edges={f: (vertex_map[u], vertex_map[v], f) for f, (u, v) in edges.items()},
            vertex_map=vertex_map)

    def __repr__(self):
        return f'Multigraph(nodes={sorted(self.nodes)}, edges={sorted(self.edges)})'

    def _check_node(self, w):
        if w not in self.nodes:
            raise GraphDomainError(f'unknown node {w}')

    def _check_edge(self, f):
        if f not in self.edges:
            raise GraphDomainError(f'unknown edge {f}')

    def copy(self) -> 'Multigraph':
        return Multigraph(self.nodes, self.edges, self.vertex_map, next_node=self.next_node)

    def endpoints(self, f) -> Tuple[int, int]:
        self._check_edge(f)
        a, b, _ = self.edges[f]
        return a, b

    def other_endpoint(self, f, w) -> int:
        a, b = self.endpoints(f)
        assert w in (a, b), f'node {w} is not an endpoint of {f}'
        return b if a == w else a

    def delta(self, w) -> frozenset:
        """ edges incident to node w """
        self._check_node(w)
        return frozenset(self._incident[w])

    def edges_within(self, s: Iterable) -> frozenset:
        """ edges with both endpoints in the node set s """
        s = set(s)
        for w in s:
            self._check_node(w)
        return frozenset(f for f, (a, b, _) in self.edges.items() if a in s and b in s)

    def delete_edge(self, f):
        self._check_edge(f)
        a, b, _ = self.edges.pop(f)
        self._incident[a].discard(f)
        self._incident[b].discard(f)

    def contract_edge(self, f, on_loop: Callable[[str], None] = None) -> int:
        """ merge the endpoints of f into a fresh node and drop the resulting self-loops

        @param f: edge id
        @param on_loop: [optional] called with the id of every parallel edge removed as a self-loop
        @return: the merged node
        """
        self._check_edge(f)
        a, b, _ = self.edges[f]
        merged = self.next_node
        self.next_node += 1
        self.nodes -= {a, b}
        self.nodes.add(merged)
        self.members[merged] = self.members.pop(a) | self.members.pop(b)
        for v in self.members[merged]:
            self.vertex_map[v] = merged
        incident = self._incident.pop(a) | self._incident.pop(b)
        self._incident[merged] = set()
        for g in sorted(incident):
            x, y, original = self.edges[g]
            x = merged if x in (a, b) else x
            y = merged if y in (a, b) else y
            if x == y:
                del self.edges[g]
                if g != f and on_loop is not None:
                    on_loop(g)
                continue
            self.edges[g] = (x, y, original)
            self._incident[merged].add(g)
        return merged

    def induced_subgraph(self, s: Iterable) -> 'Multigraph':
        s = set(s)
        for w in s:
            self._check_node(w)
        return Multigraph(
            nodes=s,
            edges={f: self.edges[f] for f in self.edges_within(s)},
            vertex_map={v: w for v, w in self.vertex_map.items() if w in s},
            next_node=self.next_node)

    def node_set_of(self, vertices: Iterable[str]) -> frozenset:
        """ project a set of original vertices onto the current nodes """
        return frozenset(self.vertex_map[v] for v in vertices)

    def vertices_of(self, nodes: Iterable[int]) -> frozenset:
        """ original vertices contained in the given nodes """
        return frozenset(v for w in nodes for v in self.members[w])

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(sorted(self.nodes))
        for f in sorted(self.edges):
            a, b, _ = self.edges[f]
            graph.add_edge(a, b, key=f)
        return graph

    def is_connected(self) -> bool:
        return len(self.nodes) <= 1 or nx.is_connected(self.to_networkx())

    def sorted_nodes(self) -> List[int]:
        return sorted(self.nodes)
