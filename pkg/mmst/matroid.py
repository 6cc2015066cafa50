""" Matroids over edge identifiers.

A matroid is represented by its rank function. Concrete kinds (free, uniform, partition, laminar, explicit) come from
the instance file; derived kinds (direct sum, union, contraction, loop extension, restriction) are built while degree
constraints are contracted and relaxed. Every value is immutable after construction and rank queries are memoized
per subset.
"""
import threading
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exceptions import MatroidDomainError, ConfigurationError
from .util import powerset

MATROID_THRESHOLD = 16

__all__ = (
    'MATROID_THRESHOLD',
    'Matroid',
    'FreeMatroid',
    'UniformMatroid',
    'PartitionMatroid',
    'LaminarMatroid',
    'ExplicitMatroid',
    'DirectSum',
    'MatroidUnion',
    'Contraction',
    'LoopExtension',
    'Restriction',
    'ConstraintDecomposition',
    'direct_sum',
    'matroid_union',
    'contract_matroid',
    'restrict',
    'check_rank_axioms'
)


class Matroid:
    """ matroid given by a rank function over a ground set of edge ids """

    kind = None

    def __init__(self, ground: Iterable):
        ground = list(ground)
        if len(set(ground)) != len(ground):
            raise MatroidDomainError(f'duplicated element in ground set {ground}')
        self.ground = tuple(sorted(ground))
        self.ground_set = frozenset(self.ground)
        self._cache = {}
        self._lock = threading.RLock()

    def __len__(self):
        return len(self.ground)

    def __repr__(self):
        return f'{type(self).__name__}({list(self.ground)})'

    def _subset(self, a) -> frozenset:
        a = self.ground_set if a is None else frozenset(a)
        outside = a - self.ground_set
        if outside:
            raise MatroidDomainError(f'elements {sorted(outside)} are not in the ground set of {self!r}')
        return a

    def _rank(self, a: frozenset) -> int:
        raise NotImplementedError

    def rank(self, a: Iterable = None) -> int:
        """ rank of a subset of the ground set

        @param a: [optional] subset of the ground set (the whole ground set as default)
        @return: r(a)
        """
        a = self._subset(a)
        with self._lock:
            if a not in self._cache:
                self._cache[a] = self._rank(a)
            return self._cache[a]

    def is_independent(self, a: Iterable) -> bool:
        a = self._subset(a)
        return self.rank(a) == len(a)

    def is_free_element(self, e) -> bool:
        """ coloop test: e can be added to every independent set """
        if e not in self.ground_set:
            raise MatroidDomainError(f'element {e} is not in the ground set of {self!r}')
        return self.rank() == self.rank(self.ground_set - {e}) + 1

    def min_removals_to_independent(self, a: Iterable) -> int:
        """ minimum number of elements to drop from `a` so that the rest is independent """
        a = self._subset(a)
        return len(a) - self.rank(a)

    def independent_sets(self, threshold: int = MATROID_THRESHOLD):
        """ enumerate all independent subsets as frozensets """
        if len(self.ground) > threshold:
            raise ConfigurationError(
                f'ground set of size {len(self.ground)} exceeds the enumeration threshold {threshold}')
        for subset in powerset(self.ground):
            subset = frozenset(subset)
            if self.rank(subset) == len(subset):
                yield subset

    def describe(self) -> Dict:
        return {'kind': self.kind, 'ground': list(self.ground)}


class FreeMatroid(Matroid):
    """ every subset is independent """

    kind = 'free'

    def _rank(self, a):
        return len(a)

    def describe(self):
        return {'kind': self.kind}


class UniformMatroid(Matroid):
    """ subsets of size at most k are independent """

    kind = 'uniform'

    def __init__(self, ground: Iterable, k: int):
        super().__init__(ground)
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise MatroidDomainError(f'uniform rank must be a non-negative integer, got {k!r}')
        self.k = k

    def __repr__(self):
        return f'UniformMatroid({list(self.ground)}, k={self.k})'

    def _rank(self, a):
        return min(self.k, len(a))

    def describe(self):
        return {'kind': self.kind, 'rank': self.k}


def _capacity(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise MatroidDomainError(f'{where}: capacity must be a non-negative integer, got {value!r}')
    return value


class PartitionMatroid(Matroid):
    """ at most `capacity` elements from each block """

    kind = 'partition'

    def __init__(self, blocks: Sequence[Tuple[Iterable, int]], ground: Iterable = None):
        """ partition matroid

        @param blocks: a list of (elements, capacity)
        @param ground: [optional] ground set, which has to equal the union of the blocks
        """
        self.blocks = []
        seen = set()
        for n, (elements, capacity) in enumerate(blocks):
            elements = frozenset(elements)
            if elements & seen:
                raise MatroidDomainError(f'block {n} overlaps an earlier block: {sorted(elements & seen)}')
            seen |= elements
            self.blocks.append((elements, _capacity(capacity, f'block {n}')))
        if ground is not None and frozenset(ground) != seen:
            raise MatroidDomainError(f'blocks {sorted(seen)} do not partition the ground set {sorted(ground)}')
        super().__init__(seen)

    def _rank(self, a):
        return sum(min(capacity, len(a & elements)) for elements, capacity in self.blocks)

    def describe(self):
        return {'kind': self.kind,
                'blocks': [{'edges': sorted(e), 'capacity': c} for e, c in self.blocks]}


class LaminarMatroid(Matroid):
    """ at most `capacity` elements from each set of a laminar family; elements outside the family are free """

    kind = 'laminar'

    def __init__(self, ground: Iterable, sets: Sequence[Tuple[Iterable, int]]):
        super().__init__(ground)
        self.sets = []
        for n, (elements, capacity) in enumerate(sets):
            elements = frozenset(elements)
            if not elements <= self.ground_set:
                raise MatroidDomainError(f'laminar set {n} is not a subset of the ground set')
            self.sets.append((elements, _capacity(capacity, f'laminar set {n}')))
        for (i, (a, _)), (j, (b, _)) in combinations(enumerate(self.sets), 2):
            if a & b and not (a <= b or b <= a):
                raise MatroidDomainError(f'laminar sets {i} and {j} cross')
        # evaluation order: children before parents
        self._order = sorted(range(len(self.sets)), key=lambda i: (len(self.sets[i][0]), i))
        position = {i: p for p, i in enumerate(self._order)}
        self._parent = {}
        for i in self._order:
            above = [j for j in self._order[position[i] + 1:] if self.sets[i][0] <= self.sets[j][0]]
            self._parent[i] = above[0] if above else None

    def _rank(self, a):
        value = {}
        children = {i: [] for i in self._order}
        roots = []
        for i in self._order:
            elements, capacity = self.sets[i]
            inner = sum(len(a & self.sets[c][0]) for c in children[i])
            value[i] = min(capacity, len(a & elements) - inner + sum(value[c] for c in children[i]))
            if self._parent[i] is None:
                roots.append(i)
            else:
                children[self._parent[i]].append(i)
        return len(a) - sum(len(a & self.sets[i][0]) for i in roots) + sum(value[i] for i in roots)

    def describe(self):
        return {'kind': self.kind,
                'sets': [{'edges': sorted(e), 'capacity': c} for e, c in self.sets]}


class ExplicitMatroid(Matroid):
    """ complete rank table, validated on construction """

    kind = 'explicit'

    def __init__(self, ground: Iterable, rank_table: Mapping[Iterable, int], threshold: int = MATROID_THRESHOLD):
        super().__init__(ground)
        if len(self.ground) > threshold:
            raise ConfigurationError(
                f'explicit matroid on {len(self.ground)} elements exceeds the enumeration threshold {threshold}')
        table = {frozenset(k): v for k, v in rank_table.items()}
        missing = [s for s in powerset(self.ground) if frozenset(s) not in table]
        if missing:
            raise MatroidDomainError(f'rank table misses {len(missing)} subsets, e.g. {list(missing[0])}')
        self._table = table
        witness = check_rank_axioms(self, max_ground=threshold)
        if witness is not None:
            raise MatroidDomainError(f'rank table is not a matroid rank function: {witness}')

    @classmethod
    def from_bases(cls, ground: Iterable, bases: Iterable[Iterable], threshold: int = MATROID_THRESHOLD):
        """ explicit matroid from its bases, r(A) = max |A ∩ B| over the bases """
        ground = list(ground)
        bases = [frozenset(b) for b in bases]
        if not bases:
            raise MatroidDomainError('at least one basis is required (use [[]] for the rank-zero matroid)')
        if len({len(b) for b in bases}) != 1:
            raise MatroidDomainError('bases must have equal size')
        for b in bases:
            if not b <= frozenset(ground):
                raise MatroidDomainError(f'basis {sorted(b)} is not a subset of the ground set')
        if len(ground) > threshold:
            raise ConfigurationError(
                f'explicit matroid on {len(ground)} elements exceeds the enumeration threshold {threshold}')
        table = {frozenset(s): max(len(frozenset(s) & b) for b in bases) for s in powerset(sorted(ground))}
        return cls(ground, table, threshold=threshold)

    def _rank(self, a):
        return self._table[a]

    def describe(self):
        r = self.rank()
        return {'kind': self.kind,
                'bases': [sorted(b) for b in self.independent_sets() if len(b) == r]}


class DirectSum(Matroid):
    """ disjoint union of matroids """

    kind = 'direct_sum'

    def __init__(self, parts: Sequence[Matroid]):
        self.parts = list(parts)
        seen = set()
        for part in self.parts:
            if part.ground_set & seen:
                raise MatroidDomainError(f'direct sum parts overlap on {sorted(part.ground_set & seen)}')
            seen |= part.ground_set
        super().__init__(seen)

    def _rank(self, a):
        return sum(part.rank(a & part.ground_set) for part in self.parts)

    def describe(self):
        return {'kind': self.kind, 'parts': [p.describe() for p in self.parts]}


class MatroidUnion(Matroid):
    """ independent sets are unions of one independent set of each side """

    kind = 'union'

    def __init__(self, left: Matroid, right: Matroid, threshold: int = MATROID_THRESHOLD):
        if left.ground_set != right.ground_set:
            raise MatroidDomainError(f'union requires equal ground sets: {list(left.ground)} vs {list(right.ground)}')
        if len(left.ground) > threshold:
            raise ConfigurationError(
                f'union on {len(left.ground)} elements exceeds the enumeration threshold {threshold}')
        super().__init__(left.ground)
        self.left = left
        self.right = right

    def _rank(self, a):
        elements = sorted(a)
        best = len(elements)
        for size in range(len(elements) + 1):
            for b in combinations(elements, size):
                b = frozenset(b)
                value = len(elements) - size + self.left.rank(b) + self.right.rank(b)
                if value < best:
                    best = value
        return best

    def describe(self):
        return {'kind': self.kind, 'left': self.left.describe(), 'right': self.right.describe()}


class Contraction(Matroid):
    """ M / C on ground ∖ C with r'(A) = r(A ∪ C) − r(C) """

    kind = 'contraction'

    def __init__(self, base: Matroid, contracted: Iterable):
        contracted = frozenset(contracted)
        if not contracted <= base.ground_set:
            raise MatroidDomainError(f'cannot contract {sorted(contracted - base.ground_set)}: not in the ground set')
        super().__init__(base.ground_set - contracted)
        self.base = base
        self.contracted = contracted
        self._offset = base.rank(contracted)

    def _rank(self, a):
        return self.base.rank(a | self.contracted) - self._offset

    def describe(self):
        return {'kind': self.kind, 'contracted': sorted(self.contracted), 'base': self.base.describe()}


class LoopExtension(Matroid):
    """ base matroid extended by loops """

    kind = 'loop_extension'

    def __init__(self, base: Matroid, loops: Iterable):
        loops = frozenset(loops)
        if loops & base.ground_set:
            raise MatroidDomainError(f'loops {sorted(loops & base.ground_set)} already belong to the base')
        super().__init__(base.ground_set | loops)
        self.base = base
        self.loops = loops

    def _rank(self, a):
        return self.base.rank(a & self.base.ground_set)

    def describe(self):
        return {'kind': self.kind, 'loops': sorted(self.loops), 'base': self.base.describe()}


class Restriction(Matroid):
    """ M restricted to a subset of its ground set (deletion of the rest) """

    kind = 'restriction'

    def __init__(self, base: Matroid, kept: Iterable):
        kept = frozenset(kept)
        if not kept <= base.ground_set:
            raise MatroidDomainError(f'cannot restrict to {sorted(kept - base.ground_set)}: not in the ground set')
        super().__init__(kept)
        self.base = base

    def _rank(self, a):
        return self.base.rank(a)

    def describe(self):
        return {'kind': self.kind, 'ground': list(self.ground), 'base': self.base.describe()}


def direct_sum(parts: Iterable[Matroid]) -> Matroid:
    """ direct sum of matroids with pairwise disjoint ground sets (free matroid on ∅ for no parts) """
    parts = list(parts)
    if not parts:
        return FreeMatroid(())
    return DirectSum(parts)


def matroid_union(m1: Matroid, m2: Matroid, threshold: int = MATROID_THRESHOLD) -> Matroid:
    return MatroidUnion(m1, m2, threshold=threshold)


def contract_matroid(m: Matroid, c: Iterable) -> Matroid:
    """ contraction M / c; nested contractions are flattened """
    c = frozenset(c)
    if not c <= m.ground_set:
        raise MatroidDomainError(f'cannot contract {sorted(c - m.ground_set)}: not in the ground set of {m!r}')
    if not c:
        return m
    if isinstance(m, Contraction):
        return Contraction(m.base, m.contracted | c)
    return Contraction(m, c)


def restrict(m: Matroid, kept: Iterable) -> Matroid:
    """ restriction of M to `kept`; nested restrictions are flattened """
    kept = frozenset(kept)
    if not kept <= m.ground_set:
        raise MatroidDomainError(f'cannot restrict to {sorted(kept - m.ground_set)}: not in the ground set of {m!r}')
    if kept == m.ground_set:
        return m
    if isinstance(m, Restriction):
        return Restriction(m.base, kept)
    return Restriction(m, kept)


def check_rank_axioms(m: Matroid, max_ground: int = 12) -> Optional[str]:
    """ check a rank function by subset enumeration

    Unit increase on single-element extensions gives monotonicity and r(A) ≤ |A|; the local exchange inequality
    r(A+e) + r(A+f) ≥ r(A+e+f) + r(A) is equivalent to submodularity.

    @param m: matroid
    @param max_ground: enumeration threshold
    @return: None if the rank function is a matroid rank function, otherwise a description of the first failure
    """
    if len(m.ground) > max_ground:
        raise ConfigurationError(f'ground set of size {len(m.ground)} exceeds the axiom-check threshold {max_ground}')
    if m.rank(()) != 0:
        return f'r(∅) = {m.rank(())}'
    for subset in powerset(m.ground):
        a = frozenset(subset)
        ra = m.rank(a)
        outside = [e for e in m.ground if e not in a]
        for e in outside:
            increase = m.rank(a | {e}) - ra
            if increase not in (0, 1):
                return f'r({sorted(a | {e})}) - r({sorted(a)}) = {increase}'
        for e, f in combinations(outside, 2):
            if m.rank(a | {e}) + m.rank(a | {f}) < m.rank(a | {e, f}) + ra:
                return f'submodularity fails at A={sorted(a)}, e={e}, f={f}'
    return None


class ConstraintDecomposition:
    """ degree constraint of a node written as a direct sum of per-vertex parts """

    def __init__(self, parts: Mapping[str, Matroid]):
        """ degree constraint of a node

        @param parts: a dictionary mapping from original vertex id to its remaining degree bound
        """
        self.parts = dict(sorted(parts.items()))
        self._owner = {}
        for vertex, part in self.parts.items():
            for e in part.ground:
                if e in self._owner:
                    raise MatroidDomainError(f'edge {e} appears in the parts of {self._owner[e]} and {vertex}')
                self._owner[e] = vertex

    def __repr__(self):
        return f'ConstraintDecomposition({self.parts})'

    @property
    def ground(self) -> frozenset:
        return frozenset(self._owner)

    def matroid(self) -> Matroid:
        """ N_w as the direct sum of the parts """
        return direct_sum(self.parts.values())

    def part_of(self, edge) -> str:
        if edge not in self._owner:
            raise MatroidDomainError(f'edge {edge} is not in the degree constraint')
        return self._owner[edge]

    def is_contained(self, edge) -> bool:
        """ an edge is contained in the constraint unless it is a free element """
        return not self.parts[self.part_of(edge)].is_free_element(edge)

    def contract(self, edge) -> 'ConstraintDecomposition':
        vertex = self.part_of(edge)
        parts = dict(self.parts)
        parts[vertex] = contract_matroid(parts[vertex], {edge})
        return ConstraintDecomposition(parts)

    def delete(self, edge) -> 'ConstraintDecomposition':
        vertex = self.part_of(edge)
        parts = dict(self.parts)
        parts[vertex] = restrict(parts[vertex], parts[vertex].ground_set - {edge})
        return ConstraintDecomposition(parts)

    def merge(self, other: 'ConstraintDecomposition') -> 'ConstraintDecomposition':
        overlap = set(self.parts) & set(other.parts)
        if overlap:
            raise MatroidDomainError(f'vertices {sorted(overlap)} belong to both decompositions')
        return ConstraintDecomposition({**self.parts, **other.parts})

    def replace(self, parts: Mapping[str, Matroid]) -> 'ConstraintDecomposition':
        assert set(parts) <= set(self.parts), f'unknown vertices {sorted(set(parts) - set(self.parts))}'
        return ConstraintDecomposition({**self.parts, **parts})

    def describe(self) -> Dict:
        return {v: p.describe() for v, p in self.parts.items()}
