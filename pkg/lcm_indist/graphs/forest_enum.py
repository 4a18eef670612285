"""
Incoming Forest Enumeration
Enumerates incoming forests of an augmented graph and sums their productivities

An incoming forest is an edge subset whose underlying undirected graph is
acyclic and in which no vertex has more than one outgoing edge.
"""
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from networkx.utils import UnionFind

from ..core.graph_model import AugmentedGraph
from ..core.symbolic import Monomial, ParamLabel, Polynomial, monomial

logger = logging.getLogger(__name__)

Forest = FrozenSet[ParamLabel]


def _forest_key(forest: Forest) -> Tuple[ParamLabel, ...]:
    return tuple(sorted(forest))


def sort_forests(forests: Iterable[Forest]) -> List[Forest]:
    """Lexicographic order of sorted edge lists"""
    return sorted(forests, key=_forest_key)


class _RollbackUnionFind:
    """Union by size without path compression, so unions can be undone"""

    def __init__(self, vertices: Iterable[int]):
        self.parent = {v: v for v in vertices}
        self.size = {v: 1 for v in self.parent}
        self.history: List[Tuple[int, int]] = []

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def union(self, u: int, v: int) -> bool:
        """Join the components of u and v; False (and nothing recorded) on a cycle"""
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        self.history.append((ru, rv))
        return True

    def undo(self) -> None:
        ru, rv = self.history.pop()
        self.parent[rv] = rv
        self.size[ru] -= self.size[rv]


# ============================================================================
# Enumeration
# ============================================================================

def incoming_forests(g: AugmentedGraph, k: int) -> List[Forest]:
    """
    All k-edge incoming forests of g, in lexicographic order.

    Backtracks over vertices in ascending order; each vertex keeps no
    outgoing edge or exactly one, and an incremental union-find rejects
    choices that would close an undirected cycle.
    """
    if k < 0 or k > len(g):
        return []

    out_edges = g.out_edge_map()
    active = [v for v in g.vertices if out_edges[v]]
    # vertices still able to contribute an edge from position p onwards
    remaining = [len(active) - p for p in range(len(active) + 1)]

    dsu = _RollbackUnionFind(g.vertices)
    chosen: List[ParamLabel] = []
    found: List[Forest] = []

    def extend(position: int) -> None:
        if len(chosen) == k:
            found.append(frozenset(chosen))
            return
        if len(chosen) + remaining[position] < k:
            return
        vertex = active[position]
        for edge in out_edges[vertex]:
            if dsu.union(edge.source, edge.target):
                chosen.append(edge)
                extend(position + 1)
                chosen.pop()
                dsu.undo()
        extend(position + 1)

    extend(0)
    logger.debug("F_%d: %d incoming forests over %d edges", k, len(found), len(g))
    return sort_forests(found)


def contains_path(forest: Forest, i: int, j: int) -> bool:
    """
    True when the forest holds a directed path i -> j.

    Out-degree is at most one, so the path (if any) is the unique chain of
    out-edges starting at i. i == j is the empty path.
    """
    step = {edge.source: edge.target for edge in forest}
    vertex = i
    for _ in range(len(forest) + 1):
        if vertex == j:
            return True
        if vertex not in step:
            return False
        vertex = step[vertex]
    return False


def path_forests(g: AugmentedGraph, k: int, i: int, j: int) -> List[Forest]:
    """k-edge incoming forests of g that contain a directed path i -> j"""
    return [f for f in incoming_forests(g, k) if contains_path(f, i, j)]


def productivity(forest: Iterable[ParamLabel]) -> Monomial:
    """Product of edge labels; the empty forest gives the empty monomial (1)"""
    return monomial(forest)


def _sum_productivities(forests: Sequence[Forest]) -> Polynomial:
    terms: Dict[Monomial, int] = {}
    for forest in forests:
        mono = productivity(forest)
        terms[mono] = terms.get(mono, 0) + 1
    return Polynomial(terms)


def forest_sum(g: AugmentedGraph, k: int) -> Polynomial:
    """Sum of pi_F over F_k(g)"""
    return _sum_productivities(incoming_forests(g, k))


def path_forest_sum(g: AugmentedGraph, k: int, i: int, j: int) -> Polynomial:
    """Sum of pi_F over F_k^{i,j}(g)"""
    return _sum_productivities(path_forests(g, k, i, j))


# ============================================================================
# Brute-force oracle
# ============================================================================

def is_incoming_forest(edges: Iterable[ParamLabel]) -> bool:
    """Independent checker: out-degree <= 1 and no undirected cycle"""
    edges = list(edges)
    sources = [e.source for e in edges]
    if len(sources) != len(set(sources)):
        return False
    components = UnionFind()
    for edge in edges:
        if components[edge.source] == components[edge.target]:
            return False
        components.union(edge.source, edge.target)
    return True


def brute_force_forests(g: AugmentedGraph, k: int) -> List[Forest]:
    """Every k-subset of g's edges filtered by is_incoming_forest"""
    if k < 0:
        return []
    return sort_forests(
        frozenset(subset)
        for subset in itertools.combinations(g.parameters, k)
        if is_incoming_forest(subset)
    )
