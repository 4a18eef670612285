"""
Graph Model Module
Linear compartmental models (G, In, Out, Leak), their augmented graphs
and compartmental matrices, plus constructors for the path families
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Mapping, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import InvalidModelError, ParameterRangeError
from .symbolic import LEAK_SINK, ParamLabel, Polynomial, evaluate

logger = logging.getLogger(__name__)


# ============================================================================
# Model
# ============================================================================

class Model(BaseModel):
    """
    A single-input single-output linear compartmental model.

    Compartments are 1..n. Edges are (from, to) pairs exactly as stored in
    model files; labels a_{to,from} are derived, never stored. Edges and leaks
    are kept sorted but not de-duplicated, so validate() can report repeats.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int
    edges: Tuple[Tuple[int, int], ...] = ()
    input: int
    output: int
    leaks: Tuple[int, ...] = ()

    @field_validator("edges")
    @classmethod
    def _sort_edges(cls, value):
        return tuple(sorted(value))

    @field_validator("leaks")
    @classmethod
    def _sort_leaks(cls, value):
        return tuple(sorted(value))

    @property
    def parameters(self) -> Tuple[ParamLabel, ...]:
        """Edge labels a_{to,from} and leak labels a_{0,i}, in label order"""
        labels = {ParamLabel.edge(src, dst) for src, dst in self.edges}
        labels.update(ParamLabel.leak(i) for i in self.leaks)
        return tuple(sorted(labels))

    def describe(self) -> str:
        leaks = "{" + ",".join(str(i) for i in self.leaks) + "}"
        return f"n={self.n} in={self.input} out={self.output} leaks={leaks} edges={len(self.edges)}"


def validate(model: Model) -> List[str]:
    """
    Check every model invariant.

    Returns:
        Human-readable violations; an empty list means the model is valid
    """
    violations: List[str] = []
    n = model.n
    if n < 1:
        violations.append(f"n must be at least 1, got {n}")

    seen = set()
    for src, dst in model.edges:
        if src == dst:
            violations.append(f"self-loop at compartment {src}")
        if not (1 <= src <= n and 1 <= dst <= n):
            violations.append(f"edge ({src},{dst}) outside 1..{n}")
        if (src, dst) in seen:
            violations.append(f"duplicate edge ({src},{dst})")
        seen.add((src, dst))

    if not 1 <= model.input <= n:
        violations.append(f"input {model.input} outside 1..{n}")
    if not 1 <= model.output <= n:
        violations.append(f"output {model.output} outside 1..{n}")

    seen_leaks = set()
    for i in model.leaks:
        if not 1 <= i <= n:
            violations.append(f"leak {i} outside 1..{n}")
        if i in seen_leaks:
            violations.append(f"duplicate leak {i}")
        seen_leaks.add(i)
    return violations


def require_valid(model: Model) -> None:
    """Raise InvalidModelError when validate() reports anything"""
    violations = validate(model)
    if violations:
        raise InvalidModelError(violations)


# ============================================================================
# Augmented graphs
# ============================================================================

@dataclass(frozen=True)
class AugmentedGraph:
    """
    Model graph on vertices {0} ∪ 1..n with labeled edges.

    Vertex 0 is the leak sink; leak i is the edge i -> 0 labeled a_{0,i}.
    """
    n: int
    edges: FrozenSet[ParamLabel]

    @property
    def vertices(self) -> range:
        return range(0, self.n + 1)

    @property
    def parameters(self) -> Tuple[ParamLabel, ...]:
        return tuple(sorted(self.edges))

    def out_edges(self, vertex: int) -> Tuple[ParamLabel, ...]:
        return tuple(sorted(e for e in self.edges if e.source == vertex))

    def out_edge_map(self) -> Dict[int, Tuple[ParamLabel, ...]]:
        return {v: self.out_edges(v) for v in self.vertices}

    def __iter__(self) -> Iterator[ParamLabel]:
        return iter(self.parameters)

    def __len__(self) -> int:
        return len(self.edges)


def build_gtilde(model: Model) -> AugmentedGraph:
    """G with vertex 0 appended and one edge i -> 0 per leak i"""
    require_valid(model)
    return AugmentedGraph(model.n, frozenset(model.parameters))


def build_gtilde_star(model: Model) -> AugmentedGraph:
    """build_gtilde(model) minus every edge leaving the output, leak included"""
    full = build_gtilde(model)
    kept = frozenset(e for e in full.edges if e.source != model.output)
    return AugmentedGraph(full.n, kept)


# ============================================================================
# Compartmental matrix
# ============================================================================

@dataclass(frozen=True)
class SymbolicMatrix:
    """n x n grid of polynomials; rows and columns are 0-based here"""
    rows: Tuple[Tuple[Polynomial, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> Polynomial:
        i, j = index
        return self.rows[i][j]

    def column_sums(self) -> List[Polynomial]:
        return [sum((row[j] for row in self.rows), Polynomial.zero()) for j in range(self.n)]

    def evaluate(self, theta: Mapping[ParamLabel, float]) -> np.ndarray:
        """Numeric matrix A(theta)"""
        return np.array(
            [[evaluate(entry, theta) for entry in row] for row in self.rows],
            dtype=float,
        ).reshape(self.n, self.n)


def compartmental_matrix(model: Model) -> SymbolicMatrix:
    """
    A_ii = -a_{0i}[i in Leak] - sum over i->k of a_{ki};
    A_ij = a_{ij} when j -> i is an edge; 0 otherwise.
    """
    require_valid(model)
    n = model.n
    grid = [[Polynomial.zero() for _ in range(n)] for _ in range(n)]
    for src, dst in model.edges:
        label = Polynomial.variable(ParamLabel.edge(src, dst))
        grid[dst - 1][src - 1] = label
        grid[src - 1][src - 1] = grid[src - 1][src - 1] - label
    for i in model.leaks:
        grid[i - 1][i - 1] = grid[i - 1][i - 1] - Polynomial.variable(ParamLabel.leak(i))
    return SymbolicMatrix(tuple(tuple(row) for row in grid))


# ============================================================================
# Model families
# ============================================================================

def _path_edges(n: int) -> List[Tuple[int, int]]:
    return [(v, v + 1) for v in range(1, n)]


def make_path_leak_model(n: int, i: int) -> Model:
    """
    Path 1 -> 2 -> ... -> n, input 1, output n, single leak at i.

    i = n (leak at the output) is allowed here; the closed forms reject it.
    """
    if n < 2:
        raise ParameterRangeError(f"path models need n >= 2, got {n}")
    if not 1 <= i <= n:
        raise ParameterRangeError(f"leak index {i} outside 1..{n}")
    return Model(n=n, edges=_path_edges(n), input=1, output=n, leaks=[i])


def make_cycle_model(n: int) -> Model:
    """Path 1 -> ... -> n plus the back-edge n -> n-1, no leaks"""
    if n < 2:
        raise ParameterRangeError(f"cycle models need n >= 2, got {n}")
    return Model(n=n, edges=_path_edges(n) + [(n, n - 1)], input=1, output=n, leaks=[])


def random_models(count: int, seed: int, max_n: int = 6, max_edges: int = 12) -> List[Model]:
    """
    Seeded corpus of weakly connected random digraphs with at most one leak.

    Every model has n in 2..max_n, input 1, a random output and
    |E| + |Leak| <= max_edges.
    """
    rng = np.random.default_rng(seed)
    models: List[Model] = []
    while len(models) < count:
        n = int(rng.integers(2, max_n + 1))
        leaks = [int(rng.integers(1, n + 1))] if rng.random() < 0.7 else []
        upper = min(n * (n - 1), max_edges - len(leaks))
        if upper < n - 1:
            continue
        m = int(rng.integers(n - 1, upper + 1))
        graph = nx.gnm_random_graph(n, m, seed=int(rng.integers(2 ** 32)), directed=True)
        if not nx.is_weakly_connected(graph):
            continue
        edges = sorted((u + 1, v + 1) for u, v in graph.edges())
        models.append(Model(n=n, edges=edges, input=1, output=int(rng.integers(1, n + 1)), leaks=leaks))
    logger.debug("generated %d random models from seed %#x", len(models), seed)
    return models
