"""
Input-Output Equation Module
Builds the coefficients c_j, d_j of a model's input-output equation

    y^(n) + c_{n-1} y^(n-1) + ... + c_0 y = d_{n-1} u^(n-1) + ... + d_0 u

from incoming forests of the augmented graphs (any model) or from
elementary symmetric polynomial closed forms (the path families), with a
characteristic-polynomial oracle for cross-checking.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Mapping, Sequence, Tuple

from ..config import settings
from ..core.graph_model import (
    Model,
    build_gtilde,
    build_gtilde_star,
    compartmental_matrix,
    make_cycle_model,
    make_path_leak_model,
    require_valid,
)
from ..core.symbolic import ParamLabel, Polynomial, esp, evaluate, product
from ..errors import DimensionMismatchError, ParameterRangeError, SearchBoundExceededError
from ..graphs.forest_enum import forest_sum, path_forest_sum

logger = logging.getLogger(__name__)


# ============================================================================
# IOEquation
# ============================================================================

@dataclass(frozen=True)
class IOEquation:
    """
    Coefficients of one model's input-output equation.

    c[j] is c_j and d[j] is d_j for j = 0..n-1; c_n = 1 is implicit.
    `parameters` is the model's full parameter set in label order.
    """
    n: int
    c: Tuple[Polynomial, ...]
    d: Tuple[Polynomial, ...]
    parameters: Tuple[ParamLabel, ...]

    def __post_init__(self):
        if len(self.c) != self.n or len(self.d) != self.n:
            raise DimensionMismatchError(f"expected {self.n} c and d coefficients, got {len(self.c)} and {len(self.d)}")

    def coefficients(self) -> List[Polynomial]:
        """Coefficient-map order: c_{n-1}..c_0, then d_{n-1}..d_0"""
        return list(reversed(self.c)) + list(reversed(self.d))

    def indexed(self) -> List[Tuple[str, Polynomial]]:
        """(name, polynomial) pairs in witness order c_0..c_{n-1}, d_0..d_{n-1}"""
        return [(f"c_{j}", p) for j, p in enumerate(self.c)] + [(f"d_{j}", p) for j, p in enumerate(self.d)]

    def labels(self) -> FrozenSet[ParamLabel]:
        """Labels that actually occur in some coefficient"""
        found = set()
        for poly in self.c + self.d:
            found.update(poly.labels())
        return frozenset(found)

    def render(self) -> str:
        lhs = [_derivative("y", self.n)]
        for j in range(self.n - 1, -1, -1):
            if self.c[j]:
                lhs.append(_scaled(self.c[j], _derivative("y", j)))
        rhs = [_scaled(self.d[j], _derivative("u", j)) for j in range(self.n - 1, -1, -1) if self.d[j]]
        return " + ".join(lhs) + " = " + (" + ".join(rhs) if rhs else "0")

    def to_json(self) -> Dict[str, List[str]]:
        return {"c": [str(p) for p in self.c], "d": [str(p) for p in self.d]}


def _derivative(symbol: str, order: int) -> str:
    return symbol if order == 0 else f"{symbol}^({order})"


def _scaled(coefficient: Polynomial, variable: str) -> str:
    if coefficient == 1:
        return variable
    text = str(coefficient)
    if len(coefficient) > 1 or text.startswith("-"):
        text = f"({text})"
    return f"{text} {variable}"


# ============================================================================
# Forest construction (any single-input single-output model)
# ============================================================================

def ioeq_forests(m: Model) -> IOEquation:
    """
    c_j = sum of pi_F over F_{n-j}(G~)
    d_j = sum of pi_F over F_{n-j-1}^{in,out}(G~*)
    """
    require_valid(m)
    n = m.n
    g = build_gtilde(m)
    g_star = build_gtilde_star(m)
    c = tuple(forest_sum(g, n - j) for j in range(n))
    d = tuple(path_forest_sum(g_star, n - j - 1, m.input, m.output) for j in range(n))
    logger.debug("ioeq by forests for %s", m.describe())
    return IOEquation(n=n, c=c, d=d, parameters=m.parameters)


# ============================================================================
# Closed forms (path families)
# ============================================================================

def _closed_form(n: int, parameters: Sequence[ParamLabel], pair: Tuple[ParamLabel, ParamLabel]) -> IOEquation:
    # c_j = sigma_{n-j}(Q) - (x*y) * sigma_{n-j-2}(Q minus {x, y})
    rest = [q for q in parameters if q not in pair]
    pair_product = product(pair)
    c = tuple(esp(n - j, parameters) - pair_product * esp(n - j - 2, rest) for j in range(n))
    backbone = product(ParamLabel.edge(v, v + 1) for v in range(1, n))
    d = (backbone,) + tuple(Polynomial.zero() for _ in range(n - 1))
    return IOEquation(n=n, c=c, d=d, parameters=tuple(parameters))


def ioeq_esp_leak(n: int, i: int) -> IOEquation:
    """Path model with a single leak at i < n, via symmetric polynomials"""
    if n < 2:
        raise ParameterRangeError(f"n must be at least 2, got {n}")
    if not 1 <= i <= n - 1:
        raise ParameterRangeError(f"leak index must satisfy 1 <= i < n, got i={i}, n={n}")
    q_i = make_path_leak_model(n, i).parameters
    return _closed_form(n, q_i, (ParamLabel.leak(i), ParamLabel.edge(i, i + 1)))


def ioeq_esp_cycle(n: int) -> IOEquation:
    """Path model closed by the back-edge n -> n-1, via symmetric polynomials"""
    q_n = make_cycle_model(n).parameters
    return _closed_form(n, q_n, (ParamLabel.edge(n - 1, n), ParamLabel.edge(n, n - 1)))


# ============================================================================
# Coefficient map
# ============================================================================

def coefficient_map(m: Model, theta: Mapping[ParamLabel, float]) -> List[float]:
    """Numeric coefficients c_{n-1}..c_0, d_{n-1}..d_0 at theta"""
    return [evaluate(p, theta) for p in ioeq_forests(m).coefficients()]


# ============================================================================
# Characteristic polynomial oracle
# ============================================================================

SPoly = List[Polynomial]  # coefficients in s, index = power


def _s_add(acc: SPoly, term: SPoly, sign: int) -> SPoly:
    size = max(len(acc), len(term))
    out = []
    for k in range(size):
        left = acc[k] if k < len(acc) else Polynomial.zero()
        right = term[k] if k < len(term) else Polynomial.zero()
        out.append(left + right if sign > 0 else left - right)
    return out


def _s_mul(a: SPoly, b: SPoly) -> SPoly:
    out = [Polynomial.zero() for _ in range(len(a) + len(b) - 1)]
    for i, p in enumerate(a):
        if not p:
            continue
        for j, q in enumerate(b):
            if q:
                out[i + j] = out[i + j] + p * q
    return out


def _determinant(n: int, entry: Callable[[int, int], SPoly]) -> SPoly:
    """Laplace expansion along the first remaining row, memoised on columns"""
    memo: Dict[Tuple[int, ...], SPoly] = {}

    def minor(row: int, cols: Tuple[int, ...]) -> SPoly:
        if row == n:
            return [Polynomial.one()]
        if cols in memo:
            return memo[cols]
        total: SPoly = [Polynomial.zero()]
        for position, col in enumerate(cols):
            element = entry(row, col)
            if not any(element):
                continue
            sub = minor(row + 1, cols[:position] + cols[position + 1:])
            total = _s_add(total, _s_mul(element, sub), 1 if position % 2 == 0 else -1)
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def charpoly_oracle(m: Model) -> List[Polynomial]:
    """
    Coefficients s^0..s^{n-1} of det(sI - A) by cofactor expansion.

    Raises:
        SearchBoundExceededError: n above settings.CHARPOLY_MAX_N
    """
    require_valid(m)
    n = m.n
    if n > settings.CHARPOLY_MAX_N:
        raise SearchBoundExceededError(
            f"cofactor expansion is limited to n <= {settings.CHARPOLY_MAX_N}, got n={n}"
        )
    a = compartmental_matrix(m)

    def entry(i: int, j: int) -> SPoly:
        if i == j:
            return [-a[i, j], Polynomial.one()]
        return [-a[i, j]]

    det = _determinant(n, entry)
    det += [Polynomial.zero()] * (n + 1 - len(det))
    if det[n] != 1:
        raise ArithmeticError(f"det(sI - A) is not monic: leading coefficient {det[n]}")
    return det[:n]
