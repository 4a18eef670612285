"""
Symbolic Algebra Module
Exact sparse multivariate polynomials over model rate parameters

A polynomial is a map from monomials (sorted tuples of ParamLabel, repeats
allowed) to nonzero Python integers. Integers are arbitrary width, so no
overflow handling is needed.
"""
import itertools
import logging
import math
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..errors import LabelDomainError, MissingAssignmentError, ParameterRangeError, PolynomialParseError

logger = logging.getLogger(__name__)

# Vertex that collects every leak in the augmented graph
LEAK_SINK = 0


# ============================================================================
# Parameter labels
# ============================================================================

@dataclass(frozen=True, order=True)
class ParamLabel:
    """
    Rate parameter a_{to,from}: flow from compartment `from_` into `to`.

    to == 0 marks a leak parameter a_{0,from}. Ordering is lexicographic
    on (to, from_), which every canonical form relies on.
    """
    to: int
    from_: int

    def __post_init__(self):
        if self.from_ < 1 or self.to < 0:
            raise ParameterRangeError(f"bad label indices ({self.to}, {self.from_})")
        if self.to == self.from_:
            raise ParameterRangeError(f"label a_{{{self.to},{self.from_}}} would be a self-loop")

    @classmethod
    def edge(cls, source: int, target: int) -> "ParamLabel":
        """Label of the edge source -> target"""
        return cls(target, source)

    @classmethod
    def leak(cls, compartment: int) -> "ParamLabel":
        return cls(LEAK_SINK, compartment)

    @property
    def source(self) -> int:
        return self.from_

    @property
    def target(self) -> int:
        return self.to

    @property
    def is_leak(self) -> bool:
        return self.to == LEAK_SINK

    def __str__(self) -> str:
        if self.to < 10 and self.from_ < 10:
            return f"a_{{{self.to}{self.from_}}}"
        return f"a_{{{self.to},{self.from_}}}"

    def __repr__(self) -> str:
        return f"ParamLabel({self})"


_LABEL_PATTERNS = (
    re.compile(r"a_\{(\d+),(\d+)\}"),
    re.compile(r"a_\{(\d)(\d)\}"),
    re.compile(r"a_?(\d)(\d)"),
)


def parse_label(text: str) -> ParamLabel:
    """
    Parse `a_{21}`, `a_{10,9}` or the shorthand `a21`.

    Raises:
        PolynomialParseError: text is not a label
    """
    token = text.strip()
    for pattern in _LABEL_PATTERNS:
        match = pattern.fullmatch(token)
        if match:
            try:
                return ParamLabel(int(match.group(1)), int(match.group(2)))
            except ParameterRangeError as e:
                raise PolynomialParseError(str(e)) from e
    raise PolynomialParseError(f"not a parameter label: {text!r}")


# ============================================================================
# Monomials
# ============================================================================

Monomial = Tuple[ParamLabel, ...]

ONE_MONOMIAL: Monomial = ()


def monomial(labels: Iterable[ParamLabel]) -> Monomial:
    """Canonical monomial for a multiset of labels"""
    return tuple(sorted(labels))


def _render_monomial(mono: Monomial) -> str:
    # edges first, leaks last: a_{21}*a_{32}*a_{03}
    ordered = sorted(mono, key=lambda label: (label.is_leak, label))
    factors = []
    for label, group in itertools.groupby(ordered):
        power = len(list(group))
        factors.append(f"{label}^{power}" if power > 1 else str(label))
    return "*".join(factors)


def _print_key(mono: Monomial) -> Tuple[int, Monomial]:
    return (len(mono), mono)


# ============================================================================
# Polynomials
# ============================================================================

class Polynomial:
    """
    Integer-coefficient sparse polynomial in ParamLabel variables.

    Instances are immutable; every operation returns a new polynomial.
    Zero coefficients are never stored, so structural equality is exact
    polynomial equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Iterable[ParamLabel], int]] = None):
        clean: Dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise TypeError(f"coefficients must be int, got {coeff!r}")
            if coeff == 0:
                continue
            key = monomial(mono)
            clean[key] = clean.get(key, 0) + coeff
        self._terms: Dict[Monomial, int] = {m: c for m, c in clean.items() if c != 0}
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({ONE_MONOMIAL: 1})

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls({ONE_MONOMIAL: value})

    @classmethod
    def variable(cls, label: ParamLabel) -> "Polynomial":
        return cls({(label,): 1})

    @classmethod
    def from_monomial(cls, mono: Iterable[ParamLabel], coeff: int = 1) -> "Polynomial":
        return cls({tuple(mono): coeff})

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int]) -> "Polynomial":
        # terms already canonical and zero-free
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self._terms.items())

    def coefficient(self, mono: Iterable[ParamLabel]) -> int:
        return self._terms.get(monomial(mono), 0)

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        """Terms in canonical print order: graded, then lexicographic, descending"""
        return sorted(self._terms.items(), key=lambda item: _print_key(item[0]), reverse=True)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1"""
        return max((len(m) for m in self._terms), default=-1)

    def labels(self) -> FrozenSet[ParamLabel]:
        return frozenset(label for mono in self._terms for label in mono)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial.constant(other)
        return None

    def __add__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            total = out.get(mono, 0) + coeff
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Polynomial":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: Dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in rhs._terms.items():
                key = monomial(m1 + m2)
                out[key] = out.get(key, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    # Comparison and rendering
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for index, (mono, coeff) in enumerate(self.sorted_terms()):
            magnitude = abs(coeff)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = _render_monomial(mono)
            else:
                body = f"{magnitude}*{_render_monomial(mono)}"
            if index == 0:
                pieces.append(("-" if coeff < 0 else "") + body)
            else:
                pieces.append((" - " if coeff < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


# ============================================================================
# Operations
# ============================================================================

def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def product(labels: Iterable[ParamLabel]) -> Polynomial:
    """Single monomial with coefficient 1; the empty product is 1"""
    return Polynomial.from_monomial(labels)


def esp(k: int, variables: Sequence[ParamLabel]) -> Polynomial:
    """
    Elementary symmetric polynomial sigma_k of a set of labels.

    sigma_0 = 1 (also for the empty set); sigma_k = 0 for k < 0 or k > |Q|.
    Built with the usual one-variable-at-a-time recurrence
    e_j <- e_j + x * e_{j-1}.
    """
    distinct = list(dict.fromkeys(variables))
    if k < 0 or k > len(distinct):
        return Polynomial.zero()
    partial = [Polynomial.one()] + [Polynomial.zero()] * k
    for i, label in enumerate(distinct):
        x = Polynomial.variable(label)
        for j in range(min(i + 1, k), 0, -1):
            partial[j] = partial[j] + x * partial[j - 1]
    return partial[k]


def relabel(p: Polynomial, mapping: Mapping[ParamLabel, ParamLabel]) -> Polynomial:
    """
    Rename every variable of p through `mapping` and re-canonicalize.

    Raises:
        LabelDomainError: p uses a label that `mapping` does not cover
    """
    out: Dict[Monomial, int] = {}
    for mono, coeff in p.items():
        try:
            image = monomial(mapping[label] for label in mono)
        except KeyError as e:
            raise LabelDomainError(f"{e.args[0]} is outside the map's domain") from None
        out[image] = out.get(image, 0) + coeff
    return Polynomial(out)


def evaluate(p: Polynomial, theta: Mapping[ParamLabel, float]) -> float:
    """
    Substitute numeric values and evaluate in double precision.

    Raises:
        MissingAssignmentError: a label of p has no value in theta
    """
    values = []
    for mono, coeff in p.items():
        value = float(coeff)
        for label in mono:
            try:
                value *= theta[label]
            except KeyError:
                raise MissingAssignmentError(label) from None
        values.append(value)
    return math.fsum(values)


# ============================================================================
# Parsing
# ============================================================================

_POLY_SHAPE = re.compile(r"[+-]?[^+-]+(?:[+-][^+-]+)*")
_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse_polynomial(text: str) -> Polynomial:
    """
    Parse the canonical rendering produced by str(Polynomial).

    Factor order, spacing and repeated factors are all accepted, so any
    rendering reparses to the same polynomial.
    """
    compact = "".join(text.split())
    if not compact or not _POLY_SHAPE.fullmatch(compact):
        raise PolynomialParseError(f"not a polynomial: {text!r}")

    terms: Dict[Monomial, int] = {}
    for sign, body in _TERM.findall(compact):
        coeff = -1 if sign == "-" else 1
        labels: List[ParamLabel] = []
        for factor in body.split("*"):
            if not factor:
                raise PolynomialParseError(f"empty factor in {body!r}")
            if factor.isdigit():
                coeff *= int(factor)
                continue
            base, _, power = factor.partition("^")
            exponent = 1
            if power:
                if not power.isdigit() or int(power) < 1:
                    raise PolynomialParseError(f"bad exponent in {factor!r}")
                exponent = int(power)
            labels.extend([parse_label(base)] * exponent)
        key = monomial(labels)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(terms)

