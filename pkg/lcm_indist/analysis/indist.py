"""
Permutation Indistinguishability Module
Verifies, searches for and constructs parameter bijections that carry one
model's input-output coefficients exactly onto another's
"""
import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from ..config import settings
from ..core.graph_model import make_path_leak_model
from ..core.symbolic import Monomial, ParamLabel, Polynomial, monomial, relabel
from ..errors import DimensionMismatchError, LabelDomainError, ParameterRangeError, SearchBoundExceededError
from .ioeq import IOEquation

logger = logging.getLogger(__name__)


# ============================================================================
# Bijections
# ============================================================================

class ParamBijection(Mapping):
    """Bijective renaming between two parameter sets"""

    __slots__ = ("_forward",)

    def __init__(self, mapping: Mapping):
        forward = dict(mapping)
        if len(set(forward.values())) != len(forward):
            raise LabelDomainError("parameter map is not injective")
        self._forward: Dict[ParamLabel, ParamLabel] = dict(sorted(forward.items()))

    @classmethod
    def identity(cls, labels: Iterable[ParamLabel]) -> "ParamBijection":
        return cls({p: p for p in labels})

    def __getitem__(self, label: ParamLabel) -> ParamLabel:
        return self._forward[label]

    def __iter__(self) -> Iterator[ParamLabel]:
        return iter(self._forward)

    def __len__(self) -> int:
        return len(self._forward)

    def __hash__(self) -> int:
        return hash(frozenset(self._forward.items()))

    @property
    def domain(self) -> FrozenSet[ParamLabel]:
        return frozenset(self._forward)

    @property
    def codomain(self) -> FrozenSet[ParamLabel]:
        return frozenset(self._forward.values())

    def inverse(self) -> "ParamBijection":
        return ParamBijection({dst: src for src, dst in self._forward.items()})

    def followed_by(self, other: "ParamBijection") -> "ParamBijection":
        """The composition other ∘ self"""
        if self.codomain != other.domain:
            raise LabelDomainError("cannot compose: codomain and domain differ")
        return ParamBijection({src: other[dst] for src, dst in self._forward.items()})

    def as_dict(self) -> Dict[ParamLabel, ParamLabel]:
        return dict(self._forward)

    def render(self) -> List[str]:
        """One `a_{03} -> a_{34}` line per pair, sorted by domain label"""
        return [f"{src} -> {dst}" for src, dst in self._forward.items()]

    def __repr__(self) -> str:
        return "ParamBijection({" + ", ".join(self.render()) + "})"


# ============================================================================
# Certificates
# ============================================================================

@dataclass(frozen=True)
class CoefficientMatch:
    name: str
    image: Polynomial
    expected: Polynomial

    @property
    def matches(self) -> bool:
        return self.image == self.expected


@dataclass(frozen=True)
class IndistCertificate:
    """A bijection plus the per-coefficient comparison it produced"""
    bijection: ParamBijection
    matched: Tuple[CoefficientMatch, ...]

    @property
    def valid(self) -> bool:
        return all(entry.matches for entry in self.matched)

    def first_mismatch(self) -> Optional[CoefficientMatch]:
        return next((entry for entry in self.matched if not entry.matches), None)


def check_bijection(eq_a: IOEquation, eq_b: IOEquation, phi: ParamBijection) -> IndistCertificate:
    """
    Relabel every coefficient of eq_a through phi and compare with eq_b.

    Raises:
        DimensionMismatchError: the equations have different orders
        LabelDomainError: phi does not map A's parameters onto B's
    """
    if eq_a.n != eq_b.n:
        raise DimensionMismatchError(f"equation orders differ: {eq_a.n} vs {eq_b.n}")
    if phi.domain != frozenset(eq_a.parameters) or phi.codomain != frozenset(eq_b.parameters):
        raise LabelDomainError("bijection does not map the first parameter set onto the second")
    matched = tuple(
        CoefficientMatch(name=name, image=relabel(poly_a, phi), expected=poly_b)
        for (name, poly_a), (_, poly_b) in zip(eq_a.indexed(), eq_b.indexed())
    )
    return IndistCertificate(bijection=phi, matched=matched)


# ============================================================================
# Search
# ============================================================================

Signature = Tuple[int, ...]


def signature_prune(eq: IOEquation) -> Dict[ParamLabel, Signature]:
    """
    Per-parameter invariant under any valid bijection: for every coefficient
    (c_0..c_{n-1}, d_0..d_{n-1}) the number of its monomials containing the
    parameter.
    """
    coefficients = [poly for _, poly in eq.indexed()]
    signatures = {}
    for label in eq.parameters:
        signatures[label] = tuple(
            sum(1 for mono, _ in poly.items() if label in mono) for poly in coefficients
        )
    return signatures


def _profile(poly: Polynomial) -> Tuple[int, List[Tuple[int, int]]]:
    return len(poly), sorted((len(mono), coeff) for mono, coeff in poly.items())


def distinguishing_witness(eq_a: IOEquation, eq_b: IOEquation) -> Optional[str]:
    """
    First coefficient whose relabel-invariant profile differs, or None when
    every profile agrees.
    """
    if eq_a.n != eq_b.n:
        return "order"
    if len(eq_a.parameters) != len(eq_b.parameters):
        return "parameter count"
    for (name, poly_a), (_, poly_b) in zip(eq_a.indexed(), eq_b.indexed()):
        if _profile(poly_a) != _profile(poly_b):
            return name
    return None


def search_bijection(eq_a: IOEquation, eq_b: IOEquation, bound: Optional[int] = None) -> Optional[ParamBijection]:
    """
    Find the lexicographically first bijection certifying eq_a ~ eq_b.

    Parameters of A are assigned in (signature, label) order, each to an
    unused B parameter with the same signature. Whenever an assignment
    completes a monomial of A, its image must already be a term of the
    matching B coefficient with the same integer coefficient.

    Returns:
        ParamBijection, or None when no bijection exists

    Raises:
        SearchBoundExceededError: more parameters than the configured bound
    """
    bound = settings.SEARCH_BOUND if bound is None else bound
    if eq_a.n != eq_b.n or len(eq_a.parameters) != len(eq_b.parameters):
        return None
    size = len(eq_a.parameters)
    if size > bound:
        raise SearchBoundExceededError(f"{size} parameters exceed the search bound {bound}")

    if distinguishing_witness(eq_a, eq_b) is not None:
        return None
    sig_a = signature_prune(eq_a)
    sig_b = signature_prune(eq_b)
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None

    coeffs_a = [poly for _, poly in eq_a.indexed()]
    coeffs_b = [poly.terms for _, poly in eq_b.indexed()]
    for poly_a, terms_b in zip(coeffs_a, coeffs_b):
        if poly_a.coefficient(()) != terms_b.get((), 0):
            return None

    order = sorted(eq_a.parameters, key=lambda p: (sig_a[p], p))
    position = {label: index for index, label in enumerate(order)}
    candidates = {p: [q for q in sorted(eq_b.parameters) if sig_b[q] == sig_a[p]] for p in order}

    # each monomial is checked once, when its last-assigned label is placed;
    # coefficients with fewer terms come first
    watch: Dict[ParamLabel, List[Tuple[int, Monomial, int]]] = {p: [] for p in order}
    for index in sorted(range(len(coeffs_a)), key=lambda idx: (len(coeffs_a[idx]), idx)):
        for mono, coeff in coeffs_a[index].items():
            if mono:
                watch[max(mono, key=position.__getitem__)].append((index, mono, coeff))

    assignment: Dict[ParamLabel, ParamLabel] = {}
    used = set()
    visited = 0

    def consistent(label: ParamLabel) -> bool:
        for index, mono, coeff in watch[label]:
            image = monomial(assignment[p] for p in mono)
            if coeffs_b[index].get(image) != coeff:
                return False
        return True

    def descend(depth: int) -> Optional[ParamBijection]:
        nonlocal visited
        if depth == size:
            candidate = ParamBijection(assignment)
            return candidate if check_bijection(eq_a, eq_b, candidate).valid else None
        label = order[depth]
        for target in candidates[label]:
            if target in used:
                continue
            visited += 1
            assignment[label] = target
            used.add(target)
            if consistent(label):
                found = descend(depth + 1)
                if found is not None:
                    return found
            del assignment[label]
            used.discard(target)
        return None

    result = descend(0)
    logger.debug("bijection search visited %d nodes over %d parameters: %s",
                 visited, size, "found" if result else "none")
    return result


def search_bijection_exhaustive(eq_a: IOEquation, eq_b: IOEquation) -> Optional[ParamBijection]:
    """Unpruned scan of every permutation; the oracle for search_bijection"""
    if eq_a.n != eq_b.n or len(eq_a.parameters) != len(eq_b.parameters):
        return None
    if len(eq_a.parameters) > settings.EXHAUSTIVE_BOUND:
        raise SearchBoundExceededError(
            f"{len(eq_a.parameters)} parameters exceed the exhaustive bound {settings.EXHAUSTIVE_BOUND}"
        )
    domain = sorted(eq_a.parameters)
    for image in itertools.permutations(sorted(eq_b.parameters)):
        phi = ParamBijection(dict(zip(domain, image)))
        if check_bijection(eq_a, eq_b, phi).valid:
            return phi
    return None


# ============================================================================
# Explicit maps for the path families
# ============================================================================

def phi_leak_pair(n: int, i: int, k: int) -> ParamBijection:
    """
    M_i -> M_k for 1 <= i < k < n: leak to leak, and the edges leaving the
    two leak vertices swap places.
    """
    if not 1 <= i < k <= n - 1:
        raise ParameterRangeError(f"need 1 <= i < k < n, got n={n}, i={i}, k={k}")
    mapping = {p: p for p in make_path_leak_model(n, i).parameters}
    mapping[ParamLabel.leak(i)] = ParamLabel.leak(k)
    mapping[ParamLabel.edge(i, i + 1)] = ParamLabel.edge(k, k + 1)
    mapping[ParamLabel.edge(k, k + 1)] = ParamLabel.edge(i, i + 1)
    return ParamBijection(mapping)


def phi_leak_cycle(n: int) -> ParamBijection:
    """M_{n-1} -> M_n: the leak a_{0,n-1} becomes the back-edge a_{n-1,n}"""
    if n < 2:
        raise ParameterRangeError(f"n must be at least 2, got {n}")
    mapping = {p: p for p in make_path_leak_model(n, n - 1).parameters}
    mapping[ParamLabel.leak(n - 1)] = ParamLabel.edge(n, n - 1)
    return ParamBijection(mapping)


def phi_leak_to_cycle(n: int, i: int) -> ParamBijection:
    """M_i -> M_n for any leak position 1 <= i < n, by composing the two maps above"""
    if not 1 <= i <= n - 1:
        raise ParameterRangeError(f"need 1 <= i < n, got n={n}, i={i}")
    if i == n - 1:
        return phi_leak_cycle(n)
    return phi_leak_pair(n, i, n - 1).followed_by(phi_leak_cycle(n))
