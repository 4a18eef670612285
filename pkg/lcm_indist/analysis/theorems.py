"""
Theorem Regeneration
Re-derives, for every order up to n_max, the closed-form coefficients of
both path families and every certificate between them, then checks the
certificates numerically on small orders
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional

from ..config import settings
from ..core.graph_model import Model, make_cycle_model, make_path_leak_model
from ..errors import LCMError, ParameterRangeError
from .indist import (
    ParamBijection,
    check_bijection,
    phi_leak_cycle,
    phi_leak_pair,
    phi_leak_to_cycle,
    search_bijection,
)
from .ioeq import IOEquation, ioeq_esp_cycle, ioeq_esp_leak, ioeq_forests
from .numeric import transfer_discrepancy

logger = logging.getLogger(__name__)

MIN_ORDER = 2
MAX_ORDER = 8


@dataclass(frozen=True)
class ReportItem:
    name: str
    ok: bool
    detail: str = ""

    def render(self) -> str:
        mark = "✅ PASS" if self.ok else "❌ FAIL"
        return f"{mark} {self.name}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class TheoremReport:
    n_max: int
    items: List[ReportItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.ok for item in self.items)

    @property
    def failures(self) -> List[ReportItem]:
        return [item for item in self.items if not item.ok]

    def render(self) -> List[str]:
        lines = [item.render() for item in self.items]
        verdict = "ALL PASS" if self.passed else f"{len(self.failures)} FAILED"
        lines.append(f"{len(self.items)} checks up to n={self.n_max}: {verdict}")
        return lines


# ============================================================================
# Cached building blocks
# ============================================================================

@lru_cache(maxsize=None)
def _leak_model(n: int, i: int) -> Model:
    return make_path_leak_model(n, i)


@lru_cache(maxsize=None)
def _cycle_model(n: int) -> Model:
    return make_cycle_model(n)


@lru_cache(maxsize=None)
def _leak_equation(n: int, i: int) -> IOEquation:
    return ioeq_forests(_leak_model(n, i))


@lru_cache(maxsize=None)
def _cycle_equation(n: int) -> IOEquation:
    return ioeq_forests(_cycle_model(n))


def _same_coefficients(a: IOEquation, b: IOEquation) -> Optional[str]:
    for (name, left), (_, right) in zip(a.indexed(), b.indexed()):
        if left != right:
            return name
    return None


def _run(name: str, check: Callable[[], ReportItem]) -> ReportItem:
    try:
        item = check()
    except LCMError as e:
        item = ReportItem(name, False, str(e))
    logger.info("%s: %s", name, "pass" if item.ok else "FAIL")
    return item


# ============================================================================
# Individual checks
# ============================================================================

def _check_esp_leak(n: int, i: int) -> ReportItem:
    name = f"esp-leak n={n} i={i}"
    differs = _same_coefficients(ioeq_esp_leak(n, i), _leak_equation(n, i))
    return ReportItem(name, differs is None, f"{differs} differs" if differs else "")


def _check_esp_cycle(n: int) -> ReportItem:
    name = f"esp-cycle n={n}"
    differs = _same_coefficients(ioeq_esp_cycle(n), _cycle_equation(n))
    return ReportItem(name, differs is None, f"{differs} differs" if differs else "")


def _check_certificate(name: str, eq_a: IOEquation, eq_b: IOEquation, phi: ParamBijection) -> ReportItem:
    mismatch = check_bijection(eq_a, eq_b, phi).first_mismatch()
    return ReportItem(name, mismatch is None, f"{mismatch.name} differs" if mismatch else "")


def _check_search(name: str, eq_a: IOEquation, eq_b: IOEquation) -> ReportItem:
    found = search_bijection(eq_a, eq_b)
    if found is None:
        return ReportItem(name, False, "no bijection found")
    return ReportItem(name, check_bijection(eq_a, eq_b, found).valid)


def _check_transfer(name: str, model_a: Model, model_b: Model, phi: ParamBijection) -> ReportItem:
    worst = transfer_discrepancy(model_a, model_b, phi)
    return ReportItem(name, worst <= settings.TRANSFER_TOLERANCE, f"max diff {worst:.1e}")


# ============================================================================
# Driver
# ============================================================================

def verify_theorems(n_max: int) -> TheoremReport:
    """
    Regenerate every family result for 2 <= n <= n_max.

    Per n: closed forms against forests for each leak position and for the
    cycle model, the cycle and pair certificates, the composed
    leak-to-cycle maps, an independent search for each certified pair, and
    for n <= NUMERIC_MAX_N the trajectory transfer of each certificate.

    Raises:
        ParameterRangeError: n_max outside 2..8
    """
    if not MIN_ORDER <= n_max <= MAX_ORDER:
        raise ParameterRangeError(f"n_max must be in {MIN_ORDER}..{MAX_ORDER}, got {n_max}")

    report = TheoremReport(n_max=n_max)
    add = report.items.append
    for n in range(MIN_ORDER, n_max + 1):
        numeric = n <= settings.NUMERIC_MAX_N

        for i in range(1, n):
            add(_run(f"esp-leak n={n} i={i}", lambda: _check_esp_leak(n, i)))
        add(_run(f"esp-cycle n={n}", lambda: _check_esp_cycle(n)))

        pairs = [(f"n={n} M{n - 1}~M{n}", n - 1, None)]
        pairs += [(f"n={n} M{i}~M{k}", i, k) for i in range(1, n - 1) for k in range(i + 1, n)]

        for label, i, k in pairs:
            eq_a = _leak_equation(n, i)
            model_a = _leak_model(n, i)
            if k is None:
                model_b, eq_b, phi = _cycle_model(n), _cycle_equation(n), phi_leak_cycle(n)
                kind = "cert-cycle"
            else:
                model_b, eq_b, phi = _leak_model(n, k), _leak_equation(n, k), phi_leak_pair(n, i, k)
                kind = "cert-pair"
            add(_run(f"{kind} {label}", lambda: _check_certificate(f"{kind} {label}", eq_a, eq_b, phi)))
            add(_run(f"search {label}", lambda: _check_search(f"search {label}", eq_a, eq_b)))
            if numeric:
                add(_run(f"numeric {label}",
                         lambda: _check_transfer(f"numeric {label}", model_a, model_b, phi)))

        for i in range(1, n - 1):
            name = f"transitivity n={n} M{i}~M{n}"
            add(_run(name, lambda: _check_certificate(
                name, _leak_equation(n, i), _cycle_equation(n), phi_leak_to_cycle(n, i))))

    logger.info("verified %d items up to n=%d", len(report.items), n_max)
    return report
