"""
Numeric Simulation Module
Fixed-step RK4 integration of x' = A(theta) x + u and trajectory comparison,
used to check that certified pairs really produce the same output
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence

import numpy as np

from ..config import settings
from ..core.graph_model import Model, compartmental_matrix, require_valid
from ..core.symbolic import ParamLabel, parse_label
from ..errors import GridMismatchError, LabelDomainError, SimulationError
from .indist import ParamBijection

logger = logging.getLogger(__name__)


class InputSignal(str, Enum):
    """What drives the input compartment"""
    IMPULSE = "impulse"  # x(0) = e_in, u = 0
    STEP = "step"        # x(0) = 0, u_in = 1
    NONE = "none"        # x(0) = 0, u = 0


@dataclass(frozen=True)
class Trajectory:
    """Samples on the uniform grid 0, dt, ..., t_max"""
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.times.shape != self.values.shape[:1]:
            raise SimulationError(
                f"{len(self.times)} grid points but {self.values.shape[0]} samples"
            )

    def __len__(self) -> int:
        return len(self.times)


# ============================================================================
# Integration
# ============================================================================

def _rk4_stages(a: np.ndarray, x: np.ndarray, u: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of x' = A x + u with constant u; x may hold several columns"""
    k1 = h * (a @ x + u)
    k2 = h * (a @ (x + k1 / 2) + u)
    k3 = h * (a @ (x + k2 / 2) + u)
    k4 = h * (a @ (x + k3) + u)
    return x + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _check_rates(m: Model, theta: Mapping[ParamLabel, float]) -> None:
    for label in m.parameters:
        if label in theta and not theta[label] > 0:
            raise SimulationError(f"rate {label} must be positive, got {theta[label]}")


def _grid(t_max: float, dt: float) -> np.ndarray:
    if not (np.isfinite(dt) and dt > 0):
        raise SimulationError(f"dt must be positive, got {dt}")
    if not (np.isfinite(t_max) and t_max >= dt):
        raise SimulationError(f"t_max must be at least dt, got t_max={t_max}, dt={dt}")
    steps = int(round(t_max / dt))
    return np.arange(steps + 1, dtype=float) * dt


def simulate_states(
    m: Model,
    theta: Mapping[ParamLabel, float],
    signal: InputSignal = InputSignal.IMPULSE,
    t_max: Optional[float] = None,
    dt: Optional[float] = None,
) -> Trajectory:
    """
    Integrate every compartment.

    The system is linear and u is constant, so one RK4 step is the affine map
    x -> P x + q. P is the step applied to the identity with u = 0, and q is
    the step applied to the zero state with the input switched on.

    Returns:
        Trajectory whose values have shape (len(times), n)

    Raises:
        SimulationError: non-positive rates, a bad grid or a non-finite state
        MissingAssignmentError: theta lacks a parameter of m
    """
    t_max = settings.NUMERIC_T_MAX if t_max is None else t_max
    dt = settings.NUMERIC_DT if dt is None else dt
    require_valid(m)
    _check_rates(m, theta)
    times = _grid(t_max, dt)
    signal = InputSignal(signal)

    n = m.n
    a = compartmental_matrix(m).evaluate(theta)
    e_in = np.zeros(n)
    e_in[m.input - 1] = 1.0

    propagator = _rk4_stages(a, np.eye(n), np.zeros((n, 1)), dt)
    forcing = _rk4_stages(a, np.zeros(n), e_in, dt) if signal is InputSignal.STEP else np.zeros(n)
    state = e_in.copy() if signal is InputSignal.IMPULSE else np.zeros(n)

    states = np.empty((len(times), n))
    states[0] = state
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, len(times)):
            state = propagator @ state + forcing
            states[step] = state

    finite = np.isfinite(states).all(axis=1)
    if not finite.all():
        raise SimulationError("state became non-finite", step=int(np.argmin(finite)))
    logger.debug("simulated %s for %d steps (%s input)", m.describe(), len(times) - 1, signal.value)
    return Trajectory(times=times, values=states)


def simulate(
    m: Model,
    theta: Mapping[ParamLabel, float],
    signal: InputSignal = InputSignal.IMPULSE,
    t_max: Optional[float] = None,
    dt: Optional[float] = None,
) -> Trajectory:
    """Output-compartment samples y(t) = x_out(t)"""
    states = simulate_states(m, theta, signal, t_max, dt)
    return Trajectory(times=states.times, values=states.values[:, m.output - 1].copy())


def compare_trajectories(a: Trajectory, b: Trajectory) -> float:
    """max |a(t) - b(t)| over a shared grid"""
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise GridMismatchError(f"grids differ: {len(a.times)} vs {len(b.times)} points")
    if len(a) == 0:
        return 0.0
    return float(np.max(np.abs(a.values - b.values)))


# ============================================================================
# Parameters
# ============================================================================

def transport_params(theta: Mapping[ParamLabel, float], phi: ParamBijection) -> Dict[ParamLabel, float]:
    """theta' with theta'(phi(p)) = theta(p)"""
    if frozenset(theta) != phi.domain:
        raise LabelDomainError("parameter values do not cover exactly the bijection's domain")
    return {phi[label]: theta[label] for label in sorted(theta)}


def draw_parameters(
    labels: Iterable[ParamLabel],
    rng: np.random.Generator,
    low: Optional[float] = None,
    high: Optional[float] = None,
) -> Dict[ParamLabel, float]:
    """Uniform positive rates, one per label in label order"""
    low = settings.RATE_LOW if low is None else low
    high = settings.RATE_HIGH if high is None else high
    ordered = sorted(labels)
    values = rng.uniform(low, high, size=len(ordered))
    return {label: float(v) for label, v in zip(ordered, values)}


def transfer_discrepancy(
    model_a: Model,
    model_b: Model,
    phi: ParamBijection,
    draws: Optional[int] = None,
    seed: Optional[int] = None,
    t_max: Optional[float] = None,
    dt: Optional[float] = None,
) -> float:
    """
    Largest impulse-response difference between model_a at theta and
    model_b at transport_params(theta, phi), over seeded random draws.
    """
    draws = settings.NUMERIC_DRAWS if draws is None else draws
    rng = np.random.default_rng(settings.RANDOM_SEED if seed is None else seed)
    worst = 0.0
    for _ in range(draws):
        theta = draw_parameters(model_a.parameters, rng)
        left = simulate(model_a, theta, InputSignal.IMPULSE, t_max, dt)
        right = simulate(model_b, transport_params(theta, phi), InputSignal.IMPULSE, t_max, dt)
        worst = max(worst, compare_trajectories(left, right))
    return worst


def parse_params(pairs: Sequence[str]) -> Dict[ParamLabel, float]:
    """`a_{21}=0.5` style assignments, as given on the command line"""
    theta: Dict[ParamLabel, float] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise SimulationError(f"expected label=value, got {pair!r}")
        try:
            theta[parse_label(key.strip())] = float(value)
        except ValueError as e:
            raise SimulationError(f"bad parameter assignment {pair!r}: {e}") from e
    return theta
