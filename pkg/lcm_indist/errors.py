"""
Exception hierarchy for lcm_indist

Every error derives from LCMError, which is a ValueError, so callers that
only care about "bad input" can keep catching ValueError.
"""
from typing import List, Optional


class LCMError(ValueError):
    """Base class for all lcm_indist errors"""


class ConfigurationError(LCMError):
    """An environment override could not be parsed"""


class InvalidModelError(LCMError):
    """A model failed validation"""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class ParameterRangeError(LCMError):
    """A family constructor or theorem map got indices out of range"""


class LabelDomainError(LCMError):
    """A label is outside a map's domain, or a map is not a bijection"""


class DimensionMismatchError(LCMError):
    """Two input-output equations have different orders"""


class MissingAssignmentError(LCMError):
    """A parameter has no numeric value"""

    def __init__(self, label):
        self.label = label
        super().__init__(f"no value assigned to {label}")


class SearchBoundExceededError(LCMError):
    """An exponential procedure was asked for more than its configured bound"""


class SimulationError(LCMError):
    """Numeric integration failed or was misconfigured"""

    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)


class GridMismatchError(LCMError):
    """Two trajectories were sampled on different time grids"""


class PolynomialParseError(LCMError):
    """Canonical polynomial text could not be parsed"""


class ModelFileError(LCMError):
    """A model file is missing, unreadable or malformed"""
