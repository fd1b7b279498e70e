"""Exception hierarchy for darboux."""

from fractions import Fraction
from typing import Optional

# Reasons a planning attempt can fail. Only the retryable ones are fixed by
# shrinking scales.
CAPACITY = "capacity"
SCALE_TOO_LARGE = "scale too large"
RATIOS_TOO_LARGE = "ratios too large"
DISCONNECTED_GRAPH = "disconnected graph"
GATE_TOO_SMALL = "gate too small"
UNSUPPORTED_DIMENSION = "unsupported dimension"

RETRYABLE_REASONS = frozenset(
    {SCALE_TOO_LARGE, RATIOS_TOO_LARGE, DISCONNECTED_GRAPH, GATE_TOO_SMALL}
)


class DarbouxError(Exception):
    """Base class for all darboux errors."""

    exit_code = 1


class ParameterError(DarbouxError, ValueError):
    """Invalid parameters supplied by the caller."""

    exit_code = 2


class GeometryError(DarbouxError, ValueError):
    """Degenerate or mismatched geometric input."""

    exit_code = 2


class DescriptorError(DarbouxError, ValueError):
    """Inconsistent manifold data."""

    exit_code = 2


class VerificationError(DarbouxError):
    """A verification run found a violation."""

    exit_code = 1


class PlanningError(DarbouxError, RuntimeError):
    """The transport planner could not produce a plan."""

    exit_code = 1

    def __init__(
        self,
        reason: str,
        detail: str = "",
        chart: Optional[int] = None,
        ratio: Optional[Fraction] = None,
    ):
        self.reason = reason
        self.detail = detail
        self.chart = chart
        self.ratio = ratio
        message = reason if not detail else f"{reason}: {detail}"
        if chart is not None:
            message += f" (chart {chart})"
        if ratio is not None:
            message += f" (ratio {ratio})"
        super().__init__(message)

    @property
    def retryable(self) -> bool:
        return self.reason in RETRYABLE_REASONS
