"""darboux - exact tools for minimal Darboux-chart atlases."""

__version__ = "0.1.0"
__app_name__ = "darboux"

from .errors import DarbouxError, ParameterError, PlanningError
from .models import RunConfig, ScenarioSpec, SBResult, TransportResult

__all__ = [
    "DarbouxError",
    "ParameterError",
    "PlanningError",
    "RunConfig",
    "ScenarioSpec",
    "SBResult",
    "TransportResult",
]
