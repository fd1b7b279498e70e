from .common import IntInterval, Rat, RatInterval
from .config import OutputFormat, RunConfig
from .manifold import CatalogEntry, InvariantsReport, ManifoldDescriptor, SBResult
from .plan import (
    Move,
    MovePhase,
    ReplayReport,
    SimulationReport,
    TransportPlan,
    TransportResult,
)
from .scenario import BoxModel, ScenarioSpec, TargetKind

__all__ = [
    "Rat",
    "IntInterval",
    "RatInterval",
    "RunConfig",
    "OutputFormat",
    "ManifoldDescriptor",
    "SBResult",
    "InvariantsReport",
    "CatalogEntry",
    "Move",
    "MovePhase",
    "TransportPlan",
    "SimulationReport",
    "TransportResult",
    "ReplayReport",
    "BoxModel",
    "ScenarioSpec",
    "TargetKind",
]
