"""Transport plans and their validation reports."""

from enum import Enum
from typing import Any, Optional

from pydantic import Field, field_serializer

from ..geometry import Point
from .common import DarbouxModel, Rat
from .scenario import BoxModel


class MovePhase(str, Enum):
    """Why a piece is being moved."""

    COMPRESS = "compress-interior"
    TREE = "route-tree-leg"
    DETOUR = "detour-displace"
    RESTORE = "detour-restore"
    GATE = "gate-hop"
    PACK = "pack-into-cell"


class Move(DarbouxModel):
    """A rigid axis-parallel translation of one piece."""

    piece: str
    phase: MovePhase
    vector: list[Rat]
    swept: BoxModel
    chart: int = 0

    @field_serializer("phase")  # type: ignore[misc]
    def serialize_phase(self, value: MovePhase) -> str:
        return value.value

    def shift(self) -> Point:
        return Point(tuple(self.vector))


class PieceModel(DarbouxModel):
    """A group of cubes that travels as one block."""

    id: str  # noqa: A003
    height: int
    cubes: list[str]
    envelope: BoxModel


class CellAssignment(DarbouxModel):
    """Grid cell of the target grid of `height` that receives a piece."""

    piece: str
    height: int
    cell: list[int]


class TransportPlan(DarbouxModel):
    """Validated sequence of moves packing one colour class."""

    scenario: str
    color: int
    scales: list[Rat]
    nus: list[Rat]
    slacks: list[Rat]
    pieces: list[PieceModel] = Field(default_factory=list)
    moves: list[Move] = Field(default_factory=list)
    assignments: list[CellAssignment] = Field(default_factory=list)
    tree_parents: dict[str, str] = Field(default_factory=dict)
    metadata: dict[str, Any] = Field(default_factory=dict)

    def phase_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for move in self.moves:
            counts[move.phase.value] = counts.get(move.phase.value, 0) + 1
        return counts


class SimulationReport(DarbouxModel):
    """Outcome of replaying a plan."""

    valid: bool
    violations: list[str] = Field(default_factory=list)
    final_containment: bool
    area_preserved: bool
    packed_area: dict[int, Rat] = Field(default_factory=dict)
    region_area: dict[int, Rat] = Field(default_factory=dict)


class AttemptRecord(DarbouxModel):
    """One try of the shrink-and-retry driver."""

    attempt: int
    scales: list[Rat]
    error: Optional[str] = None


class ColorRun(DarbouxModel):
    """Plan, validation and bookkeeping for one colour."""

    color: int
    plan: Optional[TransportPlan] = None
    report: Optional[SimulationReport] = None
    attempts: list[AttemptRecord] = Field(default_factory=list)
    error: Optional[str] = None


class TransportResult(DarbouxModel):
    """Everything `transport` writes."""

    scenario: str
    residual: Rat
    residual_fraction: Rat
    residual_ok: bool
    runs: list[ColorRun] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(
            run.report is not None and run.report.valid and run.error is None
            for run in self.runs
        )


class ReplayReport(DarbouxModel):
    """Re-validation of stored plans against their scenario."""

    scenario: str
    reports: dict[int, SimulationReport] = Field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return bool(self.reports) and all(r.valid for r in self.reports.values())
