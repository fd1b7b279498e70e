"""Transport scenario files."""

from enum import Enum
from typing import Optional

from pydantic import Field, field_serializer, model_validator

from ..geometry import Box, Point
from .common import DarbouxModel, Rat


class BoxModel(DarbouxModel):
    """Wire form of a closed box."""

    lo: list[Rat]
    hi: list[Rat]

    @model_validator(mode="after")  # type: ignore[misc]
    def check_shape(self) -> "BoxModel":
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners differ in dimension")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError("degenerate box")
        return self

    def to_box(self) -> Box:
        return Box(Point(tuple(self.lo)), Point(tuple(self.hi)))

    @classmethod
    def from_box(cls, box: Box) -> "BoxModel":
        return cls(lo=list(box.lo), hi=list(box.hi))


class ChartSpec(DarbouxModel):
    """One flat chart V_i with its cube scale and grid parameters."""

    cells: list[BoxModel] = Field(min_length=1)
    origin: Optional[list[Rat]] = None
    scale: Rat
    nu: Rat
    slack: Rat
    core: list[BoxModel] = Field(default_factory=list)
    zones: list[BoxModel] = Field(default_factory=list)

    @model_validator(mode="after")  # type: ignore[misc]
    def check_parameters(self) -> "ChartSpec":
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.nu <= 0:
            raise ValueError("nu must be positive")
        if self.slack <= 0:
            raise ValueError("slack must be positive")
        return self


class GateSpec(DarbouxModel):
    """Gate W_i shared by chart i and its parent."""

    chart: int = Field(ge=1)
    parent: int = Field(ge=0)
    box: BoxModel

    @model_validator(mode="after")  # type: ignore[misc]
    def check_parent(self) -> "GateSpec":
        if self.parent >= self.chart:
            raise ValueError("a gate's parent chart must have a smaller index")
        return self


class TargetKind(str, Enum):
    """Where the colour classes are packed."""

    DISC = "disc"
    REGION = "region"


class ScenarioSpec(DarbouxModel):
    """A flat chart complex plus the transport parameters."""

    name: str = "scenario"
    n: int = Field(default=1, ge=1)
    k: int
    epsilon: Rat
    charts: list[ChartSpec] = Field(min_length=1)
    gates: list[GateSpec] = Field(default_factory=list)
    ball_center: list[Rat]
    disc_areas: Optional[list[Rat]] = None
    target: TargetKind = TargetKind.DISC
    target_cells: list[BoxModel] = Field(default_factory=list)
    retry_bound: Optional[int] = Field(default=None, ge=0)
    core_disjoint: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")  # type: ignore[misc]
    def check_scenario(self) -> "ScenarioSpec":
        if self.k < 2 * self.n + 1:
            raise ValueError(f"k must be at least {2 * self.n + 1}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if len(self.ball_center) != 2 * self.n:
            raise ValueError("ball center has the wrong dimension")
        if self.disc_areas is not None:
            if len(self.disc_areas) != len(self.charts):
                raise ValueError("one disc area per chart is required")
            if any(a <= 0 for a in self.disc_areas) or any(
                a >= b for a, b in zip(self.disc_areas, self.disc_areas[1:])
            ):
                raise ValueError("disc areas must be positive and increasing")
        if self.target == TargetKind.REGION:
            if not self.target_cells:
                raise ValueError("a region target needs target cells")
            if len(self.charts) != 1:
                raise ValueError("region targets support a single chart")
        return self

    @field_serializer("target")  # type: ignore[misc]
    def serialize_target(self, value: TargetKind) -> str:
        return value.value
