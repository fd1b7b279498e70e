"""Report models emitted by the commands."""

from typing import Optional

from pydantic import Field

from .common import DarbouxModel, Rat
from .plan import TransportResult
from .scenario import BoxModel, ScenarioSpec


class FigureRow(DarbouxModel):
    """One column of a covering-number step function."""

    ratio: Rat
    sb_min: int
    sb_max: int
    exact_flag: bool


class ChartCoverReport(DarbouxModel):
    n: int
    charts: int
    samples: int
    charts_hit: int
    worst_ratio: float
    bound: float
    passed: bool


class CoverCheckReport(DarbouxModel):
    """Result of a lattice cover verification run."""

    n: int
    k: int
    check: str
    delta: Rat
    scale: Rat
    window: list[list[Rat]]
    passed: bool
    color: Optional[int] = None
    axis: Optional[int] = None
    period: Optional[int] = None
    min_gap: Optional[Rat] = None
    min_gap_sq: Optional[Rat] = None
    cube_count: Optional[int] = None
    covered: Optional[bool] = None
    remainder_area: Optional[Rat] = None
    overlaps: Optional[int] = None
    unexpected: list[list[int]] = Field(default_factory=list)
    missing: list[list[int]] = Field(default_factory=list)


class DisplacementReport(DarbouxModel):
    """Exact checks on the displacement gadget."""

    k: int
    d: Rat
    delta: Rat
    nu: Rat
    model_area: Rat
    area_u: Rat
    area_target: Rat
    area_ok: bool
    shear_ok: bool
    displaced: bool
    area_preserved: bool = True
    shear_failures: list[Rat] = Field(default_factory=list)


class TranslationReport(DarbouxModel):
    """Numerical checks on the compactly supported translation."""

    steps: int
    max_endpoint_error: float
    identity_outside_exact: bool
    jacobian_deviation_core: float
    jacobian_deviation_annulus: float
    passed: bool


class DisplaceableCoverReport(DarbouxModel):
    """Colour classes packed into the gadget's U and their displacement."""

    gadget: DisplacementReport
    scenario: ScenarioSpec
    result: TransportResult
    regions: dict[int, list[BoxModel]] = Field(default_factory=dict)
    displaced: dict[int, bool] = Field(default_factory=dict)
    passed: bool
