"""Shrink-and-retry driver running the transport pipeline per colour."""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import RATIOS_TOO_LARGE, ParameterError, PlanningError
from ..log import get_logger
from ..models.plan import (
    AttemptRecord,
    ColorRun,
    SimulationReport,
    TransportPlan,
    TransportResult,
)
from .colored_cover import ColoredCubeSet, build_colored_cover, cover_residual
from .decomposition import decompose_colors
from .lattice_cover import build_cover
from .planner import plan_color
from .simulator import simulate_plan
from .world import ChartComplex

logger = get_logger(__name__)

DEFAULT_RETRY_BOUND = 4
DEFAULT_RESIDUAL_FRACTION = Fraction(1, 20)


def shrink_for(world: ChartComplex, error: PlanningError) -> ChartComplex:
    """
    Halve scale, nu and slack of the charts an error points at.

    "ratios too large" at height h shrinks the charts below h; other
    errors shrink the chart they name, or every chart when none is named.
    """
    levels = world.levels
    if error.chart is None:
        charts = set(range(levels))
    elif error.reason == RATIOS_TOO_LARGE and error.chart > 0:
        charts = set(range(error.chart))
    else:
        charts = {error.chart}
    half = Fraction(1, 2)

    def halve(values: Sequence[Fraction]) -> list[Fraction]:
        return [v * half if i in charts else v for i, v in enumerate(values)]

    return world.with_parameters(
        halve(world.scales),
        halve([c.nu for c in world.charts]),
        halve([c.slack for c in world.charts]),
    )


@dataclass
class ColorOutcome:
    """A colour run plus the live objects behind it, for rendering."""

    run: ColorRun
    world: ChartComplex
    cubes: Optional[ColoredCubeSet] = None


class TransportService:
    """Builds, plans and validates the colour classes of one scenario."""

    def __init__(
        self,
        world: ChartComplex,
        retry_bound: Optional[int] = None,
        residual_fraction: Fraction = DEFAULT_RESIDUAL_FRACTION,
    ):
        if retry_bound is None:
            retry_bound = world.retry_bound
        if retry_bound is None:
            retry_bound = DEFAULT_RETRY_BOUND
        if retry_bound < 0:
            raise ParameterError("retry bound must be non-negative")
        self.world = world
        self.retry_bound = retry_bound
        self.residual_fraction = residual_fraction
        self.cover = build_cover(world.n, world.k)

    def plan(self, color: int) -> ColorOutcome:
        """
        Plan one colour, shrinking scales after retryable failures.

        Args:
            color: Colour in 1..k

        Returns:
            The outcome; its run carries the error when every attempt failed
        """
        if not 1 <= color <= self.world.k:
            raise ParameterError(f"colour {color} outside 1..{self.world.k}")
        world = self.world
        attempts: list[AttemptRecord] = []
        for attempt in range(self.retry_bound + 1):
            try:
                cubes = build_colored_cover(world, self.cover, colors=[color])
                decomposition = decompose_colors(world, cubes, color)
                plan = plan_color(world, cubes, decomposition, world.budget(), color)
            except PlanningError as e:
                attempts.append(
                    AttemptRecord(attempt=attempt, scales=world.scales, error=str(e))
                )
                logger.info("colour %d attempt %d failed: %s", color, attempt, e)
                if not e.retryable or attempt == self.retry_bound:
                    run = ColorRun(color=color, attempts=attempts, error=str(e))
                    return ColorOutcome(run, world)
                world = shrink_for(world, e)
                continue
            attempts.append(AttemptRecord(attempt=attempt, scales=world.scales))
            report = simulate_plan(world, cubes, plan)
            logger.info(
                "colour %d planned on attempt %d, valid=%s",
                color,
                attempt,
                report.valid,
            )
            run = ColorRun(color=color, plan=plan, report=report, attempts=attempts)
            return ColorOutcome(run, world, cubes)
        raise AssertionError("unreachable")

    def residual(self) -> Fraction:
        """Area of the world no cube of any colour covers."""
        cubes = build_colored_cover(self.world, self.cover, check_budget=False)
        return cover_residual(self.world, cubes)

    def run(self, colors: Optional[Sequence[int]] = None) -> TransportResult:
        outcomes = [self.plan(j) for j in colors or range(1, self.world.k + 1)]
        return self.assemble([o.run for o in outcomes])

    def assemble(self, runs: list[ColorRun]) -> TransportResult:
        residual = self.residual()
        fraction = residual / self.world.world_region().area
        return TransportResult(
            scenario=self.world.name,
            residual=residual,
            residual_fraction=fraction,
            residual_ok=fraction < self.residual_fraction,
            runs=runs,
        )

    def replay(self, plan: TransportPlan) -> SimulationReport:
        """Rebuild the cubes a stored plan was made for and re-validate it."""
        if plan.scenario != self.world.name:
            raise ParameterError(
                f"plan is for scenario {plan.scenario!r}, not {self.world.name!r}"
            )
        world = self.world.with_parameters(plan.scales, plan.nus, plan.slacks)
        cubes = build_colored_cover(world, self.cover, colors=[plan.color])
        return simulate_plan(world, cubes, plan)
