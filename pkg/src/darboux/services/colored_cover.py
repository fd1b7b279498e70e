"""Scaled colour classes of lattice cubes inside the charts."""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import SCALE_TOO_LARGE, ParameterError, PlanningError
from ..geometry import Box, RectilinearRegion, region_minus_boxes
from ..log import get_logger
from .lattice_cover import DimensionCover, enumerate_cubes
from .world import ChartComplex

logger = get_logger(__name__)


@dataclass(frozen=True)
class PlacedCube:
    """A lattice cube of one chart, identified across the whole complex."""

    id: str  # noqa: A003
    chart: int
    color: int
    index: tuple[int, ...]
    box: Box

    @property
    def scale(self) -> Fraction:
        return self.box.widths[0]


def cube_id(chart: int, color: int, index: Sequence[int]) -> str:
    return f"{chart}/{color}/" + ",".join(str(v) for v in index)


@dataclass
class ColoredCubeSet:
    """Cubes per (chart, colour), each list sorted by lattice index."""

    cubes: dict[tuple[int, int], list[PlacedCube]] = field(default_factory=dict)

    def in_chart(self, chart: int, color: int) -> list[PlacedCube]:
        return self.cubes.get((chart, color), [])

    def for_color(self, color: int) -> list[PlacedCube]:
        charts = sorted(i for i, j in self.cubes if j == color)
        return [cube for i in charts for cube in self.cubes[(i, color)]]

    def __iter__(self) -> Iterator[PlacedCube]:
        for key in sorted(self.cubes):
            yield from self.cubes[key]

    def area(self, chart: int, color: int) -> Fraction:
        return sum((c.box.area for c in self.in_chart(chart, color)), Fraction(0))


def satisfies_margin(box: Box, region: RectilinearRegion, margin: Fraction) -> bool:
    """Box inside the region with distance at least `margin` to its boundary."""
    return region.contains_box(box.fatten(margin))


def build_colored_cover(
    world: ChartComplex,
    cover: DimensionCover,
    scales: Optional[Sequence[Fraction]] = None,
    colors: Optional[Sequence[int]] = None,
    check_budget: bool = True,
) -> ColoredCubeSet:
    """
    Scale the dimension cover into every chart and keep the cubes that fit.

    Args:
        world: The chart complex; its chart scales are used unless overridden
        cover: Dimension cover with k = world.k colours
        scales: Optional scales d_0..d_l
        colors: Colours to build; all k by default
        check_budget: Raise when a colour overruns its share; off when only
            the covered area matters

    Returns:
        The cubes of each chart and colour meeting the margin condition

    Raises:
        PlanningError: "scale too large" when a colour's area in a chart
            reaches the chart's share of the budget
    """
    if cover.k != world.k:
        raise ParameterError(f"cover has {cover.k} colours, world needs {world.k}")
    if scales is not None:
        world = world.with_parameters(
            scales, [c.nu for c in world.charts], [c.slack for c in world.charts]
        )
    budget = world.budget()
    result = ColoredCubeSet()
    for chart in world.charts:
        frame = chart.region.bounding_box()
        assert frame is not None
        for color in colors or range(1, world.k + 1):
            placed = [
                PlacedCube(
                    cube_id(chart.index, color, cube.index),
                    chart.index,
                    color,
                    cube.index,
                    cube.box,
                )
                for cube in enumerate_cubes(
                    cover, color, frame, chart.scale, chart.origin
                )
                if satisfies_margin(cube.box, chart.region, chart.scale)
            ]
            result.cubes[(chart.index, color)] = placed
            area = result.area(chart.index, color)
            share = budget.share(chart.index)
            logger.debug(
                "chart %d colour %d: %d cubes, area %s of %s",
                chart.index,
                color,
                len(placed),
                area,
                share,
            )
            if check_budget and area >= share:
                raise PlanningError(
                    SCALE_TOO_LARGE,
                    f"colour {color} covers {area} of a {share} share",
                    chart=chart.index,
                    ratio=area / share,
                )
    return result


def cover_residual(world: ChartComplex, cubes: ColoredCubeSet) -> Fraction:
    """Exact area of the world left uncovered by every cube of every colour."""
    boxes = [cube.box for cube in cubes]
    return region_minus_boxes(world.world_region(), boxes).area
