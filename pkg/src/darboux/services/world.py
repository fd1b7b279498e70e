"""Flat chart complexes, capacity budgets and target grids."""

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

from ..errors import GeometryError, ParameterError
from ..geometry import Box, BoxIndex, Point, RectilinearRegion
from ..models.scenario import ScenarioSpec, TargetKind
from ..utils import PI_LOWER, PI_UPPER, sqrt_upper


@dataclass(frozen=True)
class Chart:
    """One flat chart V_i with its cube scale d_i, ratio nu_i and grid slack."""

    index: int
    region: RectilinearRegion
    origin: Point
    scale: Fraction
    nu: Fraction
    slack: Fraction
    core: RectilinearRegion
    zones: tuple[Box, ...] = ()

    @property
    def area(self) -> Fraction:
        return self.region.area

    @property
    def envelope_radius(self) -> Fraction:
        return self.nu * self.scale

    @property
    def pitch(self) -> Fraction:
        """Side of a target-grid cell: (1 + 2 nu) d + slack."""
        return (1 + 2 * self.nu) * self.scale + self.slack


@dataclass(frozen=True)
class Gate:
    chart: int
    parent: int
    box: Box


@dataclass(frozen=True)
class CapacityBudget:
    """Areas of the target disc and annuli, one share per chart."""

    k: int
    epsilon: Fraction
    chart_areas: tuple[Fraction, ...]
    override: Optional[tuple[Fraction, ...]] = None

    @property
    def levels(self) -> int:
        return len(self.chart_areas)

    def share(self, chart: int) -> Fraction:
        """(1/k)(|V_i| + (k - 1)/(l + 1) eps)."""
        slack = Fraction(self.k - 1, self.levels) * self.epsilon
        return (self.chart_areas[chart] + slack) / self.k

    def cumulative(self, height: int) -> Fraction:
        """Area A_h of the disc of radius r_h."""
        if self.override is not None:
            return self.override[height]
        return sum((self.share(i) for i in range(height + 1)), Fraction(0))

    def region_area(self, height: int) -> Fraction:
        inner = self.cumulative(height - 1) if height else Fraction(0)
        return self.cumulative(height) - inner

    def total(self) -> Fraction:
        return self.cumulative(self.levels - 1)


@dataclass(frozen=True)
class DiscTarget:
    """
    Disc or annulus about `center` given by the areas it encloses.

    Membership tests are certified with rational bounds on pi: a box is
    inside when PI_UPPER * maxdist^2 <= outer and, for annuli,
    PI_LOWER * mindist^2 >= inner.
    """

    center: Point
    inner: Fraction
    outer: Fraction

    @property
    def anchor(self) -> Point:
        return self.center

    @property
    def area(self) -> Fraction:
        return self.outer - self.inner

    def _distances(self, box: Box) -> tuple[Fraction, Fraction]:
        near = Fraction(0)
        far = Fraction(0)
        for (lo, hi), c in zip(box.bounds(), self.center):
            gap = max(lo - c, c - hi, Fraction(0))
            near += gap * gap
            reach = max(abs(lo - c), abs(hi - c))
            far += reach * reach
        return near, far

    def clear_of_inner(self, box: Box) -> bool:
        if not self.inner:
            return True
        near, _ = self._distances(box)
        return PI_LOWER * near >= self.inner

    def contains(self, box: Box) -> bool:
        _, far = self._distances(box)
        return PI_UPPER * far <= self.outer and self.clear_of_inner(box)

    def window(self) -> Box:
        radius = sqrt_upper(self.outer / PI_LOWER)
        return Box.cube(self.center - Point((radius,) * self.center.dim), 2 * radius)

    def order_key(self, box: Box) -> Fraction:
        return (box.center - self.center).norm_sq()


@dataclass(frozen=True)
class RegionTarget:
    """An arbitrary rectilinear target, packed from its bounding-box corner."""

    region: RectilinearRegion

    @property
    def anchor(self) -> Point:
        box = self.region.bounding_box()
        assert box is not None
        return box.lo

    @property
    def area(self) -> Fraction:
        return self.region.area

    def clear_of_inner(self, box: Box) -> bool:
        return True

    def contains(self, box: Box) -> bool:
        return self.region.contains_box(box)

    def window(self) -> Box:
        box = self.region.bounding_box()
        assert box is not None
        return box

    def order_key(self, box: Box) -> Fraction:
        return (box.center - self.window().center).norm_sq()


Target = Union[DiscTarget, RegionTarget]


@dataclass(frozen=True)
class TargetGrid:
    """
    Cubical grid of pitch p.

    For disc targets cell (0, ..., 0) is centered on the disc center; for
    region targets its lower corner is the region's lower corner.
    """

    pitch: Fraction
    base: Point

    @classmethod
    def for_target(cls, target: Target, pitch: Fraction) -> "TargetGrid":
        if isinstance(target, RegionTarget):
            half = Point((pitch / 2,) * target.anchor.dim)
            return cls(pitch, target.anchor + half)
        return cls(pitch, target.anchor)

    def cell(self, index: Sequence[int]) -> Box:
        half = self.pitch / 2
        lo = tuple(c + self.pitch * i - half for c, i in zip(self.base, index))
        return Box(Point(lo), Point(tuple(v + self.pitch for v in lo)))

    def index_of(self, point: Point) -> tuple[int, ...]:
        return tuple(
            math.floor((x - c) / self.pitch + Fraction(1, 2))
            for x, c in zip(point, self.base)
        )

    def cells_within(self, window: Box) -> Iterator[tuple[int, ...]]:
        """Indices of the cells lying entirely inside the window."""
        ranges = []
        for (lo, hi), c in zip(window.bounds(), self.base):
            start = math.ceil((lo - c) / self.pitch + Fraction(1, 2))
            stop = math.floor((hi - c) / self.pitch - Fraction(1, 2))
            ranges.append(range(start, stop + 1))
        yield from _product(ranges)

    def place(self, index: Sequence[int], widths: Sequence[Fraction]) -> Point:
        """Lower corner of a box of the given widths centered in the cell."""
        center = self.cell(index).center
        return Point(tuple(c - w / 2 for c, w in zip(center, widths)))


def _product(ranges: list[range]) -> Iterator[tuple[int, ...]]:
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


@dataclass(frozen=True)
class ChartComplex:
    """
    Charts V_0..V_l of one plane joined by gates along a rooted tree.

    Gate transitions are the identity: a point of W_i has the same
    coordinates in V_i and in its parent chart.
    """

    name: str
    n: int
    k: int
    epsilon: Fraction
    charts: tuple[Chart, ...]
    gates: tuple[Gate, ...]
    ball_center: Point
    target_kind: TargetKind = TargetKind.DISC
    target_region: Optional[RectilinearRegion] = None
    disc_areas: Optional[tuple[Fraction, ...]] = None
    retry_bound: Optional[int] = None

    @classmethod
    def from_spec(cls, spec: ScenarioSpec) -> "ChartComplex":
        """
        Build and validate a chart complex from a scenario file.

        Raises:
            GeometryError: If gates, cores, zones or the target do not fit
        """
        dim = 2 * spec.n
        charts = []
        for i, chart in enumerate(spec.charts):
            region = RectilinearRegion.from_boxes(c.to_box() for c in chart.cells)
            if region.dim != dim:
                raise GeometryError(f"chart {i} has the wrong dimension")
            origin = Point.zero(dim)
            if chart.origin is not None:
                origin = Point(tuple(chart.origin))
            core = RectilinearRegion.from_boxes(c.to_box() for c in chart.core)
            if not region.contains_region(core):
                raise GeometryError(f"core of chart {i} leaves the chart")
            zones = tuple(z.to_box() for z in chart.zones)
            for zone in zones:
                if not region.contains_box(zone):
                    raise GeometryError(f"a zone of chart {i} leaves the chart")
            charts.append(
                Chart(
                    i, region, origin, chart.scale, chart.nu, chart.slack, core, zones
                )
            )
        gates = tuple(Gate(g.chart, g.parent, g.box.to_box()) for g in spec.gates)
        target_region = None
        if spec.target == TargetKind.REGION:
            target_region = RectilinearRegion.from_boxes(
                c.to_box() for c in spec.target_cells
            )
        world = cls(
            name=spec.name,
            n=spec.n,
            k=spec.k,
            epsilon=spec.epsilon,
            charts=tuple(charts),
            gates=gates,
            ball_center=Point(tuple(spec.ball_center)),
            target_kind=spec.target,
            target_region=target_region,
            disc_areas=tuple(spec.disc_areas) if spec.disc_areas else None,
            retry_bound=spec.retry_bound,
        )
        world.validate(spec.core_disjoint)
        return world

    def validate(self, core_disjoint: Sequence[tuple[int, int]] = ()) -> None:
        levels = len(self.charts)
        seen = {gate.chart for gate in self.gates}
        if len(seen) != len(self.gates) or seen != set(range(1, levels)):
            raise GeometryError("every chart except 0 needs exactly one gate")
        for gate in self.gates:
            if gate.parent >= gate.chart:
                raise GeometryError(f"gate {gate.chart} points to a later chart")
            for index in (gate.chart, gate.parent):
                if not self.charts[index].region.contains_box(gate.box):
                    raise GeometryError(
                        f"gate {gate.chart} does not lie in chart {index}"
                    )
        for g, h in core_disjoint:
            if not 0 <= g < h < levels:
                raise GeometryError(f"bad core pair ({g}, {h})")
            core = self.charts[g].core
            if core.interior_intersects(self.charts[h].region):
                raise GeometryError(f"core {g} meets chart {h}")
        home = self.charts[0].region
        if not any(c.contains_point(self.ball_center) for c in home):
            raise GeometryError("ball center is not in chart 0")
        if self.target_region is not None:
            inside = home.contains_region(self.target_region)
        else:
            inside = home.contains_box(self.target(levels - 1).window())
        if not inside:
            raise GeometryError("the target leaves chart 0")

    @property
    def levels(self) -> int:
        return len(self.charts)

    def gate(self, chart: int) -> Gate:
        for gate in self.gates:
            if gate.chart == chart:
                return gate
        raise ParameterError(f"chart {chart} has no gate")

    def gate_chain(self, chart: int) -> list[Gate]:
        """Gates W_h, W_parent, ... ending at a gate into chart 0."""
        chain = []
        while chart:
            gate = self.gate(chart)
            chain.append(gate)
            chart = gate.parent
        return chain

    def budget(self) -> CapacityBudget:
        return CapacityBudget(
            self.k,
            self.epsilon,
            tuple(c.area for c in self.charts),
            self.disc_areas,
        )

    def target(self, height: int) -> Target:
        if self.target_kind == TargetKind.REGION:
            if height:
                raise ParameterError("region targets have a single height")
            assert self.target_region is not None
            return RegionTarget(self.target_region)
        budget = self.budget()
        inner = budget.cumulative(height - 1) if height else Fraction(0)
        return DiscTarget(self.ball_center, inner, budget.cumulative(height))

    def grid(self, height: int) -> TargetGrid:
        return TargetGrid.for_target(self.target(height), self.charts[height].pitch)

    def world_region(self) -> RectilinearRegion:
        return RectilinearRegion.from_boxes(
            cell for chart in self.charts for cell in chart.region
        )

    def zones(self) -> tuple[Box, ...]:
        """Compression zones of chart 0; by default its cell holding the center."""
        home = self.charts[0]
        if home.zones:
            return home.zones
        for cell in home.region:
            if cell.contains_point(self.ball_center):
                return (cell,)
        return ()

    @property
    def scales(self) -> list[Fraction]:
        return [c.scale for c in self.charts]

    def box_index(self, boxes: Mapping[str, Box]) -> BoxIndex:
        """Bucket index over cube boxes, four of the finest cubes per bucket."""
        return BoxIndex(4 * min(self.scales), boxes)

    def with_parameters(
        self,
        scales: Sequence[Fraction],
        nus: Sequence[Fraction],
        slacks: Sequence[Fraction],
    ) -> "ChartComplex":
        if not len(scales) == len(nus) == len(slacks) == self.levels:
            raise ParameterError("one scale, nu and slack per chart is required")
        charts = tuple(
            replace(c, scale=Fraction(d), nu=Fraction(nu), slack=Fraction(s))
            for c, d, nu, s in zip(self.charts, scales, nus, slacks)
        )
        return replace(self, charts=charts)
