"""Displacement gadget: a shear pushing the upper half of a model region down."""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from ..errors import CAPACITY, UNSUPPORTED_DIMENSION, ParameterError, PlanningError
from ..geometry import Box, Point, RectilinearRegion
from ..log import get_logger
from ..models.plan import TransportResult
from ..models.reports import DisplacementReport
from ..models.scenario import BoxModel, ChartSpec, ScenarioSpec, TargetKind
from ..utils import RatLike, parse_rat
from .simulator import cube_positions
from .transport_service import TransportService
from .world import ChartComplex

logger = get_logger(__name__)

SHEAR_TIMES = tuple(Fraction(i, 8) for i in range(9))
# Erosion radius of the over-approximation. Any radius r with r * sqrt(2) < nu
# keeps U_nu inside the union of the r-eroded boxes.
OVER_RADIUS = Fraction(7, 10)


def _smoothstep(t: Fraction) -> Fraction:
    return t * t * (3 - 2 * t)


@dataclass(frozen=True)
class RidgeProfile:
    """
    Piecewise smoothstep ridge f on the corridor.

    f equals `gap_level` away from the columns and `column_level` on them,
    with smoothstep ramps of width `band` just inside each column edge.
    """

    gap_level: Fraction
    column_level: Fraction
    band: Fraction
    columns: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def flat(
        cls, level: RatLike, columns: Sequence[tuple[Fraction, Fraction]]
    ) -> "RidgeProfile":
        value = parse_rat(level)
        return cls(value, value, Fraction(0), tuple(columns))

    def value(self, x: Fraction) -> Fraction:
        rise = self.column_level - self.gap_level
        for a, b in self.columns:
            if not a <= x <= b:
                continue
            if self.band and x < a + self.band:
                return self.gap_level + rise * _smoothstep((x - a) / self.band)
            if self.band and x > b - self.band:
                return self.gap_level + rise * _smoothstep((b - x) / self.band)
            return self.column_level
        return self.gap_level

    def breakpoints(self) -> list[Fraction]:
        points: set[Fraction] = set()
        for a, b in self.columns:
            points.update((a, b, a + self.band, b - self.band))
        return sorted(points)


@dataclass(frozen=True)
class DisplacementGadget:
    """Columns joined by a corridor, in the plane (x_1, y_1)."""

    k: int
    d: Fraction
    delta: Fraction
    nu: Fraction

    @property
    def length(self) -> Fraction:
        return (2 * self.k + 1) * self.d

    @property
    def columns(self) -> tuple[Box, ...]:
        half = self.d / 2
        return tuple(
            Box.from_bounds([(2 * j * self.d, (2 * j + 1) * self.d), (-half, half)])
            for j in range(self.k + 1)
        )

    @property
    def corridor(self) -> Box:
        return Box.from_bounds([(0, self.length), (-self.delta, self.delta)])

    @cached_property
    def region(self) -> RectilinearRegion:
        """Closure of the model region."""
        return RectilinearRegion.from_boxes([*self.columns, self.corridor])

    @property
    def model_area(self) -> Fraction:
        return self.region.area

    def upper_boxes(self) -> list[Box]:
        boxes = [c.with_axis(1, Fraction(0), c.hi[1]) for c in self.columns]
        boxes.append(self.corridor.with_axis(1, Fraction(0), self.delta))
        return boxes

    def eroded(self, radius: Fraction) -> RectilinearRegion:
        """Union of the upper boxes shrunk by `radius` on every side."""
        shrunk = []
        for box in self.upper_boxes():
            lo = [a + radius for a in box.lo]
            hi = [b - radius for b in box.hi]
            if all(a < b for a, b in zip(lo, hi)):
                shrunk.append(Box(Point(tuple(lo)), Point(tuple(hi))))
        return RectilinearRegion.from_boxes(shrunk)

    @cached_property
    def u_over(self) -> RectilinearRegion:
        return self.eroded(OVER_RADIUS * self.nu)

    @cached_property
    def u_under(self) -> RectilinearRegion:
        return self.eroded(self.nu)

    def column_ranges(self) -> list[tuple[Fraction, Fraction]]:
        return [(c.lo[0], c.hi[0]) for c in self.columns]

    def ridge(self) -> RidgeProfile:
        """Ridge above the over-approximation and below the region's floor."""
        half_nu = self.nu / 2
        return RidgeProfile(
            gap_level=self.delta - half_nu,
            column_level=max(self.d / 2, self.delta) - half_nu,
            band=OVER_RADIUS * self.nu,
            columns=tuple(self.column_ranges()),
        )


def shear_slabs(region: RectilinearRegion, profile: RidgeProfile) -> list[Box]:
    """Cut the region into vertical slabs on which f is monotone."""
    cuts = profile.breakpoints()
    slabs: list[Box] = []
    for cell in region:
        lo, hi = cell.lo[0], cell.hi[0]
        edges = [lo] + [x for x in cuts if lo < x < hi] + [hi]
        for a, b in zip(edges, edges[1:]):
            slabs.append(cell.with_axis(0, a, b))
    return slabs


def sheared_bound(slab: Box, profile: RidgeProfile, t: Fraction) -> Box:
    """Bounding box of the slab under (x, y) -> (x, y - t f(x))."""
    ends = (profile.value(slab.lo[0]), profile.value(slab.hi[0]))
    return slab.with_axis(1, slab.lo[1] - t * max(ends), slab.hi[1] - t * min(ends))


def shear_failures(
    gadget: DisplacementGadget,
    profile: RidgeProfile,
    times: Sequence[Fraction] = SHEAR_TIMES,
) -> list[Fraction]:
    """Times at which some sheared slab leaves the closed model region."""
    slabs = shear_slabs(gadget.u_over, profile)
    inside = gadget.region.contains_box
    return [
        t for t in times if not all(inside(sheared_bound(s, profile, t)) for s in slabs)
    ]


def is_displaced(gadget: DisplacementGadget, profile: RidgeProfile) -> bool:
    """Whether the time-1 shear of U misses U (conservative)."""
    over = gadget.u_over
    for slab in shear_slabs(over, profile):
        if over.interior_intersects_box(sheared_bound(slab, profile, Fraction(1))):
            return False
    return True


def shear_keeps_area(gadget: DisplacementGadget, profile: RidgeProfile) -> bool:
    """Every vertical fibre of U is translated, so slab areas add up to |U|."""
    slabs = shear_slabs(gadget.u_over, profile)
    images = [
        sheared_bound(s, profile, Fraction(1))
        for s in slabs
        if profile.value(s.lo[0]) == profile.value(s.hi[0])
    ]
    ramps = [s for s in slabs if profile.value(s.lo[0]) != profile.value(s.hi[0])]
    moved = RectilinearRegion.from_boxes(images).area + sum(
        (s.area for s in ramps), Fraction(0)
    )
    return moved == gadget.u_over.area


def build_displacement(
    k: int,
    d: RatLike,
    delta: RatLike,
    nu: RatLike,
    target_fraction: RatLike,
    epsilon: RatLike = 0,
    profile: Optional[RidgeProfile] = None,
) -> tuple[DisplacementGadget, DisplacementReport]:
    """
    Build the gadget and check the shear exactly.

    Args:
        k: Number of corridor gaps (k + 1 columns)
        d: Column width
        delta: Corridor half-height
        nu: Erosion radius defining U
        target_fraction: Required share of the model area covered by U
        epsilon: Slack subtracted from the area target
        profile: Ridge override; defaults to the gadget's own ridge

    Returns:
        The gadget and its report

    Raises:
        ParameterError: On invalid parameters, including nu >= delta/2
    """
    d, delta, nu = parse_rat(d), parse_rat(delta), parse_rat(nu)
    target_fraction, epsilon = parse_rat(target_fraction), parse_rat(epsilon)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not 0 < delta < d:
        raise ParameterError(f"need 0 < delta < d, got delta={delta}, d={d}")
    if nu <= 0:
        raise ParameterError(f"nu must be positive, got {nu}")
    if nu >= delta / 2:
        raise ParameterError(f"U disconnected risk: nu={nu} is not below delta/2")
    if not 0 < target_fraction < 1:
        raise ParameterError(f"target fraction must lie in (0, 1): {target_fraction}")
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")

    gadget = DisplacementGadget(k, d, delta, nu)
    profile = profile or gadget.ridge()
    failures = shear_failures(gadget, profile)
    area_u = gadget.u_under.area
    area_target = target_fraction * gadget.model_area - epsilon
    report = DisplacementReport(
        k=k,
        d=d,
        delta=delta,
        nu=nu,
        model_area=gadget.model_area,
        area_u=area_u,
        area_target=area_target,
        area_ok=area_u > area_target,
        shear_ok=not failures,
        displaced=is_displaced(gadget, profile),
        area_preserved=shear_keeps_area(gadget, profile),
        shear_failures=failures,
    )
    logger.info(
        "gadget k=%d: |U| = %s, shear_ok=%s, displaced=%s",
        k,
        area_u,
        report.shear_ok,
        report.displaced,
    )
    return gadget, report


# Unit-area two-column gadget and the grid its colour classes are packed on.
COVER_GADGET = (1, Fraction(2, 3), Fraction(1, 12), Fraction(1, 1000))
COVER_SCALE = Fraction(1, 20)
COVER_NU = Fraction(1, 50)
COVER_SLACK = Fraction(1, 2000)


@dataclass
class DisplaceableCover:
    """Colour classes packed into U, each displaced by the gadget's shear."""

    gadget: DisplacementGadget
    report: DisplacementReport
    scenario: ScenarioSpec
    result: TransportResult
    regions: dict[int, RectilinearRegion]
    displaced: dict[int, bool]

    @property
    def ok(self) -> bool:
        return (
            self.result.ok
            and len(self.regions) == self.scenario.k
            and all(self.displaced.values())
        )


def displaceable_scenario_spec(
    gadget: DisplacementGadget, k: int, epsilon: Fraction
) -> ScenarioSpec:
    """Single-chart scenario on the gadget region with U as the target."""
    return ScenarioSpec(
        name="displaceable",
        n=1,
        k=k,
        epsilon=epsilon,
        charts=[
            ChartSpec(
                cells=[BoxModel.from_box(c) for c in gadget.region],
                origin=[Fraction(0), Fraction(0)],
                scale=COVER_SCALE,
                nu=COVER_NU,
                slack=COVER_SLACK,
                zones=[BoxModel.from_box(c) for c in gadget.columns],
            )
        ],
        ball_center=list(gadget.columns[0].center),
        target=TargetKind.REGION,
        target_cells=[BoxModel.from_box(c) for c in gadget.u_under],
    )


def displaceable_cover_scenario(
    target_fraction: RatLike,
    n: int = 1,
    epsilon: RatLike = Fraction(1, 100),
    retry_bound: Optional[int] = None,
) -> DisplaceableCover:
    """
    Pack 2n + 1 colour classes into the gadget's U instead of a ball.

    Args:
        target_fraction: Share of the model area U must exceed (minus eps)
        n: Half dimension; only the plane is supported
        epsilon: Area slack, also used as the scenario's budget slack
        retry_bound: Override of the transport retry bound

    Returns:
        The packed regions, one per colour, with their displacement flags

    Raises:
        PlanningError: "capacity" when the fraction leaves no room for
            2n + 1 classes or U is too small, "unsupported dimension"
            outside the plane, and planner errors from the transport run
    """
    target_fraction, epsilon = parse_rat(target_fraction), parse_rat(epsilon)
    k = 2 * n + 1
    if target_fraction <= Fraction(1, k):
        raise PlanningError(
            CAPACITY, f"target fraction {target_fraction} is not above 1/{k}"
        )
    if n != 1:
        raise PlanningError(UNSUPPORTED_DIMENSION, f"2n = {2 * n}")
    gadget, report = build_displacement(
        *COVER_GADGET, target_fraction=target_fraction, epsilon=epsilon
    )
    if not report.area_ok:
        raise PlanningError(
            CAPACITY, f"|U| = {report.area_u} does not exceed {report.area_target}"
        )
    spec = displaceable_scenario_spec(gadget, k, epsilon)
    service = TransportService(ChartComplex.from_spec(spec), retry_bound)
    outcomes = [service.plan(j) for j in range(1, k + 1)]
    result = service.assemble([o.run for o in outcomes])

    regions: dict[int, RectilinearRegion] = {}
    displaced: dict[int, bool] = {}
    for outcome in outcomes:
        plan = outcome.run.plan
        if plan is None or outcome.cubes is None:
            raise PlanningError(
                CAPACITY, f"colour {outcome.run.color}: {outcome.run.error}"
            )
        boxes = cube_positions(plan, outcome.cubes).values()
        region = RectilinearRegion.from_boxes(boxes)
        regions[plan.color] = region
        displaced[plan.color] = report.displaced and gadget.u_over.contains_region(
            region
        )
    logger.info(
        "displaceable cover: %d regions, displaced=%s", len(regions), displaced
    )
    return DisplaceableCover(gadget, report, spec, result, regions, displaced)
