"""Heights, components and saturations of one colour class."""

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from ..errors import RATIOS_TOO_LARGE, PlanningError
from ..geometry import Box, RectilinearRegion, complement_components, neighborhood
from ..log import get_logger
from .colored_cover import ColoredCubeSet, PlacedCube
from .world import ChartComplex

logger = get_logger(__name__)


def _adjacent(a: Box, b: Box) -> bool:
    """Closed boxes meeting in at least a shared facet."""
    flat = 0
    for (alo, ahi), (blo, bhi) in zip(a.bounds(), b.bounds()):
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo > hi:
            return False
        if lo == hi:
            flat += 1
    return flat <= 1


@dataclass(frozen=True)
class Component:
    """
    A connected component of the colour class and everything it swallows.

    `cubes` are the component's own cubes; `members` adds the cubes of lower
    components lying inside its saturation, which travel with it.
    """

    id: str  # noqa: A003
    height: int
    top: PlacedCube
    cubes: tuple[PlacedCube, ...]
    envelope: Box
    saturation: RectilinearRegion
    absorbed: tuple[PlacedCube, ...] = ()

    @property
    def members(self) -> tuple[PlacedCube, ...]:
        return self.cubes + self.absorbed


@dataclass
class ColorClassDecomposition:
    color: int
    components: list[Component] = field(default_factory=list)
    saturations: dict[int, RectilinearRegion] = field(default_factory=dict)

    def at_height(self, height: int) -> list[Component]:
        return [c for c in self.components if c.height == height]

    @property
    def heights(self) -> list[int]:
        return sorted({c.height for c in self.components})


def _touching_pairs(cubes: list[PlacedCube]) -> list[tuple[str, str]]:
    ordered = sorted(cubes, key=lambda c: (c.box.lo[0], c.id))
    pairs = []
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if b.box.lo[0] > a.box.hi[0]:
                break
            if _adjacent(a.box, b.box):
                pairs.append((a.id, b.id))
    return pairs


def _saturate(boxes: list[Box], margin: Fraction) -> RectilinearRegion:
    region = RectilinearRegion.from_boxes(boxes)
    if len(boxes) == 1:
        return region
    frame = region.bounding_box()
    assert frame is not None
    holes = [
        part.region
        for part in complement_components(region, frame.fatten(margin))
        if part.bounded
    ]
    for hole in holes:
        region = region.union(hole)
    return region


def decompose_colors(
    world: ChartComplex, cubes: ColoredCubeSet, color: int
) -> ColorClassDecomposition:
    """
    Split one colour class into components with heights and saturations.

    Components are built from facet adjacency across all charts. Each
    component of height h must hold exactly one cube of chart h and lie in
    its nu_h d_h neighbourhood. Saturations are filled top-down and lower
    components inside a higher saturation are absorbed.

    Raises:
        PlanningError: "ratios too large" when a component has two top
            cubes, escapes the neighbourhood, cuts through a higher
            saturation, or saturations of different heights overlap
    """
    everything = cubes.for_color(color)
    by_id = {cube.id: cube for cube in everything}
    graph = nx.Graph()
    graph.add_nodes_from(by_id)
    graph.add_edges_from(_touching_pairs(everything))

    raw: list[tuple[int, PlacedCube, tuple[PlacedCube, ...]]] = []
    for nodes in nx.connected_components(graph):
        own = tuple(sorted((by_id[n] for n in nodes), key=lambda c: c.id))
        height = max(c.chart for c in own)
        tops = [c for c in own if c.chart == height]
        if len(tops) != 1:
            raise PlanningError(
                RATIOS_TOO_LARGE,
                f"a component holds {len(tops)} cubes of chart {height}",
                chart=height,
            )
        raw.append((height, tops[0], own))
    raw.sort(key=lambda item: (-item[0], item[1].id))

    levels = world.levels
    absorbed_by: dict[str, str] = {}
    components: list[Component] = []
    saturations: dict[int, RectilinearRegion] = {}
    for height in range(levels - 1, -1, -1):
        chart = world.charts[height]
        lower = [item for item in raw if item[0] < height]
        parts: list[Box] = []
        for h, top, own in raw:
            if h != height or top.id in absorbed_by:
                continue
            envelope = top.box
            if height:
                envelope = neighborhood(top.box, chart.envelope_radius)
                if not all(envelope.contains_box(c.box) for c in own):
                    raise PlanningError(
                        RATIOS_TOO_LARGE,
                        f"component of {top.id} leaves its neighbourhood",
                        chart=height,
                    )
            saturation = _saturate([c.box for c in own], chart.scale)
            swallowed: list[PlacedCube] = []
            for _, top2, own2 in lower:
                if top2.id in absorbed_by:
                    continue
                inside = [saturation.contains_box(c.box) for c in own2]
                if all(inside):
                    absorbed_by[top2.id] = top.id
                    swallowed.extend(own2)
                elif any(inside) or any(
                    saturation.interior_intersects_box(c.box) for c in own2
                ):
                    raise PlanningError(
                        RATIOS_TOO_LARGE,
                        f"component of {top2.id} cuts the saturation of {top.id}",
                        chart=height,
                    )
            components.append(
                Component(
                    top.id, height, top, own, envelope, saturation, tuple(swallowed)
                )
            )
            parts.extend(saturation)
        layer = RectilinearRegion.from_boxes(parts)
        for other, region in saturations.items():
            if layer.interior_intersects(region):
                raise PlanningError(
                    RATIOS_TOO_LARGE,
                    f"saturations of heights {height} and {other} overlap",
                    chart=other,
                )
        saturations[height] = layer

    components.sort(key=lambda c: (c.height, c.id))
    logger.debug(
        "colour %d: %d pieces, %d absorbed",
        color,
        len(components),
        len(absorbed_by),
    )
    return ColorClassDecomposition(color, components, saturations)
