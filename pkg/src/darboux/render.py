"""Static SVG snapshots of a chart complex and the cubes moving in it."""

import math
from collections.abc import Mapping

from .geometry import Box, hull_of
from .models.plan import TransportPlan
from .services.colored_cover import ColoredCubeSet
from .services.simulator import cube_positions, phase_boundaries
from .services.world import ChartComplex, DiscTarget

SIZE = 800
PAD = 20
CHART_COLORS = ("#2b6cb0", "#c05621", "#2f855a", "#6b46c1", "#b7791f")


class Canvas:
    """Maps world coordinates of the (x_1, y_1) plane onto an SVG viewport."""

    def __init__(self, frame: Box):
        self.lo_x = float(frame.lo[0])
        self.hi_y = float(frame.hi[1])
        width = max(1e-9, float(frame.widths[0]))
        height = max(1e-9, float(frame.widths[1]))
        self.scale = (SIZE - 2 * PAD) / max(width, height)
        self.lines: list[str] = []

    def _xy(self, x: float, y: float) -> tuple[float, float]:
        return PAD + (x - self.lo_x) * self.scale, PAD + (self.hi_y - y) * self.scale

    def box(self, box: Box, fill: str, stroke: str = "none", extra: str = "") -> None:
        x, y = self._xy(float(box.lo[0]), float(box.hi[1]))
        w = float(box.widths[0]) * self.scale
        h = float(box.widths[1]) * self.scale
        self.lines.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
            f'fill="{fill}" stroke="{stroke}"{extra}/>'
        )

    def circle(self, cx: float, cy: float, r: float, stroke: str) -> None:
        x, y = self._xy(cx, cy)
        self.lines.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r * self.scale:.2f}" '
            f'fill="none" stroke="{stroke}" stroke-dasharray="6 4"/>'
        )

    def text(self, label: str) -> None:
        self.lines.append(
            f'<text x="{PAD}" y="{PAD - 6}" font-family="monospace" '
            f'font-size="12">{label}</text>'
        )

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" '
            f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
        )
        return "\n".join([head, *self.lines, "</svg>"]) + "\n"


def _frame(world: ChartComplex) -> Box:
    cells = [cell for chart in world.charts for cell in chart.region]
    return hull_of(cells)


def snapshot(
    world: ChartComplex,
    boxes: Mapping[str, Box],
    charts: Mapping[str, int],
    title: str = "",
) -> str:
    """
    One SVG frame: chart outlines, gates, target outline and cubes.

    `charts` gives the chart of every cube id and picks its fill colour.
    """
    canvas = Canvas(_frame(world))
    for chart in world.charts:
        color = CHART_COLORS[chart.index % len(CHART_COLORS)]
        for cell in chart.region:
            canvas.box(cell, "none", color, ' stroke-width="1"')
    for gate in world.gates:
        canvas.box(gate.box, "none", "#000000", ' stroke-dasharray="3 3"')
    for height in range(world.levels):
        target = world.target(height)
        if isinstance(target, DiscTarget):
            radius = math.sqrt(float(target.outer) / math.pi)
            center = target.center
            canvas.circle(float(center[0]), float(center[1]), radius, "#e53e3e")
        else:
            for cell in target.region:
                canvas.box(cell, "#fed7d7", "none", ' fill-opacity="0.5"')
    for cid in sorted(boxes):
        color = CHART_COLORS[charts.get(cid, 0) % len(CHART_COLORS)]
        canvas.box(boxes[cid], color, "none", ' fill-opacity="0.8"')
    if title:
        canvas.text(title)
    return canvas.render()


def plan_frames(
    world: ChartComplex,
    cubes: ColoredCubeSet,
    plan: TransportPlan,
    phases: bool = True,
) -> list[tuple[str, str]]:
    """
    Named SVG frames of a plan: initial, one per phase, final.

    Returns:
        (name, svg) pairs in replay order
    """
    charts = {c.id: c.chart for c in cubes.for_color(plan.color)}
    start = cube_positions(plan, cubes, 0)
    frames = [("initial", snapshot(world, start, charts, "initial"))]
    if phases:
        for phase, upto in phase_boundaries(plan):
            name = f"after-{phase.value}"
            boxes = cube_positions(plan, cubes, upto)
            frames.append((name, snapshot(world, boxes, charts, name)))
    final = cube_positions(plan, cubes)
    frames.append(("final", snapshot(world, final, charts, "final")))
    return frames
