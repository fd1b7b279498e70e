"""Independent replay of transport plans."""

from collections import defaultdict
from fractions import Fraction
from typing import Optional

from ..geometry import Box, neighborhood
from ..log import get_logger
from ..models.plan import MovePhase, SimulationReport, TransportPlan
from ..models.scenario import TargetKind
from .colored_cover import ColoredCubeSet
from .lattice_cover import build_cover
from .world import ChartComplex, DiscTarget

logger = get_logger(__name__)


def cube_positions(
    plan: TransportPlan, cubes: ColoredCubeSet, upto: Optional[int] = None
) -> dict[str, Box]:
    """Boxes of the plan's cubes after the first `upto` moves (all by default)."""
    boxes = {c.id: c.box for c in cubes.for_color(plan.color)}
    members = {p.id: p.cubes for p in plan.pieces}
    for move in plan.moves[:upto]:
        shift = move.shift()
        for cid in members.get(move.piece, []):
            boxes[cid] = boxes[cid].translate(shift)
    return boxes


def phase_boundaries(plan: TransportPlan) -> list[tuple[MovePhase, int]]:
    """Index just past the last move of every phase, in order of first use."""
    last: dict[MovePhase, int] = {}
    for i, move in enumerate(plan.moves):
        last[move.phase] = i + 1
    return sorted(last.items(), key=lambda item: item[1])


class _Replay:
    def __init__(
        self, world: ChartComplex, cubes: ColoredCubeSet, plan: TransportPlan
    ):
        self.world = world
        self.plan = plan
        self.violations: list[str] = []
        self.cubes = {c.id: c for c in cubes.for_color(plan.color)}
        self.boxes = {cid: c.box for cid, c in self.cubes.items()}
        self.index = world.box_index(self.boxes)
        self.owner: dict[str, str] = {}
        self.members: dict[str, list[str]] = defaultdict(list)
        self.envelope: dict[str, Box] = {}
        self.height: dict[str, int] = {}
        self.scale: dict[str, Fraction] = {}

    def flag(self, message: str) -> None:
        self.violations.append(message)

    def check_pieces(self) -> None:
        for piece in self.plan.pieces:
            self.envelope[piece.id] = piece.envelope.to_box()
            self.height[piece.id] = piece.height
            top = self.cubes.get(piece.id)
            self.scale[piece.id] = top.scale if top else Fraction(0)
            for cid in piece.cubes:
                if cid not in self.cubes:
                    self.flag(f"unknown cube {cid} in piece {piece.id}")
                    continue
                if cid in self.owner:
                    self.flag(f"cube {cid} is in two pieces")
                self.owner[cid] = piece.id
                if not self.envelope[piece.id].contains_box(self.boxes[cid]):
                    self.flag(f"envelope mismatch: {cid} outside {piece.id}")
        for cid in self.cubes:
            if cid not in self.owner:
                self.flag(f"unplanned cube {cid}")
        for cid, pid in self.owner.items():
            self.members[pid].append(cid)

    def run_moves(self) -> None:
        delta = build_cover(self.world.n, self.world.k).delta
        pending: dict[str, Box] = {}
        for i, move in enumerate(self.plan.moves):
            pid = move.piece
            if pid not in self.envelope:
                self.flag(f"move {i}: unknown piece {pid}")
                continue
            shift = move.shift()
            if len(shift.support()) != 1:
                self.flag(f"move {i}: diagonal move of {pid}")
                continue
            start = self.envelope[pid]
            end = start.translate(shift)
            swept = start.hull(end)
            if move.swept.to_box() != swept:
                self.flag(f"move {i}: swept mismatch for {pid}")
            if not 0 <= move.chart < self.world.levels:
                self.flag(f"move {i}: outside chart {move.chart}")
            elif not self.world.charts[move.chart].region.contains_box(swept):
                self.flag(f"move {i}: {pid} outside chart {move.chart}")
            for cid in sorted(self.index.query(swept)):
                box = self.boxes[cid]
                if self.owner.get(cid) != pid and box.interior_intersects(swept):
                    self.flag(f"move {i}: sweep collision of {pid} with {cid}")
                    break
            height = self.height[pid]
            if height and self.world.target_kind == TargetKind.DISC:
                target = self.world.target(height)
                if not target.clear_of_inner(swept):
                    self.flag(f"move {i}: {pid} lower region crossed")
            if move.phase == MovePhase.DETOUR:
                size = max(abs(v) for v in shift)
                if size > delta * self.scale[pid] / 2:
                    self.flag(f"move {i}: detour too large for {pid}")
                pending[pid] = start
            elif move.phase == MovePhase.RESTORE:
                if pending.pop(pid, None) != end:
                    self.flag(f"move {i}: unmatched detour of {pid}")
            self.envelope[pid] = end
            for cid in self.members[pid]:
                self.boxes[cid] = self.boxes[cid].translate(shift)
                self.index.insert(cid, self.boxes[cid])
        for pid in pending:
            self.flag(f"unmatched detour of {pid}")

    def check_sizes(self) -> bool:
        """Every cube and every piece envelope keeps its original widths."""
        kept = True
        for pid, envelope in self.envelope.items():
            top = self.cubes.get(pid)
            height = self.height[pid]
            if top is None or not 0 <= height < self.world.levels:
                continue
            expected = top.box
            if height:
                radius = self.world.charts[height].envelope_radius
                expected = neighborhood(top.box, radius)
            if envelope.widths != expected.widths:
                self.flag(f"cube {pid} resized: its piece envelope changed widths")
                kept = False
        for cid, cube in self.cubes.items():
            if self.boxes[cid].widths != cube.box.widths:
                self.flag(f"cube {cid} resized")
                kept = False
        return kept

    def check_tree_order(self) -> None:
        first_tree: dict[str, int] = {}
        last: dict[str, int] = {}
        for i, move in enumerate(self.plan.moves):
            last[move.piece] = i
            if move.phase == MovePhase.TREE:
                first_tree.setdefault(move.piece, i)
        for child, parent in self.plan.tree_parents.items():
            if last.get(parent, -1) >= first_tree.get(child, len(self.plan.moves)):
                self.flag(f"tree order: {child} moves before {parent} is packed")

    def check_cells(self) -> bool:
        seen: set[tuple[int, tuple[int, ...]]] = set()
        assigned = set()
        contained = True
        for cell in self.plan.assignments:
            key = (cell.height, tuple(cell.cell))
            if key in seen:
                self.flag(f"cell collision at {key}")
            seen.add(key)
            assigned.add(cell.piece)
            envelope = self.envelope.get(cell.piece)
            if envelope is None:
                self.flag(f"assignment of unknown piece {cell.piece}")
                continue
            grid = self.world.grid(cell.height)
            corner = grid.place(cell.cell, envelope.widths)
            if corner != envelope.lo:
                self.flag(f"cell mismatch for {cell.piece}")
            if not self.world.target(cell.height).contains(envelope):
                contained = False
        for pid in self.envelope:
            if pid not in assigned:
                self.flag(f"unassigned piece {pid}")
                contained = False
        return contained


def simulate_plan(
    world: ChartComplex, cubes: ColoredCubeSet, plan: TransportPlan
) -> SimulationReport:
    """
    Replay a plan move by move and report every violation found.

    The replay shares no state with the planner: it starts from the cubes
    and rebuilds every swept region, collision and cell assignment.

    Args:
        world: Chart complex the plan was made for
        cubes: Colour classes the plan moves
        plan: Plan for one colour

    Returns:
        Report; valid when no violation occurred and every piece ends in its
        target region
    """
    replay = _Replay(world, cubes, plan)
    replay.check_pieces()
    replay.run_moves()
    replay.check_tree_order()
    contained = replay.check_cells()
    preserved = replay.check_sizes()

    budget = world.budget()
    packed: dict[int, Fraction] = {}
    regions: dict[int, Fraction] = {}
    for cid, pid in replay.owner.items():
        height = replay.height[pid]
        packed[height] = packed.get(height, Fraction(0)) + replay.boxes[cid].area
    for height in sorted(packed):
        target = world.target(height)
        regions[height] = (
            budget.region_area(height)
            if isinstance(target, DiscTarget)
            else target.area
        )
        if packed[height] >= regions[height]:
            replay.flag(f"over capacity at height {height}")

    report = SimulationReport(
        valid=not replay.violations and contained,
        violations=replay.violations,
        final_containment=contained,
        area_preserved=preserved,
        packed_area=packed,
        region_area=regions,
    )
    if replay.violations:
        logger.warning(
            "colour %d: %d violations, first: %s",
            plan.color,
            len(replay.violations),
            replay.violations[0],
        )
    return report

