"""Move planner packing one colour class into the target grid."""

import math
from collections import defaultdict
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import networkx as nx

from ..errors import (
    CAPACITY,
    DISCONNECTED_GRAPH,
    GATE_TOO_SMALL,
    UNSUPPORTED_DIMENSION,
    PlanningError,
)
from ..geometry import (
    Box,
    CompressedGrid,
    Point,
    RectilinearRegion,
    complement_components,
    hull_of,
)
from ..log import get_logger
from ..models.plan import CellAssignment, Move, MovePhase, PieceModel, TransportPlan
from ..models.scenario import BoxModel
from ..utils import format_rat
from .colored_cover import ColoredCubeSet
from .decomposition import ColorClassDecomposition
from .lattice_cover import build_cover
from .neighbours import build_neighbour_graph, routing_trees
from .world import CapacityBudget, ChartComplex, TargetGrid

logger = get_logger(__name__)

ENTRY_CANDIDATES = 64

BoxCheck = Callable[[Box], bool]
Cell = tuple[int, ...]


def _always(_: Box) -> bool:
    return True


def _shrink(box: Box, radius: Fraction) -> Optional[Box]:
    lo = tuple(v + radius for v in box.lo)
    hi = tuple(v - radius for v in box.hi)
    if any(a >= b for a, b in zip(lo, hi)):
        return None
    return Box(Point(lo), Point(hi))


def _cells_hit(grid: TargetGrid, box: Box) -> list[Cell]:
    """Cells whose interior meets the box."""
    ranges = []
    half = Fraction(1, 2)
    for (lo, hi), c in zip(box.bounds(), grid.base):
        start = math.floor((lo - c) / grid.pitch - half) + 1
        stop = math.ceil((hi - c) / grid.pitch + half) - 1
        ranges.append(range(start, stop + 1))
    cells: list[Cell] = [()]
    for axis_range in ranges:
        cells = [cell + (i,) for cell in cells for i in axis_range]
    return cells


def _axis_legs(start: Point, goal: Point, order: Sequence[int]) -> list[Point]:
    legs = []
    for axis in order:
        gap = goal[axis] - start[axis]
        if gap:
            legs.append(Point.unit(start.dim, axis, gap))
    return legs


def cell_union_shape(cells: Sequence[Box], margin: Fraction) -> tuple[bool, bool]:
    """Whether a union of grid cells is edge-connected and has no holes."""
    if not cells:
        return True, True
    frame = hull_of(cells).fatten(margin)
    grid = CompressedGrid(frame, cells)
    connected = len(grid.components(grid.coverage(cells) > 0)) == 1
    region = RectilinearRegion(tuple(cells))
    hole_free = not any(part.bounded for part in complement_components(region, frame))
    return connected, hole_free


@dataclass
class Piece:
    """A block of cubes that moves rigidly: its envelope and member ids."""

    id: str  # noqa: A003
    height: int
    cubes: tuple[str, ...]
    envelope: Box
    scale: Fraction


class PlanBuilder:
    """
    Mutable plan state: current boxes, emitted moves and assigned cells.

    Every move is checked before it is emitted; `rollback` undoes the moves
    after a mark so failed attempts leave no trace.
    """

    def __init__(
        self,
        world: ChartComplex,
        decomposition: ColorClassDecomposition,
        delta: Fraction,
    ):
        self.world = world
        self.delta = delta
        self.boxes: dict[str, Box] = {}
        self.origin: dict[str, Box] = {}
        self.owner: dict[str, str] = {}
        self.pieces: dict[str, Piece] = {}
        for component in decomposition.components:
            for cube in component.members:
                self.boxes[cube.id] = cube.box
                self.origin[cube.id] = cube.box
                self.owner[cube.id] = component.id
            self.pieces[component.id] = Piece(
                component.id,
                component.height,
                tuple(c.id for c in component.members),
                component.envelope,
                component.top.scale,
            )
        self.index = world.box_index(self.boxes)
        self.initial = {pid: piece.envelope for pid, piece in self.pieces.items()}
        self.moves: list[Move] = []
        self.assignments: dict[str, CellAssignment] = {}
        self.taken: set[tuple[int, Cell]] = set()
        self.tree_parents: dict[str, str] = {}

    # -- primitive moves ---------------------------------------------------

    def blockers(self, piece_id: str, swept: Box) -> list[str]:
        hits = (
            cid for cid in self.index.query(swept) if self.owner[cid] != piece_id
        )
        return sorted(cid for cid in hits if self.boxes[cid].interior_intersects(swept))

    def apply(self, piece_id: str, vector: Point, phase: MovePhase, chart: int) -> None:
        piece = self.pieces[piece_id]
        end = piece.envelope.translate(vector)
        swept = piece.envelope.hull(end)
        self.moves.append(
            Move(
                piece=piece_id,
                phase=phase,
                vector=list(vector),
                swept=BoxModel.from_box(swept),
                chart=chart,
            )
        )
        piece.envelope = end
        for cid in piece.cubes:
            self.boxes[cid] = self.boxes[cid].translate(vector)
            self.index.insert(cid, self.boxes[cid])

    def mark(self) -> int:
        return len(self.moves)

    def rollback(self, mark: int) -> None:
        while len(self.moves) > mark:
            move = self.moves.pop()
            back = -move.shift()
            piece = self.pieces[move.piece]
            piece.envelope = piece.envelope.translate(back)
            for cid in piece.cubes:
                self.boxes[cid] = self.boxes[cid].translate(back)
                self.index.insert(cid, self.boxes[cid])

    def leg(
        self,
        piece_id: str,
        vector: Point,
        chart: int,
        phase: MovePhase,
        lower: BoxCheck = _always,
        detour: bool = True,
    ) -> bool:
        """Emit one axis-parallel leg, displacing a single blocker if needed."""
        piece = self.pieces[piece_id]
        swept = piece.envelope.hull(piece.envelope.translate(vector))
        if not self.world.charts[chart].region.contains_box(swept) or not lower(swept):
            return False
        hits = self.blockers(piece_id, swept)
        if not hits:
            self.apply(piece_id, vector, phase, chart)
            return True
        if not detour or len(hits) != 1:
            return False
        return self._detour(piece_id, vector, chart, phase, self.owner[hits[0]])

    def _detour(
        self, piece_id: str, vector: Point, chart: int, phase: MovePhase, other: str
    ) -> bool:
        blocker = self.pieces[other]
        if blocker.height or len(blocker.cubes) != 1 or other in self.assignments:
            return False
        home = self.world.charts[0].region
        size = self.delta * blocker.scale / 2
        (axis,) = vector.support()
        for side in range(vector.dim):
            if side == axis:
                continue
            for sign in (1, -1):
                step = Point.unit(vector.dim, side, sign * size)
                aside = blocker.envelope.hull(blocker.envelope.translate(step))
                if not home.contains_box(aside) or self.blockers(other, aside):
                    continue
                mark = self.mark()
                self.apply(other, step, MovePhase.DETOUR, 0)
                piece = self.pieces[piece_id]
                swept = piece.envelope.hull(piece.envelope.translate(vector))
                if not self.blockers(piece_id, swept):
                    self.apply(piece_id, vector, phase, chart)
                    back = blocker.envelope.hull(blocker.envelope.translate(-step))
                    if not self.blockers(other, back):
                        self.apply(other, -step, MovePhase.RESTORE, 0)
                        return True
                self.rollback(mark)
        return False

    def route(
        self,
        piece_id: str,
        goal: Point,
        chart: int,
        phase: MovePhase,
        lower: BoxCheck = _always,
    ) -> bool:
        """L-shaped path of the envelope's corner to `goal`, either axis first."""
        dim = goal.dim
        for order in (tuple(range(dim)), tuple(reversed(range(dim)))):
            mark = self.mark()
            start = self.pieces[piece_id].envelope.lo
            if all(
                self.leg(piece_id, leg, chart, phase, lower)
                for leg in _axis_legs(start, goal, order)
            ):
                return True
            self.rollback(mark)
        return False

    # -- target grid -------------------------------------------------------

    def assign(self, piece_id: str, height: int, cell: Cell) -> None:
        self.assignments[piece_id] = CellAssignment(
            piece=piece_id, height=height, cell=list(cell)
        )
        self.taken.add((height, cell))

    def free_cells(
        self, piece_id: str, grid: TargetGrid, usable: BoxCheck
    ) -> set[Cell]:
        home = self.world.charts[0].region
        frame = home.bounding_box()
        assert frame is not None
        cells = {
            index
            for index in grid.cells_within(frame)
            if home.contains_box(grid.cell(index)) and usable(grid.cell(index))
        }
        for cid, box in self.boxes.items():
            if self.owner[cid] != piece_id:
                cells.difference_update(_cells_hit(grid, box))
        return cells

    def pack(self, piece_id: str, height: int, lower: BoxCheck = _always) -> None:
        """
        Enter the grid near the piece, then walk free cells to a target cell.

        Target cells are tried closest-first to the inner boundary of the
        target region.
        """
        grid = self.world.grid(height)
        target = self.world.target(height)
        piece = self.pieces[piece_id]
        free = self.free_cells(piece_id, grid, lower)
        here = piece.envelope.center
        candidates = sorted(
            free, key=lambda i: ((grid.cell(i).center - here).norm_sq(), i)
        )[:ENTRY_CANDIDATES]
        entry = None
        for index in candidates:
            goal = grid.place(index, piece.envelope.widths)
            if self.route(piece_id, goal, 0, MovePhase.PACK, lower):
                entry = index
                break
        if entry is None:
            raise PlanningError(
                DISCONNECTED_GRAPH, f"{piece_id} cannot reach the target grid", chart=0
            )

        graph = nx.Graph()
        graph.add_nodes_from(free)
        for index in free:
            for axis in range(len(index)):
                step = index[:axis] + (index[axis] + 1,) + index[axis + 1 :]
                if step in free:
                    graph.add_edge(index, step)
        paths = nx.single_source_shortest_path(graph, entry)
        goals = sorted(
            (
                i
                for i in free
                if (height, i) not in self.taken and target.contains(grid.cell(i))
            ),
            key=lambda i: (target.order_key(grid.cell(i)), i),
        )
        path = next((paths[i] for i in goals if i in paths), None)
        if path is None:
            raise PlanningError(
                DISCONNECTED_GRAPH, f"no free target cell reachable from {piece_id}"
            )
        for vector in self._path_legs(grid, path):
            if not self.leg(piece_id, vector, 0, MovePhase.PACK, lower, detour=False):
                raise PlanningError(DISCONNECTED_GRAPH, f"{piece_id} blocked in grid")
        self.assign(piece_id, height, path[-1])

    @staticmethod
    def _path_legs(grid: TargetGrid, path: Sequence[Cell]) -> list[Point]:
        legs: list[Point] = []
        for a, b in zip(path, path[1:]):
            diff = Point(tuple(grid.pitch * (j - i) for i, j in zip(a, b)))
            if legs and legs[-1].support() == diff.support() and all(
                x * y >= 0 for x, y in zip(legs[-1], diff)
            ):
                legs[-1] = legs[-1] + diff
            else:
                legs.append(diff)
        return legs


class ZoneCompressor:
    """
    Packs the height-0 cubes of one zone into target cells of that zone.

    Rows of cubes first slide sideways onto grid columns, then every column
    slides vertically onto a run of cells through the pivot row. Columns are
    chosen by greedy water-filling (largest remaining capacity first), which
    always succeeds when the row and column counts are compatible.
    """

    def __init__(self, builder: PlanBuilder, zone: Box):
        self.builder = builder
        self.zone = zone
        self.grid = builder.world.grid(0)
        self.target = builder.world.target(0)

    def _coord(self, axis: int, index: int) -> Fraction:
        return self.grid.base[axis] + self.grid.pitch * index

    def _slide(self, members: list[tuple[str, Fraction]], axis: int) -> None:
        """Order-preserving 1-D moves: (piece, goal coordinate) pairs."""
        now = {pid: self.builder.pieces[pid].envelope.lo[axis] for pid, _ in members}
        lefts = sorted((now[p], p, g) for p, g in members if g < now[p])
        rights = sorted(
            ((now[p], p, g) for p, g in members if g > now[p]), reverse=True
        )
        for start, pid, goal in lefts + rights:
            vector = Point.unit(self.zone.dim, axis, goal - start)
            if not self.builder.leg(
                pid, vector, 0, MovePhase.COMPRESS, detour=False
            ):
                raise PlanningError(
                    DISCONNECTED_GRAPH, f"compression of {pid} is blocked", chart=0
                )

    def run(self, piece_ids: list[str]) -> dict[str, Any]:
        builder = self.builder
        scale = builder.world.charts[0].scale
        inner = _shrink(self.zone, scale)
        cells = []
        if inner is not None:
            cells = [
                i
                for i in self.grid.cells_within(inner)
                if (0, i) not in builder.taken
                and self.target.contains(self.grid.cell(i))
            ]
        info: dict[str, Any] = {
            "zone": [
                [format_rat(v) for v in corner]
                for corner in (self.zone.lo, self.zone.hi)
            ],
            "cubes": len(piece_ids),
            "cells": len(cells),
        }
        if len(cells) < len(piece_ids):
            raise PlanningError(
                CAPACITY, f"zone holds {len(piece_ids)} cubes but {len(cells)} cells"
            )
        if not piece_ids:
            info.update(connected=True, hole_free=True)
            return info

        anchor = self.target.anchor
        rows_by_col: dict[int, set[int]] = defaultdict(set)
        for i, j in cells:
            rows_by_col[i].add(j)
        row_sizes: dict[int, int] = defaultdict(int)
        for _, j in cells:
            row_sizes[j] += 1
        pivot = min(
            row_sizes,
            key=lambda j: (-row_sizes[j], abs(self._coord(1, j) - anchor[1]), j),
        )
        runs = {}
        for i, rows in rows_by_col.items():
            if pivot not in rows:
                continue
            lo = hi = pivot
            while lo - 1 in rows:
                lo -= 1
            while hi + 1 in rows:
                hi += 1
            runs[i] = (lo, hi)

        rows: dict[Fraction, list[str]] = defaultdict(list)
        for pid in piece_ids:
            rows[builder.pieces[pid].envelope.lo[1]].append(pid)
        remaining = {i: hi - lo + 1 for i, (lo, hi) in runs.items()}
        chosen: dict[Fraction, list[int]] = {}
        for y in sorted(rows, key=lambda y: (-len(rows[y]), y)):
            need = len(rows[y])
            open_cols = [i for i in remaining if remaining[i] > 0]
            if need > len(open_cols):
                raise PlanningError(CAPACITY, "zone columns cannot absorb a row")
            best = sorted(
                open_cols,
                key=lambda i: (-remaining[i], abs(self._coord(0, i) - anchor[0]), i),
            )[:need]
            for i in best:
                remaining[i] -= 1
            chosen[y] = sorted(best)

        widths = builder.pieces[piece_ids[0]].envelope.widths
        columns: dict[int, list[str]] = defaultdict(list)
        for y in sorted(rows):
            members = sorted(rows[y], key=lambda p: builder.pieces[p].envelope.lo[0])
            pairs = []
            for pid, i in zip(members, chosen[y]):
                pairs.append((pid, self.grid.place((i, pivot), widths)[0]))
                columns[i].append(pid)
            self._slide(pairs, 0)

        assigned = []
        for i in sorted(columns):
            members = sorted(columns[i], key=lambda p: builder.pieces[p].envelope.lo[1])
            lo, hi = runs[i]
            start = max(lo, min(pivot - (len(members) - 1) // 2, hi - len(members) + 1))
            pairs = []
            for offset, pid in enumerate(members):
                cell = (i, start + offset)
                pairs.append((pid, self.grid.place(cell, widths)[1]))
                assigned.append((pid, cell))
            self._slide(pairs, 1)
        for pid, cell in assigned:
            builder.assign(pid, 0, cell)

        connected, hole_free = cell_union_shape(
            [self.grid.cell(cell) for _, cell in assigned], self.grid.pitch
        )
        info.update(connected=connected, hole_free=hole_free)
        if not (connected and hole_free):
            logger.info("compressed cells of zone %s are not simply connected", info)
            raise PlanningError(
                DISCONNECTED_GRAPH,
                "compressed cells of a zone are not simply connected",
                chart=0,
            )
        return info


def plan_color(
    world: ChartComplex,
    cubes: ColoredCubeSet,
    decomposition: ColorClassDecomposition,
    budget: CapacityBudget,
    color: int,
) -> TransportPlan:
    """
    Plan rigid axis-parallel moves packing one colour class.

    Height-0 cubes inside the compression zones are compressed first, the
    remaining height-0 cubes follow their routing trees, then every higher
    piece is led through its gates into chart 0 and packed into its annulus.

    Args:
        world: Chart complex at the scales the cubes were built with
        cubes: Colour classes
        decomposition: Components of this colour
        budget: Capacity budget of the world
        color: Colour to plan

    Returns:
        The plan; empty when the colour has no cubes

    Raises:
        PlanningError: "capacity", "disconnected graph", "gate too small",
            or "unsupported dimension" outside the plane
    """
    if world.n != 1:
        raise PlanningError(UNSUPPORTED_DIMENSION, f"2n = {2 * world.n}")
    cover = build_cover(world.n, world.k)
    builder = PlanBuilder(world, decomposition, cover.delta)
    for height in decomposition.heights:
        grid, target = world.grid(height), world.target(height)
        cells = sum(
            1
            for i in grid.cells_within(target.window())
            if target.contains(grid.cell(i))
        )
        pieces = len(decomposition.at_height(height))
        if cells < pieces:
            raise PlanningError(
                CAPACITY, f"{pieces} pieces but {cells} target cells", chart=height
            )

    zones = world.zones()
    ground = [c.id for c in decomposition.at_height(0)]
    zone_info = []
    for zone in zones:
        inside = [
            pid
            for pid in ground
            if pid not in builder.assignments
            and zone.contains_box(builder.pieces[pid].envelope)
        ]
        zone_info.append(ZoneCompressor(builder, zone).run(inside))

    exterior = [pid for pid in ground if pid not in builder.assignments]
    if exterior:
        graph = build_neighbour_graph(
            world,
            cubes,
            0,
            color,
            RectilinearRegion.from_boxes(zones),
            [c for c in cubes.in_chart(0, color) if c.id in set(exterior)],
        )
        for tree in routing_trees(graph, world.target(0).anchor):
            for node in tree.order:
                for stop in tree.path_to_root(node)[1:]:
                    here = builder.pieces[node].envelope.lo
                    vector = builder.origin[stop].lo - here
                    if not builder.leg(node, vector, 0, MovePhase.TREE):
                        raise PlanningError(
                            DISCONNECTED_GRAPH, f"tree leg of {node} is blocked"
                        )
                if node != tree.root:
                    builder.tree_parents[node] = tree.parents[node]
                builder.pack(node, 0)

    for height in range(1, world.levels):
        target = world.target(height)
        pieces = sorted(
            decomposition.at_height(height),
            key=lambda c: (target.order_key(c.envelope), c.id),
        )
        for component in pieces:
            pid = component.id
            for gate in world.gate_chain(height):
                widths = builder.pieces[pid].envelope.widths
                if any(w > g for w, g in zip(widths, gate.box.widths)):
                    raise PlanningError(
                        GATE_TOO_SMALL, f"{pid} does not fit", chart=gate.chart
                    )
                half = Point(tuple(w / 2 for w in widths))
                goal = gate.box.center - half
                if not builder.route(
                    pid, goal, gate.chart, MovePhase.GATE, target.clear_of_inner
                ):
                    raise PlanningError(
                        DISCONNECTED_GRAPH,
                        f"{pid} cannot reach its pilot position",
                        chart=gate.chart,
                    )
            builder.pack(pid, height, target.clear_of_inner)

    plan = TransportPlan(
        scenario=world.name,
        color=color,
        scales=[c.scale for c in world.charts],
        nus=[c.nu for c in world.charts],
        slacks=[c.slack for c in world.charts],
        pieces=[
            PieceModel(
                id=pid,
                height=piece.height,
                cubes=list(piece.cubes),
                envelope=BoxModel.from_box(builder.initial[pid]),
            )
            for pid, piece in builder.pieces.items()
        ],
        moves=builder.moves,
        assignments=[builder.assignments[pid] for pid in builder.pieces],
        tree_parents=builder.tree_parents,
        metadata={
            "zones": zone_info,
            "exterior": len(exterior),
            "pieces": {
                str(h): len(decomposition.at_height(h)) for h in decomposition.heights
            },
            "areas": [format_rat(budget.cumulative(h)) for h in range(budget.levels)],
        },
    )
    logger.info(
        "colour %d: %d moves for %d pieces", color, len(plan.moves), len(plan.pieces)
    )
    return plan
