"""Tests for chart complexes, colour classes and the transport pipeline."""

from fractions import Fraction
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from darboux.errors import (
    CAPACITY,
    DISCONNECTED_GRAPH,
    RATIOS_TOO_LARGE,
    SCALE_TOO_LARGE,
    GeometryError,
    ParameterError,
    PlanningError,
    VerificationError,
)
from darboux.geometry import Box, Point, RectilinearRegion
from darboux.models.plan import Move, MovePhase
from darboux.models.scenario import BoxModel, ChartSpec, GateSpec, ScenarioSpec
from darboux.services.colored_cover import (
    ColoredCubeSet,
    PlacedCube,
    build_colored_cover,
    cover_residual,
    cube_id,
)
from darboux.services.decomposition import decompose_colors
from darboux.services.lattice_cover import build_cover
from darboux.services.neighbours import build_neighbour_graph, routing_trees
from darboux.services.planner import PlanBuilder, ZoneCompressor
from darboux.services.simulator import simulate_plan
from darboux.services.transport_service import (
    ColorOutcome,
    TransportService,
    shrink_for,
)
from darboux.services.world import ChartComplex, DiscTarget
from tests.conftest import box

F = Fraction


def square(x0: object, y0: object, x1: object, y1: object) -> Box:
    return Box.from_bounds([(x0, x1), (y0, y1)])


def placed(
    chart: int, index: tuple[int, int], cube: Box, color: int = 1
) -> PlacedCube:
    return PlacedCube(cube_id(chart, color, index), chart, color, index, cube)


def cube_set(*cubes: PlacedCube) -> ColoredCubeSet:
    result = ColoredCubeSet()
    for cube in cubes:
        result.cubes.setdefault((cube.chart, cube.color), []).append(cube)
    return result


@pytest.fixture
def stacked_world() -> ChartComplex:
    """Three overlapping charts of scales 1/2, 1/2 and 4 chained by gates."""
    cell = [box(["-1", "-1"], ["5", "5"])]
    gate = box(["0", "0"], ["1", "1"])
    spec = ScenarioSpec(
        name="stacked",
        k=3,
        epsilon="1",
        charts=[
            ChartSpec(cells=cell, scale=scale, nu="1/5", slack="1/100")
            for scale in ("1/2", "1/2", "4")
        ],
        gates=[
            GateSpec(chart=1, parent=0, box=gate),
            GateSpec(chart=2, parent=1, box=gate),
        ],
        ball_center=["2", "2"],
        disc_areas=["1", "2", "3"],
    )
    return ChartComplex.from_spec(spec)


class TestScenarioSpec:
    """Test scenario validation."""

    def test_too_few_colours(self, single_chart_spec: ScenarioSpec) -> None:
        """Test that k must be at least 2n+1."""
        with pytest.raises(ValidationError, match="k must be at least 3"):
            ScenarioSpec.model_validate({**single_chart_spec.model_dump(), "k": 2})

    def test_one_disc_area_per_chart(self, single_chart_spec: ScenarioSpec) -> None:
        """Test that every chart gets exactly one disc area."""
        data = {**single_chart_spec.model_dump(), "disc_areas": ["1", "1/2"]}
        with pytest.raises(ValidationError, match="one disc area per chart"):
            ScenarioSpec.model_validate(data)

    def test_gate_parent_precedes_chart(self) -> None:
        """Test that gates point to earlier charts."""
        with pytest.raises(ValidationError, match="smaller index"):
            GateSpec(chart=1, parent=1, box=box(["0", "0"], ["1", "1"]))


class TestChartComplex:
    """Test chart complexes, budgets and targets."""

    def test_single_chart_budget(self, single_chart_world: ChartComplex) -> None:
        """Test the share (|V| + (k-1)/(l+1) eps) / k."""
        budget = single_chart_world.budget()
        assert budget.share(0) == F(7, 15)
        assert budget.total() == F(7, 15)
        assert single_chart_world.charts[0].pitch == F(21, 400)

    def test_default_zone(self, single_chart_world: ChartComplex) -> None:
        """Test that the cell holding the center is the default zone."""
        assert single_chart_world.zones() == (square(0, 0, 1, 1),)

    def test_targets_are_nested_annuli(self, two_chart_world: ChartComplex) -> None:
        """Test that height h starts where height h-1 ends."""
        inner = two_chart_world.target(0)
        outer = two_chart_world.target(1)
        assert isinstance(inner, DiscTarget)
        assert isinstance(outer, DiscTarget)
        assert inner.inner == 0
        assert outer.inner == inner.outer
        assert two_chart_world.gate_chain(1)[0].parent == 0

    def test_missing_gate(self, two_chart_spec: ScenarioSpec) -> None:
        """Test that every chart but the first needs a gate."""
        spec = two_chart_spec.model_copy(update={"gates": []})
        with pytest.raises(GeometryError, match="exactly one gate"):
            ChartComplex.from_spec(spec)

    def test_gate_outside_chart(self, two_chart_spec: ScenarioSpec) -> None:
        """Test that gates lie in both of their charts."""
        gate = GateSpec(chart=1, parent=0, box=box(["0", "0"], ["1", "1"]))
        spec = two_chart_spec.model_copy(update={"gates": [gate]})
        with pytest.raises(GeometryError, match="does not lie in chart 1"):
            ChartComplex.from_spec(spec)

    def test_target_leaves_home_chart(self, single_chart_spec: ScenarioSpec) -> None:
        """Test that the target disc must fit into chart 0."""
        spec = single_chart_spec.model_copy(update={"ball_center": [F(1, 10)] * 2})
        with pytest.raises(GeometryError, match="target leaves chart 0"):
            ChartComplex.from_spec(spec)

    def test_center_outside_home_chart(self, single_chart_spec: ScenarioSpec) -> None:
        """Test that the ball center lies in chart 0."""
        spec = single_chart_spec.model_copy(update={"ball_center": [F(3), F(3)]})
        with pytest.raises(GeometryError, match="ball center"):
            ChartComplex.from_spec(spec)

    def test_with_parameters_length(self, single_chart_world: ChartComplex) -> None:
        """Test that one value per chart is required."""
        with pytest.raises(ParameterError, match="one scale"):
            single_chart_world.with_parameters([F(1)], [], [F(1)])


class TestColoredCover:
    """Test the scaled colour classes."""

    def test_cube_count(self, single_chart_world: ChartComplex) -> None:
        """Test the colour-1 cubes of the unit square at scale 1/20."""
        cubes = build_colored_cover(single_chart_world, build_cover(1, 3), colors=[1])
        placed_cubes = cubes.in_chart(0, 1)
        assert len(placed_cubes) == 108
        region = single_chart_world.charts[0].region
        assert all(
            region.contains_box(c.box.fatten(F(1, 20))) for c in placed_cubes
        )

    def test_colours_must_match(self, single_chart_world: ChartComplex) -> None:
        """Test that the cover has k colours."""
        with pytest.raises(ParameterError, match="colours"):
            build_colored_cover(single_chart_world, build_cover(1, 4))

    def test_residual_shrinks_with_scale(
        self, single_chart_world: ChartComplex
    ) -> None:
        """Test that finer cubes leave less of the chart uncovered."""
        cover = build_cover(1, 3)
        residuals = []
        for scale in (F(1, 10), F(1, 20), F(1, 40)):
            cubes = build_colored_cover(
                single_chart_world, cover, scales=[scale], check_budget=False
            )
            residuals.append(cover_residual(single_chart_world, cubes))
        assert residuals[0] > residuals[1] > residuals[2] > 0

    def test_huge_cubes_cover_nothing(self, single_chart_world: ChartComplex) -> None:
        """Test that cubes too large for the margin leave the whole chart."""
        cubes = build_colored_cover(
            single_chart_world, build_cover(1, 3), scales=[F(1)], check_budget=False
        )
        assert cover_residual(single_chart_world, cubes) == 1


class TestDecomposition:
    """Test components, heights and saturations."""

    def test_hole_is_saturated(self, stacked_world: ChartComplex) -> None:
        """Test that a ring through three charts swallows what it encloses."""
        inner = placed(0, (9, 9), square("4.02", "3.6", "4.08", "3.66"))
        cubes = cube_set(
            placed(2, (0, 0), square(0, 0, 4, 4)),
            placed(0, (1, 0), square("3.7", 3, "4.2", "3.5")),
            placed(1, (0, 0), square("4.1", "3.4", "4.6", "3.9")),
            placed(0, (2, 0), square("3.7", "3.8", "4.2", "4.3")),
            inner,
        )
        decomposition = decompose_colors(stacked_world, cubes, 1)
        assert decomposition.heights == [2]
        (component,) = decomposition.components
        assert len(component.cubes) == 4
        assert component.absorbed == (inner,)
        assert component.saturation.area == F(331, 20)
        assert component.envelope == square("-0.8", "-0.8", "4.8", "4.8")

    def test_two_tops(self, stacked_world: ChartComplex) -> None:
        """Test that a component with two top cubes is rejected."""
        cubes = cube_set(
            placed(1, (0, 0), square(0, 0, 1, 1)),
            placed(1, (1, 0), square(2, 0, 3, 1)),
            placed(0, (0, 0), square("0.9", "0.4", "2.1", "0.6")),
        )
        with pytest.raises(PlanningError) as excinfo:
            decompose_colors(stacked_world, cubes, 1)
        assert excinfo.value.reason == RATIOS_TOO_LARGE
        assert excinfo.value.retryable

    def test_overlapping_charts_join(self, stacked_world: ChartComplex) -> None:
        """Test that lower cubes overlapping a top cube join its component."""
        cubes = cube_set(
            placed(1, (0, 0), square(1, 1, "1.5", "1.5")),
            placed(0, (0, 0), square("0.95", "1.1", "1.05", "1.2")),
            placed(0, (1, 0), square("1.45", "1.2", "1.55", "1.3")),
        )
        decomposition = decompose_colors(stacked_world, cubes, 1)
        assert decomposition.heights == [1]
        assert len(decomposition.at_height(1)[0].members) == 3

    def test_escaping_the_neighbourhood(self, stacked_world: ChartComplex) -> None:
        """Test that a component reaching past nu d of its top is rejected."""
        cubes = cube_set(
            placed(1, (0, 0), square(1, 1, "1.5", "1.5")),
            placed(0, (0, 0), square("0.5", "1.1", "1.05", "1.2")),
        )
        with pytest.raises(PlanningError, match="neighbourhood"):
            decompose_colors(stacked_world, cubes, 1)

    def test_single_chart_pieces(self, single_chart_world: ChartComplex) -> None:
        """Test that every cube of one chart is its own piece."""
        cubes = build_colored_cover(single_chart_world, build_cover(1, 3), colors=[2])
        decomposition = decompose_colors(single_chart_world, cubes, 2)
        assert decomposition.heights == [0]
        assert len(decomposition.components) == len(cubes.in_chart(0, 2))


class TestNeighbourGraph:
    """Test neighbour graphs and routing trees."""

    def pair(self) -> ColoredCubeSet:
        d = F(1, 20)
        return cube_set(
            placed(0, (0, 0), Box.cube(Point.of(d, d), d)),
            placed(0, (1, 0), Box.cube(Point.of(4 * d, d), d)),
        )

    def test_axis_neighbours(self, single_chart_world: ChartComplex) -> None:
        """Test that cubes one period apart are joined."""
        graph = build_neighbour_graph(single_chart_world, self.pair(), 0, 1)
        assert graph.number_of_edges() == 1

    def test_forbidden_region_cuts_edges(
        self, single_chart_world: ChartComplex
    ) -> None:
        """Test that hulls through the forbidden region are dropped."""
        strip = RectilinearRegion.from_box(square("0.12", 0, "0.15", 1))
        graph = build_neighbour_graph(single_chart_world, self.pair(), 0, 1, strip)
        assert graph.number_of_edges() == 0

    def test_cube_between_neighbours(self, single_chart_world: ChartComplex) -> None:
        """Test that a cube inside an edge hull is a verification failure."""
        cubes = self.pair()
        third = placed(0, (5, 5), square("0.11", "0.06", "0.15", "0.09"))
        cubes.cubes[(0, 1)].append(third)
        with pytest.raises(VerificationError, match="lies between"):
            build_neighbour_graph(single_chart_world, cubes, 0, 1)

    def test_full_class_is_consistent(self, single_chart_world: ChartComplex) -> None:
        """Test that no lattice cube sits between two neighbours."""
        cubes = build_colored_cover(single_chart_world, build_cover(1, 3), colors=[1])
        graph = build_neighbour_graph(single_chart_world, cubes, 0, 1)
        assert graph.number_of_nodes() == 108
        assert graph.number_of_edges() > 0

    def test_routing_trees(self, single_chart_world: ChartComplex) -> None:
        """Test that trees are rooted nearest the anchor and list parents first."""
        cubes = build_colored_cover(single_chart_world, build_cover(1, 3), colors=[1])
        graph = build_neighbour_graph(single_chart_world, cubes, 0, 1)
        anchor = Point.of("1/2", "1/2")
        trees = routing_trees(graph, anchor)
        assert sum(len(tree.order) for tree in trees) == 108
        for tree in trees:
            assert tree.order[0] == tree.root
            position = {node: i for i, node in enumerate(tree.order)}
            for child, parent in tree.parents.items():
                assert position[parent] < position[child]
                assert tree.path_to_root(child)[-1] == tree.root


class TestPlanner:
    """Test planned and replayed transports."""

    @pytest.mark.parametrize("color", [1, 2, 3])
    def test_single_chart_plan_is_valid(
        self, single_chart_world: ChartComplex, color: int
    ) -> None:
        """Test that every colour of the unit square packs into the disc."""
        outcome = TransportService(single_chart_world).plan(color)
        run = outcome.run
        assert run.error is None
        assert run.plan is not None
        assert run.report is not None
        assert run.report.valid, run.report.violations
        assert run.report.area_preserved
        assert len(run.plan.assignments) == len(run.plan.pieces)
        assert run.plan.phase_counts().get(MovePhase.COMPRESS.value, 0) > 0

    def test_gate_hop(self, two_chart_world: ChartComplex) -> None:
        """Test that a chart-1 cube is led through its gate."""
        outcome = TransportService(two_chart_world).plan(1)
        plan = outcome.run.plan
        assert plan is not None
        assert outcome.run.report is not None
        assert outcome.run.report.valid, outcome.run.report.violations
        assert any(move.phase == MovePhase.GATE for move in plan.moves)
        assert any(cell.height == 1 for cell in plan.assignments)
        assert outcome.run.report.packed_area[1] == F(1, 1600)

    @pytest.mark.parametrize("color", [1, 2, 3])
    def test_two_chart_saturations_are_disjoint(
        self, two_chart_world: ChartComplex, color: int
    ) -> None:
        """Test that the saturated components of two charts never overlap."""
        cubes = build_colored_cover(two_chart_world, build_cover(1, 3), colors=[color])
        decomposition = decompose_colors(two_chart_world, cubes, color)
        components = decomposition.components
        assert len(components) > 1
        for i, first in enumerate(components):
            for second in components[i + 1 :]:
                assert not first.saturation.interior_intersects(second.saturation)
        layers = list(decomposition.saturations.values())
        for i, layer in enumerate(layers):
            for other in layers[i + 1 :]:
                assert not layer.interior_intersects(other)

    def test_cut_zone_is_retryable(self, single_chart_world: ChartComplex) -> None:
        """Test that compressed cells split by taken cells fail retryably."""
        cover = build_cover(1, 3)
        cubes = build_colored_cover(single_chart_world, cover, colors=[1])
        decomposition = decompose_colors(single_chart_world, cubes, 1)
        builder = PlanBuilder(single_chart_world, decomposition, cover.delta)
        builder.taken.update((0, (0, j)) for j in range(-10, 11))
        (zone,) = single_chart_world.zones()
        pieces = [c.id for c in decomposition.at_height(0)]

        with pytest.raises(PlanningError) as excinfo:
            ZoneCompressor(builder, zone).run(pieces)

        assert excinfo.value.reason == DISCONNECTED_GRAPH
        assert excinfo.value.retryable
        assert excinfo.value.chart == 0

    def test_tree_leg_detours_a_lone_blocker(
        self, single_chart_world: ChartComplex
    ) -> None:
        """Test that a tree leg steps a loose cube aside and puts it back."""
        mover = placed(0, (0, 0), square("1/10", "1/10", "3/20", "3/20"))
        loose = placed(0, (1, 0), square("3/10", "7/50", "7/20", "19/100"))
        decomposition = decompose_colors(single_chart_world, cube_set(mover, loose), 1)
        builder = PlanBuilder(single_chart_world, decomposition, F(1, 2))

        assert builder.leg(mover.id, Point.of("2/5", 0), 0, MovePhase.TREE)

        assert [move.phase for move in builder.moves] == [
            MovePhase.DETOUR,
            MovePhase.TREE,
            MovePhase.RESTORE,
        ]
        assert builder.moves[0].shift() == Point.of(0, "1/80")
        assert builder.boxes[loose.id] == loose.box
        assert builder.boxes[mover.id] == mover.box.translate(Point.of("2/5", 0))

    def test_tree_routes(self, tree_zone_spec: ScenarioSpec) -> None:
        """Test that cubes outside the zone follow their routing trees."""
        world = ChartComplex.from_spec(tree_zone_spec)
        outcome = TransportService(world).plan(1)
        plan = outcome.run.plan
        assert plan is not None
        assert outcome.run.report is not None
        assert outcome.run.report.valid, outcome.run.report.violations
        assert any(move.phase == MovePhase.TREE for move in plan.moves)
        assert plan.tree_parents

    def test_capacity(self, single_chart_spec: ScenarioSpec) -> None:
        """Test that a tiny target disc fails without retrying."""
        spec = single_chart_spec.model_copy(update={"disc_areas": [F(1, 100)]})
        run = TransportService(ChartComplex.from_spec(spec)).plan(1).run
        assert run.plan is None
        assert run.error is not None and run.error.startswith(CAPACITY)
        assert len(run.attempts) == 1

    def test_colour_out_of_range(self, single_chart_world: ChartComplex) -> None:
        """Test that colours live in 1..k."""
        with pytest.raises(ParameterError, match="colour 4"):
            TransportService(single_chart_world).plan(4)


class TestSimulator:
    """Test that the replay catches broken plans."""

    @pytest.fixture
    def outcome(self, single_chart_world: ChartComplex) -> ColorOutcome:
        return TransportService(single_chart_world).plan(1)

    def test_cell_collision(self, outcome: ColorOutcome) -> None:
        """Test that two pieces in one cell are flagged."""
        plan = outcome.run.plan.model_copy(deep=True)
        plan.assignments[1].cell = list(plan.assignments[0].cell)
        plan.assignments[1].height = plan.assignments[0].height
        report = simulate_plan(outcome.world, outcome.cubes, plan)
        assert not report.valid
        assert any("cell collision" in v for v in report.violations)

    def test_sweep_collision(self, outcome: ColorOutcome) -> None:
        """Test that sliding a piece onto its neighbour is flagged."""
        plan = outcome.run.plan
        step = 3 * plan.scales[0]
        envelopes = {p.id: p.envelope.to_box() for p in plan.pieces}
        mover = next(
            pid
            for pid, env in envelopes.items()
            if any(
                other.lo == env.lo + Point.of(step, 0) for other in envelopes.values()
            )
        )
        start = envelopes[mover]
        vector = Point.of(step, 0)
        move = Move(
            piece=mover,
            phase=MovePhase.PACK,
            vector=list(vector),
            swept=BoxModel.from_box(start.hull(start.translate(vector))),
        )
        broken = plan.model_copy(update={"moves": [move]})
        report = simulate_plan(outcome.world, outcome.cubes, broken)
        assert not report.valid
        assert any("sweep collision" in v for v in report.violations)

    def test_diagonal_and_unknown_moves(self, outcome: ColorOutcome) -> None:
        """Test that only axis moves of known pieces are allowed."""
        plan = outcome.run.plan
        piece = plan.pieces[0]
        start = piece.envelope.to_box()
        diagonal = Point.of("1/100", "1/100")
        moves = [
            Move(
                piece=piece.id,
                phase=MovePhase.PACK,
                vector=list(diagonal),
                swept=BoxModel.from_box(start.hull(start.translate(diagonal))),
            ),
            Move(
                piece="nowhere",
                phase=MovePhase.PACK,
                vector=["1/100", "0"],
                swept=piece.envelope,
            ),
        ]
        report = simulate_plan(
            outcome.world, outcome.cubes, plan.model_copy(update={"moves": moves})
        )
        assert any("diagonal move" in v for v in report.violations)
        assert any("unknown piece" in v for v in report.violations)

    def test_resized_piece(self, outcome: ColorOutcome) -> None:
        """Test that a piece stored with other widths than its cube is flagged."""
        plan = outcome.run.plan.model_copy(deep=True)
        piece = plan.pieces[0]
        piece.envelope = BoxModel.from_box(piece.envelope.to_box().fatten(F(1, 100)))
        report = simulate_plan(outcome.world, outcome.cubes, plan)
        assert not report.valid
        assert not report.area_preserved
        assert any(v.startswith(f"cube {piece.id} resized") for v in report.violations)

    @pytest.mark.parametrize("color", [1, 2, 3])
    def test_replay_of_a_valid_plan(
        self, single_chart_world: ChartComplex, color: int
    ) -> None:
        """Test that a stored plan of every colour validates again from scratch."""
        service = TransportService(single_chart_world)
        plan = service.plan(color).run.plan
        assert plan is not None
        report = service.replay(plan)
        assert report.valid, report.violations
        assert report.area_preserved
        assert report.packed_area[0] < report.region_area[0]

    def test_replay_of_another_scenario(
        self, two_chart_world: ChartComplex, outcome: ColorOutcome
    ) -> None:
        """Test that plans are bound to their scenario."""
        with pytest.raises(ParameterError, match="scenario"):
            TransportService(two_chart_world).replay(outcome.run.plan)


class TestRetry:
    """Test the shrink-and-retry driver."""

    def test_shrinks_after_retryable_failure(
        self, single_chart_world: ChartComplex
    ) -> None:
        """Test that a scale failure halves the scale and tries again."""
        with patch("darboux.services.transport_service.plan_color") as mock_plan:
            mock_plan.side_effect = [
                PlanningError(SCALE_TOO_LARGE, chart=0),
                PlanningError(CAPACITY, "no room"),
            ]
            run = TransportService(single_chart_world).plan(1).run

        assert mock_plan.call_count == 2
        assert [a.scales for a in run.attempts] == [[F(1, 20)], [F(1, 40)]]
        assert run.error is not None and run.error.startswith(CAPACITY)

    def test_gives_up_at_the_bound(self, single_chart_world: ChartComplex) -> None:
        """Test that at most retry_bound + 1 attempts are made."""
        with patch("darboux.services.transport_service.plan_color") as mock_plan:
            mock_plan.side_effect = PlanningError(RATIOS_TOO_LARGE, chart=0)
            run = TransportService(single_chart_world, retry_bound=1).plan(1).run

        assert len(run.attempts) == 2
        assert run.plan is None
        assert all(a.error for a in run.attempts)

    def test_negative_bound(self, single_chart_world: ChartComplex) -> None:
        """Test that the retry bound is non-negative."""
        with pytest.raises(ParameterError, match="retry bound"):
            TransportService(single_chart_world, retry_bound=-1)

    def test_shrink_named_chart(self, two_chart_world: ChartComplex) -> None:
        """Test that only the named chart shrinks."""
        world = shrink_for(two_chart_world, PlanningError(SCALE_TOO_LARGE, chart=1))
        assert world.scales == [F(1, 10), F(1, 80)]
        assert world.charts[1].nu == F(1, 100)
        assert world.charts[1].slack == F(1, 8000)

    def test_shrink_charts_below(self, two_chart_world: ChartComplex) -> None:
        """Test that ratio failures shrink the charts below the height."""
        world = shrink_for(two_chart_world, PlanningError(RATIOS_TOO_LARGE, chart=1))
        assert world.scales == [F(1, 20), F(1, 40)]

    def test_shrink_everything(self, two_chart_world: ChartComplex) -> None:
        """Test that errors without a chart shrink every chart."""
        world = shrink_for(two_chart_world, PlanningError(SCALE_TOO_LARGE))
        assert world.scales == [F(1, 20), F(1, 80)]


class TestTransportService:
    """Test whole runs."""

    def test_run_reports_every_colour(self, single_chart_world: ChartComplex) -> None:
        """Test that a full run plans all k colours."""
        result = TransportService(single_chart_world).run()
        assert [run.color for run in result.runs] == [1, 2, 3]
        assert result.ok
        assert 0 < result.residual < 1
        assert result.residual_fraction == result.residual

    def test_fine_square_meets_the_residual_bound(
        self, fine_chart_world: ChartComplex
    ) -> None:
        """Test that cubes of side 1/100 leave under a twentieth of the square."""
        result = TransportService(fine_chart_world).run(colors=[1])
        assert result.residual == F(89, 2000)
        assert result.residual_fraction < F(1, 20)
        assert result.residual_ok
        assert result.ok, result.runs[0].report

    def test_coarse_square_misses_the_residual_bound(
        self, single_chart_world: ChartComplex
    ) -> None:
        """Test that cubes of side 1/20 leave 17/80 of the square uncovered."""
        result = TransportService(single_chart_world).assemble([])
        assert result.residual == F(17, 80)
        assert not result.residual_ok

    def test_residual_threshold(self, single_chart_world: ChartComplex) -> None:
        """Test the accepted uncovered share."""
        lenient = TransportService(single_chart_world, residual_fraction=F(1))
        assert lenient.assemble([]).residual_ok
        strict = TransportService(single_chart_world, residual_fraction=F(1, 10**6))
        assert not strict.assemble([]).residual_ok
