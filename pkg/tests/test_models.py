"""Tests for domain models."""

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from darboux.models.common import IntInterval, RatInterval
from darboux.models.config import OutputFormat, RunConfig
from darboux.models.manifold import ManifoldDescriptor, SBKind, SBResult
from darboux.models.plan import (
    ColorRun,
    Move,
    MovePhase,
    ReplayReport,
    SimulationReport,
    TransportResult,
)
from darboux.models.scenario import BoxModel, ChartSpec

F = Fraction


def report(valid: bool) -> SimulationReport:
    return SimulationReport(valid=valid, final_containment=valid, area_preserved=True)


class TestRat:
    """Test rational fields."""

    def test_accepts_strings_and_ints(self) -> None:
        """Test p/q strings, decimals and integers."""
        interval = RatInterval(lo="1/3", hi=2)
        assert interval.lo == F(1, 3)
        assert interval.hi == 2
        assert RatInterval(lo="0.25").lo == F(1, 4)

    def test_json_form(self) -> None:
        """Test that rationals are p/q strings in JSON only."""
        interval = RatInterval(lo=F(2, 4), hi=F(3))
        assert json.loads(interval.model_dump_json()) == {"lo": "1/2", "hi": "3"}
        assert interval.model_dump()["lo"] == F(1, 2)

    def test_rejects_garbage(self) -> None:
        """Test that non-rationals fail validation."""
        with pytest.raises(ValidationError):
            RatInterval(lo="one half")

    def test_rejects_unknown_keys(self) -> None:
        """Test extra="forbid"."""
        with pytest.raises(ValidationError):
            RatInterval.model_validate({"lo": "1", "mid": "2"})


class TestIntervals:
    """Test integer and rational intervals."""

    def test_exact(self) -> None:
        """Test one-point intervals."""
        interval = IntInterval.exact(4)
        assert interval.is_exact
        assert str(interval) == "4"
        assert interval.members == [4]

    def test_range(self) -> None:
        """Test membership, printing and intersection."""
        interval = IntInterval(lo=3, hi=5)
        assert interval.contains(4)
        assert not interval.contains(6)
        assert str(interval) == "[3, 5]"
        assert interval.intersect(IntInterval(lo=5, hi=9)) == IntInterval.exact(5)
        assert interval.intersect(IntInterval(lo=6, hi=9)) is None

    def test_empty_interval(self) -> None:
        """Test that lo > hi is rejected."""
        with pytest.raises(ValidationError, match="empty interval"):
            IntInterval(lo=5, hi=3)
        with pytest.raises(ValidationError, match="empty interval"):
            RatInterval(lo=F(2), hi=F(1))

    def test_open_rational_interval(self) -> None:
        """Test that hi = None is unbounded and never exact."""
        assert not RatInterval(lo=F(1)).is_exact
        assert RatInterval.exact(F(1)).is_exact


class TestSBResult:
    """Test covering-number results."""

    def test_from_members_kinds(self) -> None:
        """Test exact, range and set results."""
        assert SBResult.from_members([3, 3], []).kind == SBKind.EXACT
        assert SBResult.from_members([5, 3, 4], []).kind == SBKind.RANGE
        gapped = SBResult.from_members([3, 5], ["from a table"])
        assert gapped.kind == SBKind.SET
        assert str(gapped) == "{3, 5}"
        assert gapped.value is None

    def test_empty(self) -> None:
        """Test that an empty result is an error."""
        with pytest.raises(ValueError, match="empty"):
            SBResult.from_members([], [])


class TestManifoldDescriptor:
    """Test descriptor consistency checks."""

    def descriptor(self, **values: object) -> ManifoldDescriptor:
        data: dict[str, object] = {
            "half_dim": 2,
            "volume": "1/2",
            "gromov_width": {"lo": "1", "hi": "1"},
        }
        data.update(values)
        return ManifoldDescriptor.model_validate(data)

    def test_minimal(self) -> None:
        """Test the required fields."""
        descriptor = self.descriptor()
        assert descriptor.volume == F(1, 2)
        assert descriptor.gromov_width.is_exact

    @pytest.mark.parametrize(
        "values,message",
        [
            ({"volume": "0"}, "volume"),
            ({"gromov_width": {"lo": "0"}}, "Gromov width"),
            ({"cup_length": {"lo": 1, "hi": 1}}, "cup-length"),
            ({"cat": {"lo": 6, "hi": 7}}, "category"),
            ({"b_of_m": {"lo": 1, "hi": 2}}, "B\\(M\\)"),
            ({"ball_cover_upper": 2}, "ball cover"),
            ({"gamma_cited": 0}, "at least 1"),
        ],
    )
    def test_inconsistent(self, values: dict[str, object], message: str) -> None:
        """Test every rejected combination."""
        with pytest.raises(ValidationError, match=message):
            self.descriptor(**values)

    def test_category_above_b(self) -> None:
        """Test that cat <= B(M) is enforced."""
        with pytest.raises(ValidationError, match="category exceeds"):
            self.descriptor(cat={"lo": 4, "hi": 4}, b_of_m={"lo": 3, "hi": 3})


class TestScenarioModels:
    """Test boxes and charts on the wire."""

    def test_degenerate_box(self) -> None:
        """Test that boxes need positive width."""
        with pytest.raises(ValidationError, match="degenerate"):
            BoxModel(lo=["0", "1"], hi=["1", "1"])

    def test_box_dimensions(self) -> None:
        """Test that corners share a dimension."""
        with pytest.raises(ValidationError, match="dimension"):
            BoxModel(lo=["0", "0"], hi=["1", "1", "1"])

    def test_chart_parameters(self) -> None:
        """Test that scale, nu and slack are positive."""
        cell = BoxModel(lo=["0", "0"], hi=["1", "1"])
        with pytest.raises(ValidationError, match="nu must be positive"):
            ChartSpec(cells=[cell], scale="1/10", nu="0", slack="1/100")


class TestPlanModels:
    """Test plans and results."""

    def test_phase_serializes_to_value(self) -> None:
        """Test the wire names of move phases."""
        move = Move(
            piece="0/1/0,0",
            phase=MovePhase.GATE,
            vector=["1/2", "0"],
            swept=BoxModel(lo=["0", "0"], hi=["1", "1"]),
        )
        assert json.loads(move.model_dump_json())["phase"] == "gate-hop"
        assert move.shift().support() == [0]

    def test_result_ok(self) -> None:
        """Test that every run must be valid and error free."""
        result = TransportResult(
            scenario="s",
            residual=F(0),
            residual_fraction=F(0),
            residual_ok=True,
            runs=[ColorRun(color=1, report=report(True))],
        )
        assert result.ok
        result.runs.append(ColorRun(color=2, error="capacity"))
        assert not result.ok

    def test_replay_valid(self) -> None:
        """Test that an empty replay is not valid."""
        assert not ReplayReport(scenario="s").valid
        assert ReplayReport(scenario="s", reports={1: report(True)}).valid
        assert not ReplayReport(
            scenario="s", reports={1: report(True), 2: report(False)}
        ).valid


class TestRunConfig:
    """Test the run configuration model."""

    def test_defaults(self) -> None:
        """Test default values."""
        config = RunConfig()
        assert config.seed == 0
        assert config.format == OutputFormat.JSON
        assert config.translate_tolerance == 1e-6
        assert config.jacobian_tolerance == 1e-3

    def test_level_is_normalized(self) -> None:
        """Test that log levels are upper-cased."""
        assert RunConfig(log_level="info").log_level == "INFO"

    def test_unknown_level(self) -> None:
        """Test that unknown log levels are rejected."""
        with pytest.raises(ValidationError, match="unknown log level"):
            RunConfig(log_level="chatty")

    def test_format_serializes_to_value(self) -> None:
        """Test the JSON form of the output format."""
        assert json.loads(RunConfig().model_dump_json())["format"] == "json"
