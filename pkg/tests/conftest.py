"""Pytest configuration and fixtures for darboux tests."""

import tempfile
from collections.abc import Generator
from fractions import Fraction
from pathlib import Path

import pytest
from typer.testing import CliRunner

from darboux.log import LOG_ENV_VAR
from darboux.models.scenario import BoxModel, ChartSpec, GateSpec, ScenarioSpec
from darboux.services.world import ChartComplex
from darboux.storage import save_model


def box(lo: list[str], hi: list[str]) -> BoxModel:
    return BoxModel(lo=lo, hi=hi)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for testing."""
    with tempfile.TemporaryDirectory() as tmp:
        yield Path(tmp)


@pytest.fixture
def cli_runner() -> CliRunner:
    """Create a CLI runner for testing commands."""
    return CliRunner()


@pytest.fixture(autouse=True)
def isolated_config(
    temp_dir: Path, monkeypatch: pytest.MonkeyPatch
) -> Generator[None, None, None]:
    """Run every test from an empty directory without a log level override."""
    monkeypatch.delenv(LOG_ENV_VAR, raising=False)
    monkeypatch.chdir(temp_dir)
    yield


@pytest.fixture
def single_chart_spec() -> ScenarioSpec:
    """The unit square as one chart, three colours, cubes of side 1/20."""
    return ScenarioSpec(
        name="single",
        k=3,
        epsilon="1/5",
        charts=[
            ChartSpec(
                cells=[box(["0", "0"], ["1", "1"])],
                scale="1/20",
                nu="1/50",
                slack="1/2000",
            )
        ],
        ball_center=["1/2", "1/2"],
    )


@pytest.fixture
def single_chart_world(single_chart_spec: ScenarioSpec) -> ChartComplex:
    return ChartComplex.from_spec(single_chart_spec)


@pytest.fixture
def fine_chart_world(single_chart_spec: ScenarioSpec) -> ChartComplex:
    """The unit square at scale 1/100, fine enough to cover all but 89/2000."""
    chart = single_chart_spec.charts[0].model_copy(
        update={"scale": Fraction(1, 100), "slack": Fraction(1, 10000)}
    )
    spec = single_chart_spec.model_copy(update={"name": "fine", "charts": [chart]})
    return ChartComplex.from_spec(spec)


@pytest.fixture
def tree_zone_spec(single_chart_spec: ScenarioSpec) -> ScenarioSpec:
    """The single chart with a compression zone stopping short of the top row."""
    chart = single_chart_spec.charts[0].model_copy(
        update={"zones": [box(["0", "0"], ["1", "9/10"])]}
    )
    return single_chart_spec.model_copy(update={"name": "tree", "charts": [chart]})


@pytest.fixture
def two_chart_spec() -> ScenarioSpec:
    """A home square plus a thin chart reaching past its right edge."""
    return ScenarioSpec(
        name="two-chart",
        k=3,
        epsilon="1",
        charts=[
            ChartSpec(
                cells=[box(["0", "0"], ["2", "2"])],
                scale="1/10",
                nu="1/50",
                slack="1/1000",
            ),
            ChartSpec(
                cells=[box(["39/20", "39/40"], ["81/40", "21/20"])],
                origin=["79/40", "1"],
                scale="1/40",
                nu="1/50",
                slack="1/4000",
            ),
        ],
        gates=[
            GateSpec(chart=1, parent=0, box=box(["39/20", "39/40"], ["2", "21/20"]))
        ],
        ball_center=["1", "1"],
    )


@pytest.fixture
def two_chart_world(two_chart_spec: ScenarioSpec) -> ChartComplex:
    return ChartComplex.from_spec(two_chart_spec)


@pytest.fixture
def scenario_file(temp_dir: Path, single_chart_spec: ScenarioSpec) -> Path:
    """The single-chart scenario written to disk."""
    path = temp_dir / "single.json"
    save_model(single_chart_spec, path)
    return path
