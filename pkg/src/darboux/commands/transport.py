"""Transport command: plan, validate and replay colour-class transports."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from ..context import RunContext
from ..errors import DarbouxError
from ..formatters import get_formatter
from ..geometry import Box
from ..models.config import OutputFormat
from ..models.plan import ReplayReport
from ..render import plan_frames, snapshot
from ..services.simulator import cube_positions
from ..services.transport_service import ColorOutcome, TransportService
from ..services.world import ChartComplex
from ..storage import load_plans, load_scenario, to_json, write_text


def _final_svg(world: ChartComplex, outcomes: list[ColorOutcome]) -> str:
    boxes: dict[str, Box] = {}
    charts: dict[str, int] = {}
    for outcome in outcomes:
        plan = outcome.run.plan
        if plan is None or outcome.cubes is None:
            continue
        boxes.update(cube_positions(plan, outcome.cubes))
        charts.update({c.id: c.chart for c in outcome.cubes})
    return snapshot(world, boxes, charts, world.name)


def transport_command(
    scenario: Annotated[
        Path, typer.Option("--scenario", "-s", help="Scenario JSON file")
    ],
    colors: Annotated[
        Optional[list[int]],
        typer.Option("--color", "-c", help="Colours to plan (default: all)"),
    ] = None,
    replay: Annotated[
        Optional[Path],
        typer.Option("--replay", help="Re-validate a stored plan or result"),
    ] = None,
    retry_bound: Annotated[
        Optional[int], typer.Option("--retry-bound", help="Shrink-and-retry limit")
    ] = None,
    output_format: Annotated[
        Optional[OutputFormat], typer.Option("--format", "-f", help="json or svg")
    ] = None,
    svg_dir: Annotated[
        Optional[Path],
        typer.Option("--svg-dir", help="Write initial, per-phase and final frames"),
    ] = None,
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the report here")
    ] = None,
) -> None:
    """Pack every colour class into the target disc and check the plans."""
    formatter = get_formatter()

    try:
        config = RunContext.resolve(retry_bound=retry_bound, format=output_format)
        spec = load_scenario(scenario)
        world = ChartComplex.from_spec(spec)
        bound = retry_bound if retry_bound is not None else spec.retry_bound
        if bound is None:
            bound = config.retry_bound
        service = TransportService(world, bound, config.residual_fraction)

        if replay is not None:
            plans = load_plans(replay)
            report = ReplayReport(
                scenario=world.name,
                reports={plan.color: service.replay(plan) for plan in plans},
            )
            formatter.emit(to_json(report), output)
            if not report.valid:
                formatter.print_error("replayed plan is not valid")
                raise typer.Exit(1)
            return

        outcomes = [service.plan(j) for j in colors or range(1, world.k + 1)]
        result = service.assemble([o.run for o in outcomes])
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    if svg_dir is not None:
        for outcome in outcomes:
            plan = outcome.run.plan
            if plan is None or outcome.cubes is None:
                continue
            for name, svg in plan_frames(outcome.world, outcome.cubes, plan):
                write_text(svg_dir / f"colour-{plan.color}-{name}.svg", svg)

    if config.format == OutputFormat.SVG:
        formatter.emit(_final_svg(world, outcomes), output)
    else:
        formatter.emit(to_json(result), output)
    if output is not None:
        formatter.console.print(formatter.format_transport_table(result))
    if not result.residual_ok:
        formatter.print_warning(
            f"uncovered share {float(result.residual_fraction):.4f} is above "
            f"{float(config.residual_fraction):.4f}"
        )
    if not result.ok:
        for run in result.runs:
            if run.report is not None and run.report.valid and not run.error:
                continue
            reason = run.error or "invalid plan"
            formatter.print_error(f"colour {run.color}: {reason}")
        raise typer.Exit(1)
