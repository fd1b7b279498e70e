"""Translate command: the compactly supported Hamiltonian translation."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from ..context import RunContext
from ..errors import DarbouxError
from ..formatters import get_formatter
from ..services.hamiltonian import (
    DEFAULT_STEPS,
    demo_field,
    run_translation_checks,
    sample_trajectories,
)
from ..storage import to_json, trajectory_csv


def translate_command(
    demo: Annotated[
        bool,
        typer.Option("--demo", help="Emit CSV trajectories instead of the checks"),
    ] = False,
    steps: Annotated[int, typer.Option("--steps", help="RK4 steps")] = DEFAULT_STEPS,
    samples: Annotated[
        int, typer.Option("--samples", help="Trajectories in demo mode")
    ] = 8,
    record_every: Annotated[
        int, typer.Option("--record-every", help="Steps between CSV rows")
    ] = 100,
    grid: Annotated[int, typer.Option("--grid", help="Sample grid per axis")] = 21,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Random seed")] = None,
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the output here")
    ] = None,
) -> None:
    """Flow the unit square by q = (0, 2) and check endpoints and area."""
    formatter = get_formatter()

    try:
        if steps < 1 or record_every < 1:
            raise typer.BadParameter("steps and --record-every must be positive")
        config = RunContext.resolve(seed=seed)
        if demo:
            rows = sample_trajectories(
                demo_field(), samples, config.seed, steps, record_every
            )
            formatter.emit(trajectory_csv(rows), output)
            return
        report = run_translation_checks(
            steps=steps,
            grid=grid,
            endpoint_tolerance=config.translate_tolerance,
            jacobian_tolerance=config.jacobian_tolerance,
        )
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    formatter.emit(to_json(report), output)
    if not report.passed:
        formatter.print_error("translation checks failed")
        raise typer.Exit(1)
