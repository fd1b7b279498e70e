"""Invariants command: covering numbers from a manifold descriptor."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from ..errors import DarbouxError
from ..formatters import get_formatter
from ..models.manifold import ManifoldDescriptor
from ..services.invariants import evaluate
from ..storage import load_model, to_json


def invariants_command(
    descriptor: Annotated[
        Path, typer.Option("--descriptor", "-d", help="Manifold descriptor JSON")
    ],
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the report here")
    ] = None,
) -> None:
    """Compute γ, Γ, λ and S_B with provenance for one manifold."""
    formatter = get_formatter()

    try:
        report = evaluate(load_model(ManifoldDescriptor, descriptor))
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    formatter.emit(to_json(report), output)
    if output is not None:
        formatter.print_info(formatter.format_invariants_summary(report))
