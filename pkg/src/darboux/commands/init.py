"""Init command: write a run configuration for darboux."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from ..context import RunContext
from ..errors import DarbouxError
from ..formatters import get_formatter
from ..models.config import OutputFormat


def init_command(
    path: Annotated[
        Optional[str],
        typer.Argument(help="Directory to initialize (default: current directory)"),
    ] = ".",
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    retry_bound: Annotated[
        int, typer.Option("--retry-bound", help="Shrink-and-retry limit")
    ] = 4,
    log_level: Annotated[
        str, typer.Option("--log-level", help="Default log level")
    ] = "WARNING",
    output_format: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="Default output format")
    ] = OutputFormat.JSON,
    residual_fraction: Annotated[
        str,
        typer.Option("--residual-fraction", help="Accepted uncovered share"),
    ] = "1/20",
    force: Annotated[
        bool, typer.Option("--force", help="Overwrite an existing configuration")
    ] = False,
) -> None:
    """Create .darboux/config.json in the given directory."""
    formatter = get_formatter()

    root = Path(path or ".").resolve()
    if not root.is_dir():
        formatter.print_error(f"Directory does not exist: {root}")
        raise typer.Exit(1) from None

    config_file = root / RunContext.DARBOUX_DIR / RunContext.CONFIG_FILE
    if config_file.exists() and not force:
        formatter.print_error(f"darboux already initialized in: {root}")
        raise typer.Exit(1) from None

    try:
        config = RunContext.resolve(
            root,
            seed=seed,
            retry_bound=retry_bound,
            log_level=log_level,
            format=output_format,
            residual_fraction=residual_fraction,
        )
        written = RunContext.save_config(config, root)
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    formatter.print_success(f"Wrote {written}")
