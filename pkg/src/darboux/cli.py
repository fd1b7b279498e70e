"""Main CLI application for darboux."""

from typing import Optional

import typer
from rich.console import Console

from . import __app_name__, __version__
from .commands import (
    catalog_command,
    cover_command,
    displace_command,
    init_command,
    invariants_command,
    translate_command,
    transport_command,
)
from .context import RunContext
from .errors import DarbouxError
from .formatters import get_formatter
from .log import configure_logging

app = typer.Typer(
    name="darboux",
    help="Exact tools for minimal Darboux-chart atlases of symplectic manifolds",
    add_completion=False,
    rich_markup_mode="rich",
    no_args_is_help=True,
)

console = Console(stderr=True)


def version_callback(value: bool) -> None:
    """Print version information and exit."""
    if value:
        console.print(
            f"[bold cyan]{__app_name__}[/bold cyan] [green]v{__version__}[/green]"
        )
        raise typer.Exit()


@app.callback()  # type: ignore[misc]
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version information",
    ),
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Shorthand for INFO"),
) -> None:
    """Exact tools for minimal Darboux-chart atlases of symplectic manifolds."""
    if log_level is None and verbose:
        log_level = "INFO"
    try:
        config = RunContext.resolve(log_level=log_level)
    except DarbouxError as e:
        get_formatter().print_error(str(e))
        raise typer.Exit(e.exit_code) from None
    configure_logging(config.log_level)


app.command(name="init", help="Write a run configuration")(init_command)
app.command(name="cover", help="Verify the lattice dimension cover")(cover_command)
app.command(name="transport", help="Plan and check colour-class transports")(
    transport_command
)
app.command(name="displace", help="Check the displacement gadget")(displace_command)
app.command(name="translate", help="Check the Hamiltonian translation")(
    translate_command
)
app.command(name="invariants", help="Covering numbers of a manifold")(
    invariants_command
)
app.command(name="catalog", help="Covering numbers of named families")(
    catalog_command
)


if __name__ == "__main__":
    app()
