"""Rich output formatters for darboux."""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from .models.manifold import InvariantsReport
from .models.plan import TransportResult
from .models.reports import DisplacementReport, FigureRow
from .storage import write_text
from .utils import format_rat


class ReportFormatter:
    """
    Human-facing output on stderr; report payloads on stdout or in files.

    Keeping the two streams apart leaves stdout byte-identical between runs.
    """

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console(stderr=True)

    def emit(self, payload: str, output: Optional[Path] = None) -> None:
        """Write a payload to `output`, or to stdout when none is given."""
        if output is None:
            typer.echo(payload, nl=False)
            return
        write_text(output, payload)
        self.print_success(f"Wrote {output}")

    def format_transport_table(self, result: TransportResult) -> Table:
        table = Table(title=f"Transport: {result.scenario}")
        table.add_column("Colour", style="bold", justify="right")
        table.add_column("Attempts", justify="right")
        table.add_column("Moves", justify="right")
        table.add_column("Pieces", justify="right")
        table.add_column("Valid")
        table.add_column("Error", style="red")
        for run in result.runs:
            valid = run.report is not None and run.report.valid
            table.add_row(
                str(run.color),
                str(len(run.attempts)),
                str(len(run.plan.moves)) if run.plan else "-",
                str(len(run.plan.pieces)) if run.plan else "-",
                "[green]yes[/green]" if valid else "[red]no[/red]",
                run.error or "",
            )
        return table

    def format_figure_table(self, family: str, rows: list[FigureRow]) -> Table:
        table = Table(title=f"S_B step function: {family}")
        table.add_column("a/b", justify="right")
        table.add_column("S_B")
        for row in rows:
            value = str(row.sb_min)
            if not row.exact_flag:
                value = f"[{row.sb_min}, {row.sb_max}]"
            table.add_row(format_rat(row.ratio), value)
        return table

    def format_invariants_summary(self, report: InvariantsReport) -> str:
        return f"S_B = {report.sb} ({report.sb.kind.value})"

    def format_displacement_summary(self, report: DisplacementReport) -> str:
        parts = [
            f"|U| = {format_rat(report.area_u)}",
            f"displaced: {'yes' if report.displaced else 'no'}",
        ]
        if report.shear_failures:
            parts.append(f"{len(report.shear_failures)} shear failures")
        return ", ".join(parts)

    def print_success(self, message: str) -> None:
        """Print success message."""
        self.console.print(f"✅ {message}", style="bold green")

    def print_error(self, message: str) -> None:
        """Print error message."""
        self.console.print(f"❌ {message}", style="bold red")

    def print_warning(self, message: str) -> None:
        """Print warning message."""
        self.console.print(f"⚠️  {message}", style="bold yellow")

    def print_info(self, message: str) -> None:
        """Print info message."""
        self.console.print(f"ℹ️  {message}", style="bold blue")


_formatter: Optional[ReportFormatter] = None


def get_formatter() -> ReportFormatter:
    """Get global formatter instance."""
    global _formatter
    if _formatter is None:
        _formatter = ReportFormatter()
    return _formatter
