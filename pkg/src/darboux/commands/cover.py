"""Cover command: exact checks of the lattice dimension cover."""

from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Optional

import typer

from ..errors import DarbouxError
from ..formatters import get_formatter
from ..geometry import Box
from ..models.reports import CoverCheckReport
from ..services.lattice_cover import (
    DimensionCover,
    build_cover,
    default_cylinder_window,
    default_window,
    verify_covering_and_disjointness,
    verify_cylinder_law,
    verify_gap,
)
from ..storage import to_json
from ..utils import parse_rat


class CoverCheck(str, Enum):
    GAP = "gap"
    COVER = "cover"
    CYLINDER = "cylinder"


def _window(cover: DimensionCover, scale: Fraction, side: Optional[str]) -> Box:
    if side is None:
        return default_window(cover, scale)
    return Box.from_bounds([(0, parse_rat(side))] * cover.dim)


def run_cover_check(
    cover: DimensionCover,
    check: CoverCheck,
    scale: Fraction,
    color: int,
    axis: int,
    side: Optional[str] = None,
) -> CoverCheckReport:
    """Run one check and package its outcome."""

    def report(window: Box, passed: bool, **fields: Any) -> CoverCheckReport:
        return CoverCheckReport(
            n=cover.n,
            k=cover.k,
            check=check.value,
            delta=cover.delta,
            scale=scale,
            window=[list(window.lo), list(window.hi)],
            passed=passed,
            **fields,
        )

    if check == CoverCheck.GAP:
        window = _window(cover, scale, side)
        gap = verify_gap(cover, color, window, scale)
        return report(
            window,
            gap.passed,
            color=color,
            min_gap=gap.min_gap,
            min_gap_sq=gap.min_gap_sq,
            cube_count=gap.cube_count,
        )
    if check == CoverCheck.COVER:
        window = _window(cover, scale, side)
        coverage = verify_covering_and_disjointness(cover, window, scale)
        return report(
            window,
            coverage.covered and coverage.interior_overlap_pairs == 0,
            cube_count=coverage.cube_count,
            covered=coverage.covered,
            remainder_area=coverage.remainder_area,
            overlaps=coverage.interior_overlap_pairs,
        )
    base = cover.cube(color, (0,) * cover.dim, scale)
    reach = parse_rat(side) if side is not None else None
    window = default_cylinder_window(cover, base, axis, reach=reach)
    cylinder = verify_cylinder_law(cover, color, base, axis, window)
    return report(
        window,
        cylinder.passed,
        color=color,
        axis=axis,
        period=cylinder.period,
        unexpected=[list(i) for i in cylinder.unexpected],
        missing=[list(i) for i in cylinder.missing],
    )


def cover_command(
    k: Annotated[int, typer.Option("--k", help="Number of colours (>= 2n+1)")],
    n: Annotated[int, typer.Option("--n", help="Half dimension")] = 1,
    check: Annotated[
        CoverCheck, typer.Option("--check", help="gap, cover or cylinder")
    ] = CoverCheck.GAP,
    color: Annotated[int, typer.Option("--color", "-c", help="Colour to check")] = 1,
    axis: Annotated[
        int, typer.Option("--axis", help="Axis of the cylinder check (1-based)")
    ] = 1,
    scale: Annotated[str, typer.Option("--scale", help="Cube side d")] = "1",
    window: Annotated[
        Optional[str],
        typer.Option(
            "--window",
            help="Side w of the window [0, w]^{2n}; for cylinder, its reach",
        ),
    ] = None,
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the report here")
    ] = None,
) -> None:
    """Verify gap, covering and cylinder laws of the dimension cover exactly."""
    formatter = get_formatter()

    try:
        cover = build_cover(n, k)
        report = run_cover_check(cover, check, parse_rat(scale), color, axis, window)
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    formatter.emit(to_json(report), output)
    if not report.passed:
        formatter.print_error(f"{check.value} check failed")
        raise typer.Exit(1)
