"""Displace command: exact checks of the displacement gadget."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from ..context import RunContext
from ..errors import DarbouxError
from ..formatters import get_formatter
from ..models.reports import DisplaceableCoverReport
from ..models.scenario import BoxModel
from ..services.displacement import (
    COVER_GADGET,
    build_displacement,
    displaceable_cover_scenario,
)
from ..storage import to_json
from ..utils import format_rat, parse_rat

_K, _D, _DELTA, _NU = COVER_GADGET


def displace_command(
    k: Annotated[int, typer.Option("--k", help="Corridor gaps (k+1 columns)")] = _K,
    d: Annotated[str, typer.Option("--d", help="Column width")] = format_rat(_D),
    delta: Annotated[
        str, typer.Option("--delta", help="Corridor half-height")
    ] = format_rat(_DELTA),
    nu: Annotated[str, typer.Option("--nu", help="Erosion radius of U")] = format_rat(
        _NU
    ),
    target_fraction: Annotated[
        str, typer.Option("--target-fraction", help="Share of the model area")
    ] = "49/100",
    epsilon: Annotated[str, typer.Option("--epsilon", help="Area slack")] = "1/100",
    cover: Annotated[
        bool,
        typer.Option("--cover", help="Pack 2n+1 colour classes into U and check"),
    ] = False,
    retry_bound: Annotated[
        Optional[int], typer.Option("--retry-bound", help="Shrink-and-retry limit")
    ] = None,
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the report here")
    ] = None,
) -> None:
    """Check that the gadget's shear displaces U and keeps its area."""
    formatter = get_formatter()

    try:
        if cover:
            config = RunContext.resolve(retry_bound=retry_bound)
            packed = displaceable_cover_scenario(
                target_fraction, epsilon=epsilon, retry_bound=config.retry_bound
            )
            cover_report = DisplaceableCoverReport(
                gadget=packed.report,
                scenario=packed.scenario,
                result=packed.result,
                regions={
                    j: [BoxModel.from_box(c) for c in region]
                    for j, region in packed.regions.items()
                },
                displaced=packed.displaced,
                passed=packed.ok,
            )
            formatter.emit(to_json(cover_report), output)
            passed = cover_report.passed
        else:
            _, report = build_displacement(
                k,
                parse_rat(d),
                parse_rat(delta),
                parse_rat(nu),
                target_fraction=parse_rat(target_fraction),
                epsilon=parse_rat(epsilon),
            )
            formatter.emit(to_json(report), output)
            if output is not None:
                formatter.print_info(formatter.format_displacement_summary(report))
            passed = report.shear_ok and report.displaced and report.area_ok
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    if not passed:
        formatter.print_error("the gadget does not displace U")
        raise typer.Exit(1)
