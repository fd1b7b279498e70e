"""Catalog command: covering numbers of the named manifold families."""

import json
from pathlib import Path
from typing import Annotated, Any, Optional

import typer
from pydantic import ValidationError

from ..context import RunContext
from ..errors import DarbouxError, ParameterError
from ..formatters import get_formatter
from ..models.families import FIGURE_FAMILIES, FamilySpec
from ..models.manifold import CatalogEntry
from ..services.catalog import (
    cpn_chart_cover_check,
    describe,
    figure_table,
    parse_family,
    sb_of,
)
from ..storage import figure_csv, to_json
from ..utils import parse_rat


def family_from_options(family: str, params: Optional[str], **flags: Any) -> FamilySpec:
    """Build a family spec from a JSON parameter object or individual flags."""
    data: dict[str, Any] = {"family": family}
    if params is not None:
        try:
            loaded = json.loads(params)
        except json.JSONDecodeError as e:
            raise ParameterError(f"--params is not valid JSON: {e}") from e
        if not isinstance(loaded, dict):
            raise ParameterError("--params must be a JSON object")
        data.update(loaded)
    data.update({key: value for key, value in flags.items() if value is not None})
    try:
        return parse_family(data)
    except ValidationError as e:
        raise ParameterError(f"invalid {family} parameters: {e}") from e


def catalog_command(
    family: Annotated[
        Optional[str],
        typer.Option(
            "--family",
            help="surface, trivial, nontrivial, product, cpn or grassmannian",
        ),
    ] = None,
    params: Annotated[
        Optional[str], typer.Option("--params", help="Family parameters as JSON")
    ] = None,
    n: Annotated[Optional[int], typer.Option("--n", help="Dimension index")] = None,
    k: Annotated[Optional[int], typer.Option("--k", help="Grassmannian rank")] = None,
    g: Annotated[Optional[int], typer.Option("--g", help="Base genus")] = None,
    h: Annotated[Optional[int], typer.Option("--h", help="Second genus")] = None,
    a: Annotated[Optional[str], typer.Option("--a", help="First area")] = None,
    b: Annotated[Optional[str], typer.Option("--b", help="Second area")] = None,
    figure: Annotated[
        Optional[str],
        typer.Option("--figure", help=f"Step function of {', '.join(FIGURE_FAMILIES)}"),
    ] = None,
    grid: Annotated[
        str, typer.Option("--grid", help="Comma separated ratios a/b")
    ] = "1/2,1,3/2,2,3,4",
    chart_check: Annotated[
        bool, typer.Option("--chart-check", help="Sample the affine charts of CP^n")
    ] = False,
    samples: Annotated[
        int, typer.Option("--samples", help="Points for --chart-check")
    ] = 1000,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Random seed")] = None,
    output: Annotated[
        Optional[Path], typer.Option("--output", "-o", help="Write the output here")
    ] = None,
) -> None:
    """Report S_B of a family, a figure table or the CP^n chart check."""
    formatter = get_formatter()
    chosen = [family is not None, figure is not None, chart_check]
    if sum(chosen) != 1:
        formatter.print_error("give exactly one of --family, --figure, --chart-check")
        raise typer.Exit(2)

    try:
        if figure is not None:
            ratios = [parse_rat(r) for r in grid.split(",") if r.strip()]
            if not ratios:
                raise ParameterError("--grid needs at least one ratio")
            rows = figure_table(figure, ratios)
            formatter.emit(figure_csv(rows), output)
            if output is not None:
                formatter.console.print(formatter.format_figure_table(figure, rows))
            return
        if chart_check:
            config = RunContext.resolve(seed=seed)
            report = cpn_chart_cover_check(n or 1, samples, config.seed)
            formatter.emit(to_json(report), output)
            if not report.passed:
                formatter.print_error("a sampled point fell outside every chart")
                raise typer.Exit(1)
            return
        assert family is not None
        spec = family_from_options(family, params, n=n, k=k, g=g, h=h, a=a, b=b)
        entry = CatalogEntry(descriptor=describe(spec), sb=sb_of(spec))
    except DarbouxError as e:
        formatter.print_error(str(e))
        raise typer.Exit(e.exit_code) from None

    formatter.emit(to_json(entry), output)
