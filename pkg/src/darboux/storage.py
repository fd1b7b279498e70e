"""File persistence for scenarios, plans and reports."""

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from .errors import ParameterError
from .models.plan import TransportPlan, TransportResult
from .models.reports import FigureRow
from .models.scenario import ScenarioSpec
from .utils import format_rat

M = TypeVar("M", bound=BaseModel)


def to_json(model: BaseModel) -> str:
    """Deterministic JSON text of a model, ending in a newline."""
    return model.model_dump_json(indent=2) + "\n"


def write_text(path: Path, text: str) -> None:
    """Write through a temporary file so readers never see a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(path.suffix + ".tmp")
    try:
        temp_file.write_text(text, encoding="utf-8")
        temp_file.replace(path)
    except OSError as e:
        if temp_file.exists():
            temp_file.unlink()
        raise ParameterError(f"cannot write {path}: {e}") from e


def save_model(model: BaseModel, path: Path) -> None:
    write_text(path, to_json(model))


def _read_json(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParameterError(f"file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path} is not valid JSON: {e}") from None


def load_model(cls: type[M], path: Path) -> M:
    """
    Load and validate a model from a JSON file.

    Raises:
        ParameterError: If the file is missing, not JSON, or fails validation
    """
    data = _read_json(path)
    try:
        return cls.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "file"
        raise ParameterError(f"{path}: {where}: {first['msg']}") from None


def load_scenario(path: Path) -> ScenarioSpec:
    return load_model(ScenarioSpec, path)


def load_plans(path: Path) -> list[TransportPlan]:
    """Plans from a single plan file or from a transport result file."""
    data = _read_json(path)
    if isinstance(data, dict) and "runs" in data:
        result = load_model(TransportResult, path)
        return [run.plan for run in result.runs if run.plan is not None]
    return [load_model(TransportPlan, path)]


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def figure_csv(rows: Sequence[FigureRow]) -> str:
    return csv_text(
        ("ratio", "sb_min", "sb_max", "exact_flag"),
        (
            (format_rat(r.ratio), r.sb_min, r.sb_max, str(r.exact_flag).lower())
            for r in rows
        ),
    )


def trajectory_csv(rows: Sequence[tuple[int, int, list[float]]]) -> str:
    """Rows (sample, step, coordinates) with floats in repr form."""
    dim = len(rows[0][2]) if rows else 2
    header = ["sample", "step"] + [f"z{m}" for m in range(dim)]
    return csv_text(
        header,
        ([sample, step] + [repr(float(v)) for v in z] for sample, step, z in rows),
    )
