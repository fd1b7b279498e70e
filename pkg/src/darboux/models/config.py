"""Run configuration read from .darboux/config.json."""

from enum import Enum
from fractions import Fraction

from pydantic import Field, field_serializer, field_validator

from ..log import LEVELS
from .common import DarbouxModel, Rat


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    SVG = "svg"


class RunConfig(DarbouxModel):
    """Settings shared by every command; CLI flags override them."""

    seed: int = 0
    retry_bound: int = Field(default=4, ge=0)
    log_level: str = "WARNING"
    format: OutputFormat = OutputFormat.JSON  # noqa: A003
    translate_tolerance: float = Field(default=1e-6, gt=0)
    jacobian_tolerance: float = Field(default=1e-3, gt=0)
    residual_fraction: Rat = Fraction(1, 20)

    @field_validator("log_level")  # type: ignore[misc]
    @classmethod
    def check_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level

    @field_validator("residual_fraction")  # type: ignore[misc]
    @classmethod
    def check_fraction(cls, value: Fraction) -> Fraction:
        if not 0 < value <= 1:
            raise ValueError("residual fraction must lie in (0, 1]")
        return value

    @field_serializer("format")  # type: ignore[misc]
    def serialize_format(self, value: OutputFormat) -> str:
        return value.value
