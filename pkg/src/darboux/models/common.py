"""Shared pydantic building blocks."""

from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    PlainSerializer,
    model_validator,
)

from ..utils import format_rat, parse_rat


def _to_rat(value: Any) -> Fraction:
    return parse_rat(value)


# Rationals travel as "p/q" strings in JSON and as Fractions in Python.
Rat = Annotated[
    Fraction,
    BeforeValidator(_to_rat),
    PlainSerializer(format_rat, return_type=str, when_used="json"),
]


class DarbouxModel(BaseModel):
    """Base model: Fractions allowed, unknown keys rejected."""

    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")


class IntInterval(DarbouxModel):
    """Closed integer interval [lo, hi]."""

    lo: int
    hi: int

    @model_validator(mode="after")  # type: ignore[misc]
    def check_order(self) -> "IntInterval":
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def exact(cls, value: int) -> "IntInterval":
        return cls(lo=value, hi=value)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def members(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def intersect(self, other: "IntInterval") -> Optional["IntInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return IntInterval(lo=lo, hi=hi) if lo <= hi else None

    def __str__(self) -> str:
        return str(self.lo) if self.is_exact else f"[{self.lo}, {self.hi}]"


class RatInterval(DarbouxModel):
    """Rational interval [lo, hi]; hi = None stands for +infinity."""

    lo: Rat
    hi: Optional[Rat] = None

    @model_validator(mode="after")  # type: ignore[misc]
    def check_order(self) -> "RatInterval":
        if self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def exact(cls, value: Fraction) -> "RatInterval":
        return cls(lo=value, hi=value)

    @property
    def is_exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi
