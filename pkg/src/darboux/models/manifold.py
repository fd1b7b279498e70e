"""Manifold descriptors and covering-number results."""

from enum import Enum
from typing import Optional

from pydantic import Field, field_serializer, model_validator

from .common import DarbouxModel, IntInterval, Rat, RatInterval


class ManifoldDescriptor(DarbouxModel):
    """Everything the covering-number calculus needs to know about (M, ω)."""

    name: str = ""
    half_dim: int = Field(ge=1)
    volume: Rat
    gromov_width: RatInterval
    b_of_m: Optional[IntInterval] = None
    cat: Optional[IntInterval] = None
    cup_length: Optional[IntInterval] = None
    simply_connected: bool = False
    omega_aspherical: bool = False
    ball_cover_upper: Optional[int] = None
    gamma_cited: Optional[int] = None
    citations: dict[str, str] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

    @model_validator(mode="after")  # type: ignore[misc]
    def check_consistency(self) -> "ManifoldDescriptor":
        n = self.half_dim
        top = 2 * n + 1
        if self.volume <= 0:
            raise ValueError("volume must be positive")
        if self.gromov_width.lo <= 0:
            raise ValueError("Gromov width lower bound must be positive")
        if self.simply_connected and self.omega_aspherical:
            raise ValueError("a closed symplectic manifold cannot be both")
        if self.cup_length is not None and self.cup_length.hi < n:
            raise ValueError(f"cup-length is at least {n} in dimension {2 * n}")
        if self.cat is not None:
            if self.cat.hi < n + 1 or self.cat.lo > top:
                raise ValueError(f"category must meet [{n + 1}, {top}]")
            if self.cup_length is not None and self.cup_length.lo + 1 > self.cat.hi:
                raise ValueError("cup-length + 1 exceeds the category")
        if self.b_of_m is not None:
            if self.b_of_m.hi < n + 1 or self.b_of_m.lo > top:
                raise ValueError(f"B(M) must meet [{n + 1}, {top}]")
            if self.cat is not None and self.cat.lo > self.b_of_m.hi:
                raise ValueError("category exceeds B(M)")
        if self.ball_cover_upper is not None and self.ball_cover_upper < n + 1:
            raise ValueError("a ball cover needs at least n + 1 balls")
        if self.gamma_cited is not None and self.gamma_cited < 1:
            raise ValueError("Γ is at least 1")
        return self


class SBKind(str, Enum):
    """Shape of a covering-number answer."""

    EXACT = "exact"
    RANGE = "range"
    SET = "set"


class SBResult(DarbouxModel):
    """The value, range, or finite set of possible values of S_B."""

    kind: SBKind
    lo: int
    hi: int
    members: list[int]
    provenance: list[str] = Field(default_factory=list)

    @classmethod
    def from_members(cls, members: list[int], provenance: list[str]) -> "SBResult":
        values = sorted(set(members))
        if not values:
            raise ValueError("empty covering-number result")
        if len(values) == 1:
            kind = SBKind.EXACT
        elif values == list(range(values[0], values[-1] + 1)):
            kind = SBKind.RANGE
        else:
            kind = SBKind.SET
        return cls(
            kind=kind,
            lo=values[0],
            hi=values[-1],
            members=values,
            provenance=list(provenance),
        )

    @property
    def is_exact(self) -> bool:
        return self.kind == SBKind.EXACT

    @property
    def value(self) -> Optional[int]:
        return self.lo if self.is_exact else None

    @field_serializer("kind")  # type: ignore[misc]
    def serialize_kind(self, value: SBKind) -> str:
        return value.value

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return "{" + ", ".join(str(m) for m in self.members) + "}"


class CategoryBounds(DarbouxModel):
    """Bounds on (cat M, B(M)) with the admissible-pair rule."""

    half_dim: int
    cat: IntInterval
    b_of_m: IntInterval
    rule: str

    def admissible(self, cat: int, b: int) -> bool:
        """cat <= B <= 2n+1, and B > cat only for (n+1, n+2)."""
        n = self.half_dim
        if not (self.cat.contains(cat) and self.b_of_m.contains(b)):
            return False
        if b < cat or b > 2 * n + 1:
            return False
        return b == cat or (cat, b) == (n + 1, n + 2)

    def admissible_pairs(self) -> list[tuple[int, int]]:
        return [
            (c, b)
            for c in self.cat.members
            for b in self.b_of_m.members
            if self.admissible(c, b)
        ]


class SinghofResult(DarbouxModel):
    threshold: Rat
    exact: Optional[int] = None
    upper: int


class ChainLink(DarbouxModel):
    name: str
    bounds: IntInterval


class InvariantsReport(DarbouxModel):
    """Output of the full covering-number pipeline for one descriptor."""

    name: str
    half_dim: int
    gamma: RatInterval
    big_gamma: IntInterval
    category: CategoryBounds
    lambda_value: IntInterval
    sb: SBResult
    equal_ball: str
    colours: Optional[int] = None
    chain: list[ChainLink] = Field(default_factory=list)
    provenance: list[str] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)


class CatalogEntry(DarbouxModel):
    """A catalog family instance, its descriptor and its covering number."""

    descriptor: ManifoldDescriptor
    sb: SBResult
