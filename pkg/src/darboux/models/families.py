"""Manifold family specifications for the catalog."""

from typing import Annotated, Literal, Union

from pydantic import Field, model_validator

from .common import DarbouxModel, Rat


class Surface(DarbouxModel):
    """Closed orientable surface of genus g and area a."""

    family: Literal["surface"] = "surface"
    g: int = Field(ge=0)
    a: Rat

    @model_validator(mode="after")  # type: ignore[misc]
    def check_area(self) -> "Surface":
        if self.a <= 0:
            raise ValueError("area must be positive")
        return self


class _Bundle(DarbouxModel):
    g: int = Field(ge=0)
    a: Rat
    b: Rat

    @model_validator(mode="after")  # type: ignore[misc]
    def check_areas(self) -> "_Bundle":
        if self.a <= 0 or self.b <= 0:
            raise ValueError("areas must be positive")
        return self


class TrivialBundle(_Bundle):
    """Σ_g × S² with the split form of areas a (base) and b (fibre)."""

    family: Literal["trivial"] = "trivial"


class NontrivialBundle(_Bundle):
    """The nontrivial S²-bundle over Σ_g with the form ω_ab."""

    family: Literal["nontrivial"] = "nontrivial"

    @model_validator(mode="after")  # type: ignore[misc]
    def check_positivity(self) -> "NontrivialBundle":
        if self.g == 0 and not self.a > self.b / 2:
            raise ValueError("the nontrivial bundle over S² needs a > b/2")
        return self


class ProductSurfaces(DarbouxModel):
    """Σ_g(a) × Σ_h(b) with g, h >= 1."""

    family: Literal["product"] = "product"
    g: int = Field(ge=1)
    h: int = Field(ge=1)
    a: Rat
    b: Rat

    @model_validator(mode="after")  # type: ignore[misc]
    def check_areas(self) -> "ProductSurfaces":
        if self.a <= 0 or self.b <= 0:
            raise ValueError("areas must be positive")
        return self


class ProjectiveSpace(DarbouxModel):
    """CP^n with the Fubini-Study form normalized to width 1."""

    family: Literal["cpn"] = "cpn"
    n: int = Field(ge=1)


class Grassmannian(DarbouxModel):
    """G_{k,n} of k-planes in C^n, normalized to 1 <= k <= n/2."""

    family: Literal["grassmannian"] = "grassmannian"
    k: int = Field(ge=1)
    n: int = Field(ge=2)

    @model_validator(mode="after")  # type: ignore[misc]
    def check_normalized(self) -> "Grassmannian":
        if self.k > self.n // 2:
            raise ValueError(f"k must be at most n/2 = {self.n // 2}")
        return self


FamilySpec = Annotated[
    Union[
        Surface,
        TrivialBundle,
        NontrivialBundle,
        ProductSurfaces,
        ProjectiveSpace,
        Grassmannian,
    ],
    Field(discriminator="family"),
]

FIGURE_FAMILIES = (
    "trivial-g0",
    "trivial-g1",
    "nontrivial-g0",
    "nontrivial-g1",
    "product",
)
