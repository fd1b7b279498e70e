"""Catalog of manifold families with their covering numbers."""

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Optional

import numpy as np
from pydantic import TypeAdapter

from ..errors import ParameterError
from ..log import get_logger
from ..models.common import IntInterval, RatInterval
from ..models.families import (
    FamilySpec,
    Grassmannian,
    NontrivialBundle,
    ProductSurfaces,
    ProjectiveSpace,
    Surface,
    TrivialBundle,
)
from ..models.manifold import ManifoldDescriptor, SBResult
from ..models.reports import ChartCoverReport, FigureRow
from ..utils import sqrt_lower, sqrt_upper
from .invariants import evaluate

logger = get_logger(__name__)

NO_SHARPER_BOUND = "no sharper literature bound"

CITE_GREENE_SHIOHAMA = "area-preserving discs fill a surface up to measure zero"
CITE_NONSQUEEZING = "nonsqueezing: width <= area of the sphere factor"
CITE_BIRAN = "Biran: Γ = floor(max(1, 2a/b)) + 1 for ruled surfaces"
CITE_DISC_PRODUCT = "product of discs: width >= min(a, b)"
CITE_TORUS = "torus factor: Gr(Σ_1(1) × Σ_g(d)) >= (sqrt(4d+1) - 1)/2"
CITE_CPN_CHARTS = "n+1 affine charts, each the image of a ball of width 1"
CITE_TAUBES = "Taubes: CP² carries a unique symplectic form up to scaling"
CITE_GRASSMANN_WIDTH = "Gr(G_{k,n}) = 1 for the Plücker-normalized form"
CITE_GRASSMANN_CHARTS = "C(n,k) Schubert charts, each a ball image"
CITE_ASYMPTOTIC = (
    "products with large a/b admit covers growing like (a/b)/log²(a/b) "
    "with an unspecified constant"
)

_SPEC_ADAPTER: TypeAdapter[FamilySpec] = TypeAdapter(FamilySpec)


def parse_family(data: dict[str, object]) -> FamilySpec:
    """Validate a family specification from plain data."""
    return _SPEC_ADAPTER.validate_python(data)


def plucker_degree(k: int, n: int) -> int:
    """
    Degree p_{k,n} of the Plücker embedding of G_{k,n}.

    p = (k-1)! ... 1! (k(n-k))! / ((n-1)! ... (n-k)!)

    Raises:
        ParameterError: If k is outside 1..n/2
        RuntimeError: If the quotient is not an integer
    """
    if not 1 <= k <= n // 2:
        raise ParameterError(f"need 1 <= k <= n/2, got k={k}, n={n}")
    numerator = math.factorial(k * (n - k))
    for i in range(1, k):
        numerator *= math.factorial(i)
    denominator = 1
    for i in range(n - k, n):
        denominator *= math.factorial(i)
    value = Fraction(numerator, denominator)
    if value.denominator != 1:
        raise RuntimeError(f"Plücker degree for ({k}, {n}) is not an integer")
    return int(value)


def _width_from_cited_gamma(volume: Fraction, big: int) -> RatInterval:
    # Γ = G in real dimension 4 pins width² to (2V/G, 2V/(G-1)].
    lo = sqrt_lower(2 * volume / big)
    hi = sqrt_upper(2 * volume / (big - 1)) if big > 1 else None
    return RatInterval(lo=lo, hi=hi)


def _torus_bound(torus_area: Fraction, other_area: Fraction) -> Fraction:
    d = other_area / torus_area
    return torus_area * (sqrt_lower(4 * d + 1) - 1) / 2


def _describe_surface(spec: Surface) -> ManifoldDescriptor:
    sphere = spec.g == 0
    return ManifoldDescriptor(
        name=f"Σ_{spec.g}({spec.a})",
        half_dim=1,
        volume=spec.a,
        gromov_width=RatInterval.exact(spec.a),
        cup_length=IntInterval.exact(1 if sphere else 2),
        simply_connected=sphere,
        omega_aspherical=not sphere,
        ball_cover_upper=2 if sphere else 3,
        citations={
            "gromov_width": CITE_GREENE_SHIOHAMA,
            "ball_cover_upper": "smooth disc covers are realized by symplectic discs",
        },
    )


def _describe_trivial(spec: TrivialBundle) -> ManifoldDescriptor:
    a, b = spec.a, spec.b
    if spec.g == 0:
        return ManifoldDescriptor(
            name=f"S²({a}) × S²({b})",
            half_dim=2,
            volume=a * b,
            gromov_width=RatInterval.exact(min(a, b)),
            cup_length=IntInterval.exact(2),
            simply_connected=True,
            citations={"gromov_width": f"{CITE_NONSQUEEZING}; {CITE_DISC_PRODUCT}"},
        )
    big = math.floor(max(Fraction(1), 2 * a / b)) + 1
    return ManifoldDescriptor(
        name=f"Σ_{spec.g}({a}) × S²({b})",
        half_dim=2,
        volume=a * b,
        gromov_width=RatInterval(lo=min(a, b), hi=b),
        cup_length=IntInterval.exact(3),
        cat=IntInterval.exact(4),
        gamma_cited=big,
        citations={
            "gromov_width": f"{CITE_NONSQUEEZING}; {CITE_DISC_PRODUCT}",
            "gamma": CITE_BIRAN,
            "cat": "the bundle has a section; cat <= 4",
        },
    )


def _describe_nontrivial(spec: NontrivialBundle) -> ManifoldDescriptor:
    a, b = spec.a, spec.b
    volume = a * b
    sphere = spec.g == 0
    if sphere:
        big = math.floor(2 * a / b) + 1
    else:
        big = math.floor(max(Fraction(1), 2 * a / b)) + 1
    notes = []
    if 2 * a >= b and math.floor(volume / (b * b / 2)) + 1 == big:
        notes.append("volume ab agrees with the cited Γ at width b")
    return ManifoldDescriptor(
        name=f"Σ_{spec.g}({a}) ⋉ S²({b})",
        half_dim=2,
        volume=volume,
        gromov_width=_width_from_cited_gamma(volume, big),
        cup_length=IntInterval.exact(2 if sphere else 3),
        cat=None if sphere else IntInterval.exact(4),
        simply_connected=sphere,
        gamma_cited=big,
        citations={
            "gamma": CITE_BIRAN,
            "gromov_width": "bracket derived backward from the cited Γ",
        },
        notes=notes,
    )


def _describe_product(spec: ProductSurfaces) -> ManifoldDescriptor:
    a, b = spec.a, spec.b
    lower = min(a, b)
    sources = [CITE_DISC_PRODUCT]
    if spec.g == 1:
        lower = max(lower, _torus_bound(a, b))
        sources.append(CITE_TORUS)
    if spec.h == 1:
        lower = max(lower, _torus_bound(b, a))
        sources.append(CITE_TORUS)
    return ManifoldDescriptor(
        name=f"Σ_{spec.g}({a}) × Σ_{spec.h}({b})",
        half_dim=2,
        volume=a * b,
        gromov_width=RatInterval(lo=lower),
        cup_length=IntInterval.exact(4),
        omega_aspherical=True,
        citations={"gromov_width": "; ".join(dict.fromkeys(sources))},
        notes=[CITE_ASYMPTOTIC],
    )


def _describe_cpn(spec: ProjectiveSpace) -> ManifoldDescriptor:
    n = spec.n
    notes = [CITE_TAUBES] if n == 2 else []
    return ManifoldDescriptor(
        name=f"CP^{n}",
        half_dim=n,
        volume=Fraction(1, math.factorial(n)),
        gromov_width=RatInterval.exact(Fraction(1)),
        cup_length=IntInterval.exact(n),
        simply_connected=True,
        ball_cover_upper=n + 1,
        citations={"ball_cover_upper": CITE_CPN_CHARTS},
        notes=notes,
    )


def _describe_grassmannian(spec: Grassmannian) -> ManifoldDescriptor:
    dim = spec.k * (spec.n - spec.k)
    degree = plucker_degree(spec.k, spec.n)
    charts = math.comb(spec.n, spec.k)
    citations = {
        "volume": f"Plücker degree p = {degree} over ({dim})!",
        "gromov_width": CITE_GRASSMANN_WIDTH,
    }
    notes = []
    # Width-1 balls hold 1/dim! each, so fewer than p+1 of them cannot cover.
    if charts > degree:
        citations["ball_cover_upper"] = CITE_GRASSMANN_CHARTS
    else:
        notes.append(f"{charts} Schubert charts fall below Γ = {degree + 1}; unused")
    return ManifoldDescriptor(
        name=f"G_{{{spec.k},{spec.n}}}",
        half_dim=dim,
        volume=Fraction(degree, math.factorial(dim)),
        gromov_width=RatInterval.exact(Fraction(1)),
        cup_length=IntInterval.exact(dim),
        simply_connected=True,
        ball_cover_upper=charts if charts > degree else None,
        citations=citations,
        notes=notes,
    )


def describe(spec: FamilySpec) -> ManifoldDescriptor:
    """Build the descriptor of a catalog family."""
    if isinstance(spec, Surface):
        return _describe_surface(spec)
    if isinstance(spec, TrivialBundle):
        return _describe_trivial(spec)
    if isinstance(spec, NontrivialBundle):
        return _describe_nontrivial(spec)
    if isinstance(spec, ProductSurfaces):
        return _describe_product(spec)
    if isinstance(spec, ProjectiveSpace):
        return _describe_cpn(spec)
    if isinstance(spec, Grassmannian):
        return _describe_grassmannian(spec)
    raise ParameterError(f"unknown family {spec!r}")


def sb_of(spec: FamilySpec) -> SBResult:
    """S_B of a catalog family, derived through the invariants pipeline."""
    result = evaluate(describe(spec)).sb
    if not result.is_exact and isinstance(spec, ProductSurfaces):
        result.provenance.append(NO_SHARPER_BOUND)
    return result


def figure_spec(family: str, ratio: Fraction) -> FamilySpec:
    """Family instance with a/b = ratio and b = 1 for a figure column."""
    if ratio <= 0:
        raise ParameterError(f"ratios must be positive, got {ratio}")
    if family == "trivial-g0":
        return TrivialBundle(g=0, a=ratio, b=1)
    if family == "trivial-g1":
        return TrivialBundle(g=1, a=ratio, b=1)
    if family == "nontrivial-g0":
        if ratio <= Fraction(1, 2):
            raise ParameterError("the nontrivial bundle over S² needs a/b > 1/2")
        return NontrivialBundle(g=0, a=ratio, b=1)
    if family == "nontrivial-g1":
        return NontrivialBundle(g=1, a=ratio, b=1)
    if family == "product":
        return ProductSurfaces(g=1, h=2, a=ratio, b=1)
    raise ParameterError(f"unknown figure family {family!r}")


def figure_table(family: str, ratios: Sequence[Fraction]) -> list[FigureRow]:
    """Step function a/b -> S_B for one family, one row per ratio."""
    rows = []
    for ratio in ratios:
        result = sb_of(figure_spec(family, Fraction(ratio)))
        rows.append(
            FigureRow(
                ratio=Fraction(ratio),
                sb_min=result.lo,
                sb_max=result.hi,
                exact_flag=result.is_exact,
            )
        )
    return rows


def cpn_chart_index(vector: Sequence[complex]) -> int:
    """
    Index of the affine chart of CP^n used for a homogeneous vector.

    The chart of the largest coordinate is chosen; there |u_i| / |u| is at
    least 1/sqrt(n+1).

    Raises:
        ParameterError: For the zero vector
    """
    values = np.abs(np.asarray(vector, dtype=complex))
    if values.size < 2:
        raise ParameterError("homogeneous coordinates need at least two entries")
    if not np.any(values > 0):
        raise ParameterError("the zero vector is not a projective point")
    return int(np.argmax(values))


def cpn_chart_cover_check(
    n: int, samples: int, seed: int = 0, vectors: Optional[np.ndarray] = None
) -> ChartCoverReport:
    """
    Check that the n+1 standard charts cover sampled points of CP^n.

    Args:
        n: Complex dimension
        samples: Number of random homogeneous vectors
        seed: Seed of the random generator
        vectors: Explicit vectors to check instead of random ones

    Returns:
        Report with the worst ratio max_i |u_i| / |u| seen
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    if samples < 1:
        raise ParameterError(f"samples must be positive, got {samples}")
    if vectors is None:
        rng = np.random.default_rng(seed)
        vectors = rng.standard_normal((samples, n + 1)) + 1j * rng.standard_normal(
            (samples, n + 1)
        )
    worst = 1.0
    used: set[int] = set()
    for vector in vectors:
        index = cpn_chart_index(vector)
        used.add(index)
        magnitudes = np.abs(vector)
        ratio = float(magnitudes[index] / np.linalg.norm(magnitudes))
        worst = min(worst, ratio)
    bound = 1 / math.sqrt(n + 1)
    passed = worst >= bound * (1 - 1e-12)
    logger.info("CP^%d chart check: worst ratio %.6f (bound %.6f)", n, worst, bound)
    return ChartCoverReport(
        n=n,
        charts=n + 1,
        samples=len(vectors),
        charts_hit=len(used),
        worst_ratio=worst,
        bound=bound,
        passed=passed,
    )
