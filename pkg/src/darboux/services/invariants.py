"""Covering-number calculus: γ, Γ, λ and the rules bounding S_B."""

import math
from fractions import Fraction
from typing import Optional

from ..errors import DescriptorError, ParameterError
from ..log import get_logger
from ..models.common import IntInterval, RatInterval
from ..models.manifold import (
    CategoryBounds,
    ChainLink,
    InvariantsReport,
    ManifoldDescriptor,
    SBResult,
    SinghofResult,
)

logger = get_logger(__name__)


def gamma_capacity(width: Fraction, n: int) -> Fraction:
    """Volume width^n / n! of the largest embedded ball."""
    width = Fraction(width)
    if width <= 0:
        raise ParameterError(f"width must be positive, got {width}")
    if n < 1:
        raise ParameterError(f"half dimension must be positive, got {n}")
    return width**n / math.factorial(n)


def big_gamma(volume: Fraction, width: Fraction, n: int) -> int:
    """Volume lower bound floor(volume / γ) + 1 on the number of balls."""
    volume = Fraction(volume)
    if volume <= 0:
        raise ParameterError(f"volume must be positive, got {volume}")
    return math.floor(volume / gamma_capacity(width, n)) + 1


def gamma_interval(volume: Fraction, width: RatInterval, n: int) -> IntInterval:
    """Γ when the width is only bracketed; an unbounded width gives lo = 1."""
    hi = big_gamma(volume, width.lo, n)
    lo = 1 if width.hi is None else big_gamma(volume, width.hi, n)
    return IntInterval(lo=lo, hi=hi)


def lambda_value(b_of_m: IntInterval, big: IntInterval) -> IntInterval:
    """Elementwise maximum of the B(M) and Γ intervals."""
    return IntInterval(lo=max(b_of_m.lo, big.lo), hi=max(b_of_m.hi, big.hi))


def sb_from_lambda(lam: IntInterval, n: int, upper: Optional[int] = None) -> SBResult:
    """
    Turn λ into a statement about S_B.

    S_B = λ once λ >= 2n+1; below that only n+1 <= λ <= S_B <= 2n+1 holds.
    An explicit ball cover with `upper` balls caps the answer.

    Raises:
        DescriptorError: If λ is below n+1 or the cap is below the lower bound
    """
    top = 2 * n + 1
    if lam.lo < n + 1:
        raise DescriptorError(f"inconsistent descriptor: λ = {lam} is below {n + 1}")
    if lam.is_exact and lam.lo >= top:
        lo, hi = lam.lo, lam.lo
        provenance = [f"λ = {lam.lo} >= 2n+1: S_B = λ"]
    elif lam.hi < top:
        lo, hi = lam.lo, top
        provenance = [f"λ = {lam} < 2n+1: λ <= S_B <= 2n+1"]
    else:
        lo, hi = lam.lo, max(lam.hi, top)
        provenance = [f"λ = {lam} straddles 2n+1: S_B in [{lo}, {hi}]"]
    if upper is not None and upper < hi:
        if upper < lo:
            raise DescriptorError(f"ball cover of size {upper} is below {lo}")
        hi = upper
        provenance.append(f"explicit cover by {upper} balls")
    return SBResult.from_members(list(range(lo, hi + 1)), provenance)


def category_bounds(
    n: int,
    simply_connected: bool = False,
    omega_aspherical: bool = False,
    cup_length: Optional[IntInterval] = None,
    cat_hint: Optional[IntInterval] = None,
    b_hint: Optional[IntInterval] = None,
) -> CategoryBounds:
    """
    Bounds on the category and on B(M) from topological flags.

    Args:
        n: Half dimension
        simply_connected: π_1(M) = 0
        omega_aspherical: [ω] vanishes on π_2(M)
        cup_length: Known cup-length bracket, if any
        cat_hint: Known category bracket, if any
        b_hint: Known B(M) bracket, if any

    Returns:
        The category and B(M) intervals, both shrunk to the values that
        occur in some admissible pair

    Raises:
        DescriptorError: If the flags or brackets contradict each other
    """
    if n < 1:
        raise ParameterError(f"half dimension must be positive, got {n}")
    top = 2 * n + 1
    if simply_connected and omega_aspherical:
        raise DescriptorError("inconsistent flags: simply connected and ω-aspherical")
    if simply_connected:
        cat = IntInterval.exact(n + 1)
        rule = "simply connected: cl+1 = cat = B = n+1"
    elif omega_aspherical:
        cat = IntInterval.exact(top)
        rule = "ω-aspherical: cat = B = 2n+1"
    else:
        cat = IntInterval(lo=n + 1, hi=top)
        rule = "general: B = cat unless (cat, B) = (n+1, n+2)"
    if cup_length is not None:
        narrowed = cat.intersect(IntInterval(lo=cup_length.lo + 1, hi=top))
        if narrowed is None:
            raise DescriptorError("cup-length contradicts the category bounds")
        cat = narrowed
    if cat_hint is not None:
        narrowed = cat.intersect(cat_hint)
        if narrowed is None:
            raise DescriptorError("category hint contradicts the flags")
        cat = narrowed
    if cat.lo >= n + 2:
        b_of_m = cat
        if not (simply_connected or omega_aspherical):
            rule = "cat >= n+2: B = cat"
    elif cat.is_exact and (simply_connected or omega_aspherical):
        b_of_m = cat
    else:
        b_of_m = IntInterval(lo=cat.lo, hi=max(cat.hi, n + 2))
    if b_hint is not None:
        narrowed = b_of_m.intersect(b_hint)
        if narrowed is None:
            raise DescriptorError("B(M) contradicts the topological flags")
        b_of_m = narrowed
    bounds = CategoryBounds(half_dim=n, cat=cat, b_of_m=b_of_m, rule=rule)
    pairs = bounds.admissible_pairs()
    if not pairs:
        raise DescriptorError(f"no admissible (cat, B) pair in {cat} x {b_of_m}")
    cats = [c for c, _ in pairs]
    bs = [b for _, b in pairs]
    return bounds.model_copy(
        update={
            "cat": IntInterval(lo=min(cats), hi=max(cats)),
            "b_of_m": IntInterval(lo=min(bs), hi=max(bs)),
        }
    )


def singhof_bound(m: int, p: int, cat: int) -> SinghofResult:
    """
    Singhof's comparison of B(M) with the category.

    With threshold t = (m+p+4) / (2(p+1)): cat >= t gives B = cat, otherwise
    B <= ceil(t).
    """
    if m < 2 or m % 2:
        raise ParameterError(f"dimension must be even and >= 2, got {m}")
    if p < 0:
        raise ParameterError(f"connectivity must be >= 0, got {p}")
    if cat < 2:
        raise ParameterError(f"category must be >= 2, got {cat}")
    threshold = Fraction(m + p + 4, 2 * (p + 1))
    if cat >= threshold:
        return SinghofResult(threshold=threshold, exact=cat, upper=cat)
    return SinghofResult(threshold=threshold, upper=math.ceil(threshold))


def equal_ball_report(result: SBResult, large: bool) -> str:
    """Statement about covers by equal balls implied by `result`."""
    if result.is_exact and large:
        return f"S_B^= = {result.lo}"
    if result.is_exact:
        return "S_B^= bound not implied by the volume rule"
    return (
        f"S_B^= in [{result.lo}, {result.hi}]; equality with S_B conditional "
        "on path-connected ball embedding spaces"
    )


def colour_count(big: int, n: int) -> int:
    """Colours used by the covering construction: Γ if Γ >= 2n+2, else 2n+1."""
    return big if big >= 2 * n + 2 else 2 * n + 1


def covering_chain(
    n: int,
    category: CategoryBounds,
    cup_length: Optional[IntInterval],
    omega_aspherical: bool,
) -> list[ChainLink]:
    """The chain cl+1 <= cat <= B <= S <= S_dis <= 2n+1 as intervals."""
    top = 2 * n + 1
    if cup_length is not None:
        cl = IntInterval(lo=cup_length.lo + 1, hi=min(cup_length.hi + 1, top))
    else:
        cl = IntInterval(lo=n + 1, hi=category.cat.hi)
    if omega_aspherical:
        smooth = IntInterval.exact(top)
    else:
        smooth = IntInterval(lo=category.b_of_m.lo, hi=top)
    return [
        ChainLink(name="cl+1", bounds=cl),
        ChainLink(name="cat", bounds=category.cat),
        ChainLink(name="B", bounds=category.b_of_m),
        ChainLink(name="S", bounds=smooth),
        ChainLink(name="S_dis", bounds=IntInterval(lo=smooth.lo, hi=top)),
    ]


def evaluate(descriptor: ManifoldDescriptor) -> InvariantsReport:
    """
    Run the whole pipeline on a descriptor.

    Returns:
        γ, Γ, λ, the category bounds, S_B with provenance, the equal-ball note
        and the covering chain
    """
    n = descriptor.half_dim
    top = 2 * n + 1
    width = descriptor.gromov_width
    gamma = RatInterval(
        lo=gamma_capacity(width.lo, n),
        hi=None if width.hi is None else gamma_capacity(width.hi, n),
    )
    provenance = []
    if descriptor.gamma_cited is not None:
        big = IntInterval.exact(descriptor.gamma_cited)
        provenance.append(f"Γ = {big} cited")
    else:
        big = gamma_interval(descriptor.volume, width, n)
        provenance.append(f"Γ = {big} from volume and width")

    category = category_bounds(
        n,
        descriptor.simply_connected,
        descriptor.omega_aspherical,
        descriptor.cup_length,
        descriptor.cat,
        descriptor.b_of_m,
    )
    provenance.append(f"B(M) = {category.b_of_m} ({category.rule})")

    lam = lambda_value(category.b_of_m, big)
    sb = sb_from_lambda(lam, n, descriptor.ball_cover_upper)
    sb.provenance = provenance + sb.provenance
    large = lam.is_exact and lam.lo >= top
    colours = colour_count(big.lo, n) if big.is_exact else None
    notes = list(descriptor.notes)
    if n == 1 and descriptor.simply_connected:
        notes.append("the 2-sphere has S = 2 but S_dis = 3")
    logger.info("%s: Γ=%s λ=%s S_B=%s", descriptor.name or "manifold", big, lam, sb)
    return InvariantsReport(
        name=descriptor.name,
        half_dim=n,
        gamma=gamma,
        big_gamma=big,
        category=category,
        lambda_value=lam,
        sb=sb,
        equal_ball=equal_ball_report(sb, large),
        colours=colours,
        chain=covering_chain(
            n, category, descriptor.cup_length, descriptor.omega_aspherical
        ),
        provenance=sb.provenance,
        notes=notes,
    )
