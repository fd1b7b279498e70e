"""Utility functions for exact rational arithmetic."""

import math
from fractions import Fraction
from typing import Optional, Union

from .errors import ParameterError

RatLike = Union[Fraction, int, str, float]

# Rational brackets of pi, used wherever disc areas are compared exactly.
PI_LOWER = Fraction(333, 106)
PI_UPPER = Fraction(355, 113)

SQRT_BITS = 64


def parse_rat(value: RatLike) -> Fraction:
    """
    Parse a rational number.

    Accepts fractions, integers, "p/q" strings, integer strings and decimal
    strings. Floats are read through their shortest decimal representation.

    Args:
        value: The value to parse

    Returns:
        The value as a normalized Fraction

    Raises:
        ParameterError: If the value is not a rational number
    """
    if isinstance(value, bool):
        raise ParameterError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ParameterError(f"not a rational number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"not a rational number: {value!r}") from None
    raise ParameterError(f"not a rational number: {value!r}")


def format_rat(value: Fraction) -> str:
    """Format a rational as "p/q", or as a bare integer when q = 1."""
    return str(Fraction(value))


def parse_window(text: str) -> list[tuple[Fraction, Fraction]]:
    """
    Parse a window specification of the form "lo:hi,lo:hi,...".

    Args:
        text: Comma separated axis ranges

    Returns:
        List of (lo, hi) pairs, one per axis

    Raises:
        ParameterError: If a range is malformed or empty
    """
    bounds = []
    for part in text.split(","):
        pieces = part.split(":")
        if len(pieces) != 2:
            raise ParameterError(f"window ranges look like lo:hi, got {part!r}")
        lo, hi = parse_rat(pieces[0]), parse_rat(pieces[1])
        if lo >= hi:
            raise ParameterError(f"empty window range {part!r}")
        bounds.append((lo, hi))
    return bounds


def sqrt_lower(value: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Rational lower bound of sqrt(value), accurate to 2**-bits."""
    if value < 0:
        raise ParameterError("square root of a negative number")
    scaled = math.floor(value * 4**bits)
    return Fraction(math.isqrt(scaled), 2**bits)


def sqrt_upper(value: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Rational upper bound of sqrt(value), accurate to 2**-bits."""
    if value < 0:
        raise ParameterError("square root of a negative number")
    scaled = math.ceil(value * 4**bits)
    root = math.isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Fraction(root, 2**bits)


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    """Return sqrt(value) when it is rational, otherwise None."""
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def common_denominator(values: list[Fraction]) -> int:
    """Least common multiple of the denominators."""
    result = 1
    for value in values:
        result = result * value.denominator // math.gcd(result, value.denominator)
    return result
