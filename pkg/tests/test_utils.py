"""Tests for utility functions."""

from fractions import Fraction

import pytest

from darboux.errors import ParameterError
from darboux.utils import (
    PI_LOWER,
    PI_UPPER,
    common_denominator,
    exact_sqrt,
    format_rat,
    parse_rat,
    parse_window,
    sqrt_lower,
    sqrt_upper,
)

F = Fraction


class TestParseRat:
    """Test parse_rat function."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            ("1/3", F(1, 3)),
            (" 2/4 ", F(1, 2)),
            ("-3", F(-3)),
            ("0.125", F(1, 8)),
            (7, F(7)),
            (0.1, F(1, 10)),
            (F(5, 7), F(5, 7)),
        ],
    )
    def test_valid(self, value: object, expected: Fraction) -> None:
        """Test the accepted spellings."""
        assert parse_rat(value) == expected  # type: ignore[arg-type]

    @pytest.mark.parametrize("value", ["", "1/0", "pi", True, float("nan"), None])
    def test_invalid(self, value: object) -> None:
        """Test that non-rationals raise ParameterError."""
        with pytest.raises(ParameterError, match="not a rational number"):
            parse_rat(value)  # type: ignore[arg-type]


class TestFormatRat:
    """Test format_rat function."""

    def test_fraction(self) -> None:
        """Test p/q output."""
        assert format_rat(F(6, 4)) == "3/2"

    def test_integer(self) -> None:
        """Test that integers drop the denominator."""
        assert format_rat(F(4, 2)) == "2"


class TestParseWindow:
    """Test parse_window function."""

    def test_two_axes(self) -> None:
        """Test a planar window."""
        assert parse_window("0:1/2,-1:1") == [(F(0), F(1, 2)), (F(-1), F(1))]

    def test_malformed(self) -> None:
        """Test that ranges need exactly one colon."""
        with pytest.raises(ParameterError, match="lo:hi"):
            parse_window("0:1:2")

    def test_empty_range(self) -> None:
        """Test that lo must be below hi."""
        with pytest.raises(ParameterError, match="empty window range"):
            parse_window("1:1")


class TestSquareRoots:
    """Test rational square root brackets."""

    @pytest.mark.parametrize("value", [F(2), F(1, 3), F(10**6 + 1), F(7, 5)])
    def test_bracket(self, value: Fraction) -> None:
        """Test lower^2 <= value <= upper^2 with a tiny gap."""
        lo, hi = sqrt_lower(value), sqrt_upper(value)
        assert lo * lo <= value <= hi * hi
        assert hi - lo <= F(1, 2**63)

    def test_perfect_square(self) -> None:
        """Test that exact roots are found and bounds coincide."""
        assert exact_sqrt(F(9, 4)) == F(3, 2)
        assert exact_sqrt(F(2)) is None
        assert exact_sqrt(F(-1)) is None
        assert sqrt_lower(F(9, 4)) == sqrt_upper(F(9, 4)) == F(3, 2)

    def test_negative(self) -> None:
        """Test that negative input is rejected."""
        with pytest.raises(ParameterError, match="negative"):
            sqrt_upper(F(-1))


class TestConstants:
    """Test the pi brackets and denominators."""

    def test_pi_bracket(self) -> None:
        """Test PI_LOWER < pi < PI_UPPER."""
        import math

        assert PI_LOWER < math.pi < PI_UPPER

    def test_common_denominator(self) -> None:
        """Test the least common multiple of denominators."""
        assert common_denominator([F(1, 4), F(1, 6), F(2)]) == 12
        assert common_denominator([]) == 1
