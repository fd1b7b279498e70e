"""Tests for the manifold family catalog."""

from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from darboux.errors import ParameterError
from darboux.models.families import (
    Grassmannian,
    NontrivialBundle,
    ProductSurfaces,
    ProjectiveSpace,
    Surface,
    TrivialBundle,
)
from darboux.models.manifold import SBKind
from darboux.services.catalog import (
    NO_SHARPER_BOUND,
    cpn_chart_cover_check,
    cpn_chart_index,
    describe,
    figure_table,
    parse_family,
    plucker_degree,
    sb_of,
)

F = Fraction


class TestParseFamily:
    """Test family specifications from plain data."""

    def test_discriminates_on_family(self) -> None:
        """Test that the family key picks the model."""
        spec = parse_family({"family": "trivial", "g": 0, "a": "3", "b": 1})
        assert isinstance(spec, TrivialBundle)
        assert spec.a == 3

    def test_unknown_family(self) -> None:
        """Test that unknown families fail validation."""
        with pytest.raises(ValidationError):
            parse_family({"family": "torus", "g": 1})

    def test_nontrivial_positivity(self) -> None:
        """Test that ω_ab over the sphere needs a > b/2."""
        with pytest.raises(ValidationError, match="a > b/2"):
            NontrivialBundle(g=0, a=F(1, 2), b=F(1))

    def test_grassmannian_normalized(self) -> None:
        """Test that k is at most n/2."""
        with pytest.raises(ValidationError):
            Grassmannian(k=3, n=5)


class TestPluckerDegree:
    """Test degrees of Plücker embeddings."""

    @pytest.mark.parametrize(
        "k,n,expected",
        [
            (1, 3, 1),
            (2, 4, 2),
            (2, 5, 5),
            (2, 6, 14),
            (3, 6, 42),
            (2, 7, 42),
            (2, 8, 132),
        ],
    )
    def test_known_degrees(self, k: int, n: int, expected: int) -> None:
        """Test against the classical values."""
        assert plucker_degree(k, n) == expected

    def test_lines_in_six_space(self) -> None:
        """
        Test p_{2,7} = 1! 10! / (6! 5!) = 42.

        G_{2,7} shares its degree with G_{3,6}; 132 belongs to G_{2,8}.
        """
        assert plucker_degree(2, 7) == 42
        assert describe(Grassmannian(k=2, n=7)).volume == F(42, 3628800)

    def test_degrees_are_positive_integers(self) -> None:
        """Test every admissible (k, n) up to n = 12."""
        for n in range(2, 13):
            for k in range(1, n // 2 + 1):
                degree = plucker_degree(k, n)
                assert isinstance(degree, int)
                assert degree > 0
            assert plucker_degree(1, n) == 1

    def test_out_of_range(self) -> None:
        """Test that k must lie in 1..n/2."""
        with pytest.raises(ParameterError):
            plucker_degree(3, 4)


class TestFamilies:
    """Test S_B of every family."""

    def test_sphere(self) -> None:
        """Test that the sphere needs two discs."""
        assert sb_of(Surface(g=0, a=F(1))).value == 2

    @pytest.mark.parametrize("g", [1, 2, 5])
    def test_higher_genus_surface(self, g: int) -> None:
        """Test that higher genus surfaces need three discs."""
        assert sb_of(Surface(g=g, a=F(4))).value == 3

    def test_large_product_of_spheres(self) -> None:
        """Test S²(3) × S²(1) with S_B = Γ = 7."""
        assert sb_of(TrivialBundle(g=0, a=F(3), b=F(1))).value == 7

    def test_square_product_of_spheres(self) -> None:
        """Test that S²(1) × S²(1) is only bracketed."""
        result = sb_of(TrivialBundle(g=0, a=F(1), b=F(1)))
        assert result.kind == SBKind.RANGE
        assert result.members == [3, 4, 5]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_projective_space(self, n: int) -> None:
        """Test S_B(CP^n) = n + 1."""
        result = sb_of(ProjectiveSpace(n=n))
        assert result.kind == SBKind.EXACT
        assert result.value == n + 1

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_ruled_product_of_spheres(self, k: int) -> None:
        """Test S²(k) × S²(1) with S_B = Γ = 2k + 1."""
        assert sb_of(TrivialBundle(g=0, a=F(k), b=F(1))).value == 2 * k + 1

    @pytest.mark.parametrize(
        "k,n,expected",
        [(2, 4, [5, 6]), (2, 6, [15]), (2, 7, [43]), (3, 6, [43])],
    )
    def test_grassmannian_values(self, k: int, n: int, expected: list[int]) -> None:
        """Test S_B of Grassmannians from volume, category and chart cover."""
        assert sb_of(Grassmannian(k=k, n=n)).members == expected

    def test_short_chart_cover_is_dropped(self) -> None:
        """Test that C(n, k) charts below p + 1 do not cap S_B."""
        descriptor = describe(Grassmannian(k=3, n=6))
        assert descriptor.ball_cover_upper is None
        assert "ball_cover_upper" not in descriptor.citations
        assert any("fall below Γ = 43" in note for note in descriptor.notes)
        assert describe(Grassmannian(k=2, n=6)).ball_cover_upper == 15

    def test_grassmannian(self) -> None:
        """Test G_{2,5}: volume, chart cover and the resulting range."""
        spec = Grassmannian(k=2, n=5)
        descriptor = describe(spec)
        assert descriptor.volume == F(5, 720)
        assert descriptor.ball_cover_upper == 10
        result = sb_of(spec)
        assert (result.lo, result.hi) == (7, 10)

    def test_product_of_higher_genus(self) -> None:
        """Test that Σ_1 × Σ_3 is ω-aspherical with S_B = 5."""
        result = sb_of(ProductSurfaces(g=1, h=3, a=F(1), b=F(1)))
        assert result.value == 5
        assert NO_SHARPER_BOUND not in result.provenance

    def test_large_product_keeps_asymptotic_note(self) -> None:
        """Test that the unspecified asymptotic constant is only a note."""
        descriptor = describe(ProductSurfaces(g=1, h=2, a=F(20), b=F(1)))
        assert any("unspecified constant" in note for note in descriptor.notes)

    def test_descriptors_carry_citations(self) -> None:
        """Test that borrowed constants name their source."""
        descriptor = describe(TrivialBundle(g=1, a=F(2), b=F(1)))
        assert "gamma" in descriptor.citations
        assert descriptor.gamma_cited == 5


class TestFigureTable:
    """Test the step functions of a/b."""

    def test_trivial_over_sphere(self) -> None:
        """Test the step function of S² × S²."""
        rows = figure_table("trivial-g0", [F(1), F(3, 2), F(2), F(3)])
        assert [(r.sb_min, r.sb_max, r.exact_flag) for r in rows] == [
            (3, 5, False),
            (4, 5, False),
            (5, 5, True),
            (7, 7, True),
        ]

    def test_trivial_over_torus(self) -> None:
        """Test the step function of T² × S²."""
        rows = figure_table("trivial-g1", [F(1), F(2), F(5, 2)])
        assert (rows[0].sb_min, rows[0].sb_max) == (4, 5)
        assert rows[1].sb_min == rows[1].sb_max == 5
        assert rows[2].sb_min == rows[2].sb_max == 6

    def test_nontrivial_over_sphere(self) -> None:
        """Test the first column of the nontrivial bundle."""
        rows = figure_table("nontrivial-g0", [F(1)])
        assert (rows[0].sb_min, rows[0].sb_max) == (3, 5)

    @pytest.mark.parametrize("family", ["trivial-g0", "nontrivial-g0"])
    def test_bundles_over_sphere(self, family: str) -> None:
        """Test both bundles over S² at a/b in {1, 7/4, 2, 3}."""
        rows = figure_table(family, [F(1), F(7, 4), F(2), F(3)])
        assert [(r.sb_min, r.sb_max, r.exact_flag) for r in rows] == [
            (3, 5, False),
            (4, 5, False),
            (5, 5, True),
            (7, 7, True),
        ]

    def test_nontrivial_needs_large_ratio(self) -> None:
        """Test that a/b <= 1/2 has no nontrivial form over S²."""
        with pytest.raises(ParameterError, match="a/b > 1/2"):
            figure_table("nontrivial-g0", [F(1, 2)])

    def test_unknown_figure(self) -> None:
        """Test that only the listed families have figures."""
        with pytest.raises(ParameterError, match="unknown figure"):
            figure_table("cpn", [F(1)])

    def test_steps_are_monotone(self) -> None:
        """Test that S_B never decreases as a/b grows."""
        ratios = [F(i, 4) for i in range(4, 21)]
        rows = figure_table("trivial-g0", ratios)
        lows = [r.sb_min for r in rows]
        assert lows == sorted(lows)


class TestChartCheck:
    """Test the affine chart cover of CP^n."""

    def test_random_points_are_covered(self) -> None:
        """Test that seeded samples all fall in some chart."""
        report = cpn_chart_cover_check(3, 500, seed=7)
        assert report.passed
        assert report.charts == 4
        assert report.worst_ratio >= report.bound * (1 - 1e-12)

    def test_deterministic(self) -> None:
        """Test that the same seed gives the same report."""
        assert cpn_chart_cover_check(2, 200, 3) == cpn_chart_cover_check(2, 200, 3)

    def test_balanced_vector(self) -> None:
        """Test the worst case |u_i| = |u| / sqrt(n+1)."""
        vectors = np.ones((1, 3), dtype=complex)
        report = cpn_chart_cover_check(2, 1, vectors=vectors)
        assert report.passed
        assert report.worst_ratio == pytest.approx(1 / np.sqrt(3))

    def test_largest_coordinate_wins(self) -> None:
        """Test that the chart of the largest coordinate is used."""
        assert cpn_chart_index([0.1, -2j, 1.0]) == 1

    def test_zero_vector(self) -> None:
        """Test that the zero vector is not a point."""
        with pytest.raises(ParameterError, match="zero vector"):
            cpn_chart_index([0, 0, 0])
