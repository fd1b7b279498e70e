"""Tests for the compactly supported Hamiltonian translation."""

from fractions import Fraction

import numpy as np
import pytest

from darboux.errors import ParameterError
from darboux.geometry import Box, Point
from darboux.services.hamiltonian import (
    BumpProfile,
    TranslationField,
    area_distortion_check,
    demo_field,
    flow,
    run_translation_checks,
    sample_trajectories,
    translate_flow,
)


class TestBumpProfile:
    """Test the cutoff profile."""

    def test_plateau_and_tail(self) -> None:
        """Test f = 1 near the hull and f = 0 far away."""
        profile = BumpProfile(Fraction(1, 4), Fraction(1))
        values = profile.value(np.array([0.0, 0.25, 1.0, 3.0]))
        assert values.tolist() == [1.0, 1.0, 0.0, 0.0]
        assert profile.slope(np.array([0.0, 2.0])).tolist() == [0.0, 0.0]

    def test_monotone_ramp(self) -> None:
        """Test that f decreases across the ramp."""
        profile = BumpProfile(Fraction(1, 4), Fraction(1))
        values = profile.value(np.linspace(0.25, 1.0, 20))
        assert np.all(np.diff(values) <= 0)

    def test_bad_radii(self) -> None:
        """Test that inner must be below outer."""
        with pytest.raises(ParameterError, match="inner < outer"):
            BumpProfile(Fraction(1), Fraction(1, 2))


class TestFlow:
    """Test the time-1 map."""

    def test_moves_the_core(self) -> None:
        """Test that a core point lands on its translate."""
        image = translate_flow(demo_field(), [0.5, 0.5])
        assert image == pytest.approx([0.5, 2.5], abs=1e-6)

    def test_zero_shift_is_identity(self) -> None:
        """Test that q = 0 gives the identity."""
        field = TranslationField(
            core=Box.from_bounds([(0, 1), (0, 1)]),
            shift=Point.zero(2),
            profile=BumpProfile(Fraction(1, 4), Fraction(1)),
        )
        points = np.array([[0.3, 0.7], [5.0, -2.0]])
        assert np.array_equal(flow(field, points, 10), points)

    def test_identity_outside_support(self) -> None:
        """Test that points beyond the support do not move at all."""
        field = demo_field()
        points = np.array([[-3.0, -3.0], [4.0, 1.0], [0.5, 10.0]])
        assert np.array_equal(flow(field, points, 100), points)

    def test_four_dimensional_translation(self) -> None:
        """Test a shift along a y-axis of R^4."""
        field = TranslationField(
            core=Box.from_bounds([(0, 1)] * 4),
            shift=Point.of(0, 0, 0, 2),
            profile=BumpProfile(Fraction(1, 4), Fraction(1)),
        )
        image = translate_flow(field, [0.5, 0.5, 0.5, 0.5], steps=200)
        assert image == pytest.approx([0.5, 0.5, 0.5, 2.5], abs=1e-6)

    def test_steps_must_be_positive(self) -> None:
        """Test that RK4 needs at least one step."""
        with pytest.raises(ParameterError, match="steps"):
            flow(demo_field(), np.zeros((1, 2)), 0)

    def test_dimension_mismatch(self) -> None:
        """Test that core and shift share a dimension."""
        with pytest.raises(ParameterError, match="dimension"):
            TranslationField(
                core=Box.from_bounds([(0, 1)] * 2),
                shift=Point.of(0, 0, 0, 1),
                profile=BumpProfile(Fraction(1, 4), Fraction(1)),
            )


class TestAreaPreservation:
    """Test the Jacobian determinant of the flow."""

    def test_core_is_rigid(self) -> None:
        """Test det = 1 on the core up to discretization error."""
        field = demo_field()
        assert area_distortion_check(field, field.core, 5) <= 1e-4

    def test_annulus(self) -> None:
        """Test det = 1 where the cutoff ramps down."""
        field = demo_field()
        sample = field.hull.fatten(Fraction(5, 8))
        assert area_distortion_check(field, sample, 9) <= 1e-3

    def test_grid_too_small(self) -> None:
        """Test that the sample grid needs two points per axis."""
        with pytest.raises(ParameterError, match="grid"):
            area_distortion_check(demo_field(), demo_field().core, 1)


class TestTranslationChecks:
    """Test the bundled checks and the demo trajectories."""

    def test_demo_passes(self) -> None:
        """Test the default run."""
        report = run_translation_checks()
        assert report.passed
        assert report.identity_outside_exact
        assert report.max_endpoint_error < 1e-6

    def test_trajectories_are_seeded(self) -> None:
        """Test that the same seed gives the same samples."""
        first = sample_trajectories(demo_field(), 3, seed=11, steps=50, record_every=10)
        second = sample_trajectories(
            demo_field(), 3, seed=11, steps=50, record_every=10
        )
        assert first == second
        assert len(first) == 3 * 6
        assert {row[1] for row in first} == {0, 10, 20, 30, 40, 50}

    def test_chunks_match_a_single_run(self) -> None:
        """Test that recording does not change the integration."""
        field = demo_field()
        rows = sample_trajectories(field, 2, seed=1, steps=40, record_every=7)
        starts = np.array([row[2] for row in rows if row[1] == 0])
        ends = np.array([row[2] for row in rows if row[1] == 40])
        assert np.allclose(flow(field, starts, 40), ends, atol=1e-12)

    def test_samples_must_be_positive(self) -> None:
        """Test that at least one sample is drawn."""
        with pytest.raises(ParameterError, match="samples"):
            sample_trajectories(demo_field(), 0, seed=0)
