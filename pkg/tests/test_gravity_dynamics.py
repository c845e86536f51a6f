"""
Tests for the gravity_dynamics module.

Tests rational Cauchy transforms, their closed-form evolution under
gravity and the split into a stationary disk and a sinking remainder.
"""

from fractions import Fraction

import numpy as np
import pytest

from heleshaw.geometry import sample_boundary
from heleshaw.gravity_dynamics import (
    CauchyTransform,
    GravityScenario,
    disk_boundary,
    disk_parameters,
    evolve_transform,
    split_decomposition,
    transform_of_disk,
)
from heleshaw.moments import cauchy_transform
from heleshaw.validation import (
    InputValidationError,
    NotADiskError,
    UnphysicalWarning,
    UnsupportedRepresentationError,
)


class TestCauchyTransform:
    """Tests for CauchyTransform arithmetic."""

    def test_coincident_poles_merge(self):
        """Residues at the same pole add; zeros vanish."""
        transform = CauchyTransform(poles=((1, 0), (2, 0), (3, 1), (-3, 1)))
        assert transform.residues() == {0: 3}

    def test_zero(self):
        """The zero transform is rational and empty."""
        assert CauchyTransform.zero().is_zero
        assert CauchyTransform.zero().is_rational
        assert (CauchyTransform.single_pole(1, 2) - CauchyTransform.single_pole(1, 2)).is_zero

    def test_shift(self):
        """χ(w + s) moves poles by −s."""
        shifted = CauchyTransform.single_pole(Fraction(1, 3), 1).shifted(Fraction(1, 2))
        assert shifted.residues() == {Fraction(1, 2): Fraction(1, 3)}

    def test_evaluate(self):
        """1/(w − 0) at w = 2."""
        assert CauchyTransform.single_pole(1, 0).evaluate(2.0) == pytest.approx(0.5)

    def test_log_terms(self):
        """A log term is not rational and contributes to the total residue."""
        transform = CauchyTransform(logs=((Fraction(1, 2), 0, 1),))
        assert not transform.is_rational
        assert transform.total_residue == Fraction(1, 2)

    def test_rejects_non_numbers(self):
        """Residues must be numbers."""
        with pytest.raises(InputValidationError):
            CauchyTransform(poles=(("1", 0),))
        with pytest.raises(InputValidationError):
            CauchyTransform(poles=((True, 0),))


class TestDisks:
    """Tests for disk transforms."""

    def test_matches_sampled_transform(self, shifted_disk_map):
        """coefficient/(w − center) equals the quadrature transform of the disk."""
        boundary = sample_boundary(shifted_disk_map, 256)
        exact = transform_of_disk(2.0, 0.25)
        for w in (4.0, 2.0 + 3j, -1.0):
            assert cauchy_transform(boundary, w) == pytest.approx(exact.evaluate(w), abs=1e-13)

    def test_parameters(self):
        """disk_parameters inverts transform_of_disk."""
        assert disk_parameters(transform_of_disk(Fraction(1, 2), 3)) == (Fraction(1, 2), 3)

    def test_negative_coefficient(self):
        """A disk has non-negative area."""
        with pytest.raises(InputValidationError):
            transform_of_disk(0, -1)

    def test_not_a_disk(self):
        """Two poles are not a disk."""
        with pytest.raises(NotADiskError):
            disk_parameters(CauchyTransform(poles=((1, 0), (1, 1))))
        with pytest.raises(NotADiskError):
            disk_parameters(CauchyTransform.zero())

    def test_boundary(self):
        """Samples lie on the circle of radius √coefficient."""
        points = disk_boundary(1.0 + 1j, 4.0, 64)
        assert np.allclose(np.abs(points - (1.0 + 1j)), 2.0)


class TestGravityScenario:
    """Tests for scenario construction."""

    def test_dipole_in_disk(self):
        """χ₀ = A/(w − center) with the dipole at the centre."""
        scenario = GravityScenario.dipole_in_disk(1, 2, 1)
        assert scenario.initial.residues() == {0: 2}
        assert scenario.steady_residue == 1

    def test_rejects_non_positive_rate(self):
        """C must be positive."""
        with pytest.raises(InputValidationError):
            GravityScenario.dipole_in_disk(0, 2, 1)

    def test_requires_cauchy_transform(self):
        """χ₀ must be a CauchyTransform."""
        with pytest.raises(UnsupportedRepresentationError):
            GravityScenario(1, lambda w: 1 / w)


class TestEvolveTransform:
    """Tests for the closed-form evolution."""

    def test_split_identity_exact(self):
        """χ = (μ/C)/w + (A − μ/C)/(w + Ct) in exact arithmetic."""
        C, A, mu, t = Fraction(1), Fraction(2), Fraction(1), Fraction(1, 2)
        scenario = GravityScenario.dipole_in_disk(C, A, mu)
        evolved = evolve_transform(scenario, t)
        assert evolved.residues() == {0: mu / C, -C * t: A - mu / C}

        stationary, sinking = split_decomposition(scenario, t)
        assert stationary.residues() == {0: Fraction(1)}
        assert disk_parameters(sinking) == (Fraction(-1, 2), Fraction(1))
        assert (stationary + sinking).residues() == evolved.residues()

    def test_initial_time(self):
        """At t = 0 the transform is χ₀."""
        scenario = GravityScenario.dipole_in_disk(Fraction(2), Fraction(3), Fraction(1))
        assert evolve_transform(scenario, 0).residues() == {0: Fraction(3)}

    def test_area_conserved_without_sources(self):
        """Total residue stays A."""
        scenario = GravityScenario.dipole_in_disk(Fraction(1), Fraction(2), Fraction(1))
        for t in (Fraction(1, 4), Fraction(3), Fraction(10)):
            assert evolve_transform(scenario, t).total_residue == 2

    def test_source_grows_area(self):
        """A source q adds qt/π to the total residue."""
        scenario = GravityScenario(1.0, transform_of_disk(0.0, 1.0), sources=((0.5, 0.0),))
        evolved = evolve_transform(scenario, 2.0)
        assert not evolved.is_rational
        assert complex(evolved.total_residue).real == pytest.approx(1.0 + 0.5 * 2.0 / np.pi)

    def test_negative_time(self):
        """t must be non-negative."""
        scenario = GravityScenario.dipole_in_disk(1, 2, 1)
        with pytest.raises(InputValidationError):
            evolve_transform(scenario, -1)

    def test_logarithmic_initial_transform(self):
        """χ₀ with log terms is outside the closed form."""
        scenario = GravityScenario(1, CauchyTransform(logs=((1, 0, 1),)))
        with pytest.raises(UnsupportedRepresentationError):
            evolve_transform(scenario, 1)

    def test_unphysical_split_warns(self):
        """A < μ/C leaves a negative sinking residue."""
        scenario = GravityScenario.dipole_in_disk(Fraction(1), Fraction(1, 2), Fraction(1))
        with pytest.warns(UnphysicalWarning):
            split_decomposition(scenario, Fraction(1))

    def test_split_needs_dipole(self):
        """Without a dipole there is nothing stationary."""
        scenario = GravityScenario(1, transform_of_disk(0, 1))
        with pytest.raises(InputValidationError):
            split_decomposition(scenario, 1)
