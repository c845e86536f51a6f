"""
Tests for the geometry module.

Tests conformal maps, boundary sampling, univalence verdicts, critical
parameter bisection, area, winding numbers and map inversion.
"""

import math

import numpy as np
import pytest

from heleshaw.closed_form import (
    example1_critical_charge,
    solve_dipole_limit,
    solve_example1,
    solve_example2,
    solve_example3,
)
from heleshaw.geometry import (
    BoundaryCurve,
    ConformalMap,
    FailureKind,
    MapFamily,
    UnivalenceFailure,
    UnivalenceVerdict,
    check_curve_univalence,
    check_univalence,
    critical_parameter,
    domain_area,
    invert_map,
    sample_boundary,
    winding_number,
)
from heleshaw.validation import (
    AnalyticityError,
    BracketError,
    DomainError,
    GeometryError,
    InputValidationError,
)


def _quadratic(t: float) -> ConformalMap:
    """f(ζ) = ζ + tζ², univalent for t <= 1/2."""
    return ConformalMap.numeric([0.0, 1.0, t])


class TestConformalMap:
    """Tests for ConformalMap construction and evaluation."""

    def test_identity(self, disk_map):
        """The identity map evaluates to its argument."""
        assert disk_map.evaluate(0.3 + 0.4j) == pytest.approx(0.3 + 0.4j)
        assert disk_map.derivative(0.5) == pytest.approx(1.0)
        assert disk_map.center == 0

    def test_numeric_needs_nonzero_derivative(self):
        """f'(0) = 0 is rejected."""
        with pytest.raises(InputValidationError):
            ConformalMap.numeric([1.0, 0.0, 1.0])

    def test_closed_form_family_takes_no_coefficients(self):
        """Only Numeric maps carry coefficients."""
        with pytest.raises(InputValidationError):
            ConformalMap(MapFamily.DIPOLE_CHARGE_LIMIT, {"a": 1.0, "k": 1.0}, coefficients=np.array([0, 1]))

    def test_from_boundary_values(self):
        """Boundary values of ζ + ζ²/4 give back the Taylor coefficients."""
        zeta = np.exp(2j * np.pi * np.arange(64) / 64)
        conformal_map = ConformalMap.from_boundary_values(zeta + 0.25 * zeta ** 2)
        assert conformal_map.coefficients[:3] == pytest.approx([0.0, 1.0, 0.25], abs=1e-14)

    def test_from_boundary_values_rejects_negative_modes(self):
        """Data with 1/ζ content are not boundary values of an analytic map."""
        zeta = np.exp(2j * np.pi * np.arange(64) / 64)
        with pytest.raises(AnalyticityError):
            ConformalMap.from_boundary_values(zeta + 0.1 / zeta)

    def test_real_symmetry(self):
        """Real coefficients give a real-symmetric map."""
        assert _quadratic(0.3).is_real_symmetric
        assert not ConformalMap.numeric([0.0, 1.0, 0.3j]).is_real_symmetric


class TestSampleBoundary:
    """Tests for boundary sampling."""

    def test_identity_four_points(self, disk_map):
        """n = 4 gives 1, i, −1, −i."""
        boundary = sample_boundary(disk_map, 4)
        assert boundary.points == pytest.approx([1, 1j, -1, -1j], abs=1e-15)

    def test_colocated_formula(self):
        """Samples of the colocated family satisfy z = 4ζe^{0.5ζ}."""
        conformal_map = solve_example2(1.0, 1.0, 4.0)
        boundary = sample_boundary(conformal_map, 128)
        zeta = np.exp(1j * boundary.nodes)
        assert np.max(np.abs(boundary.points - 4 * zeta * np.exp(0.5 * zeta))) < 1e-13

    def test_quadrupole_parity(self):
        """The quadrupole boundary is symmetric under z → −z and z → z̄."""
        boundary = sample_boundary(solve_example3(1.0, 1.0, 0.4502), 256)
        z = boundary.points
        k = np.arange(256)
        assert np.max(np.abs(z[(k + 128) % 256] + z)) < 1e-12
        assert np.max(np.abs(z[(-k) % 256] - np.conj(z))) < 1e-12

    def test_tangents_match_spectral_derivative(self):
        """dz/dφ agrees with spectral differentiation of the samples."""
        boundary = sample_boundary(_quadratic(0.3), 128)
        spectral = BoundaryCurve.from_samples(boundary.points)
        assert np.max(np.abs(spectral.tangents - boundary.tangents)) < 1e-8

    def test_non_decaying_coefficients(self):
        """A Numeric map with a flat coefficient tail is not analytic enough."""
        with pytest.raises(AnalyticityError):
            sample_boundary(ConformalMap.numeric(np.ones(32)), 256)

    def test_schwarz_symmetry(self):
        """Real-data boundaries have conjugate samples at conjugate angles."""
        z = sample_boundary(solve_example1(1.0, 1.0, 4.0, 0.3), 512).points
        k = np.arange(512)
        assert np.max(np.abs(z[(-k) % 512] - np.conj(z))) < 1e-12

    def test_bad_sample_count(self, disk_map):
        """n must be an integer >= 3."""
        with pytest.raises(InputValidationError):
            sample_boundary(disk_map, 2)


class TestUnivalenceVerdict:
    """Tests for UnivalenceVerdict consistency."""

    def test_failure_iff_negative(self):
        """A failure is present exactly when the verdict is negative."""
        with pytest.raises(InputValidationError):
            UnivalenceVerdict(True, UnivalenceFailure(FailureKind.SELF_INTERSECTION, (0.0, 1.0)))
        with pytest.raises(InputValidationError):
            UnivalenceVerdict(False)

    def test_truthiness(self):
        """Verdicts behave as booleans."""
        assert UnivalenceVerdict(True)
        assert not UnivalenceVerdict(False, UnivalenceFailure(FailureKind.BOUNDARY_DERIVATIVE_ZERO, (math.pi,)))


class TestCheckUnivalence:
    """Tests for check_univalence."""

    def test_identity(self, disk_map):
        """The identity is univalent."""
        verdict = check_univalence(disk_map, 256)
        assert verdict.univalent
        assert verdict.failure is None

    def test_cardioid_derivative_zero(self):
        """ζ + ζ²/2 has f'(−1) = 0."""
        verdict = check_univalence(_quadratic(0.5), 256)
        assert not verdict.univalent
        assert verdict.failure.kind is FailureKind.BOUNDARY_DERIVATIVE_ZERO
        assert verdict.failure.angles[0] == pytest.approx(math.pi, abs=1e-6)

    def test_inner_loop_self_intersection(self):
        """ζ + 0.6ζ² has an inner loop."""
        verdict = check_univalence(_quadratic(0.6), 512)
        assert not verdict.univalent
        assert verdict.failure.kind is FailureKind.SELF_INTERSECTION
        phi1, phi2 = verdict.failure.angles
        z1 = _quadratic(0.6).evaluate(np.exp(1j * phi1))
        z2 = _quadratic(0.6).evaluate(np.exp(1j * phi2))
        assert abs(z1 - z2) < 1e-8

    def test_colocated_small_domain_not_univalent(self):
        """μ=Q=1, A=1 (B=2) overlaps itself."""
        assert not check_univalence(solve_example2(1.0, 1.0, 1.0), 1024).univalent

    def test_colocated_large_domain_univalent(self):
        """μ=Q=1, A=4 (B=0.5) is physical."""
        assert check_univalence(solve_example2(1.0, 1.0, 4.0), 1024).univalent

    def test_verdict_stable_under_doubling(self):
        """Doubling n does not change a clear verdict."""
        for t in (0.3, 0.7):
            coarse = check_univalence(_quadratic(t), 256).univalent
            fine = check_univalence(_quadratic(t), 512).univalent
            assert coarse == fine


class TestCheckCurveUnivalence:
    """Tests for univalence of bare sampled curves."""

    def test_circle(self, disk_boundary):
        """A sampled circle is simple."""
        assert check_curve_univalence(disk_boundary).univalent

    def test_figure_eight(self):
        """A figure-eight crosses itself."""
        phi = 2 * np.pi * np.arange(256) / 256
        phi = phi + 0.01
        boundary = BoundaryCurve.from_samples(np.sin(phi) + 0.5j * np.sin(2 * phi))
        verdict = check_curve_univalence(boundary)
        assert not verdict.univalent
        assert verdict.failure.kind is FailureKind.SELF_INTERSECTION


class TestCriticalParameter:
    """Tests for critical parameter bisection."""

    def test_quadratic_family(self):
        """ζ + tζ² loses univalence at t = 1/2."""
        assert critical_parameter(_quadratic, (0.3, 0.7), n=2048) == pytest.approx(0.5, abs=1e-3)

    def test_same_verdict_raises(self):
        """Both ends univalent is a bracket error."""
        with pytest.raises(BracketError):
            critical_parameter(_quadratic, (0.1, 0.2), n=256)

    @pytest.mark.slow
    def test_colocated_critical_size(self):
        """μ=Q=1: A_crit = 2."""
        value = critical_parameter(lambda A: solve_example2(1.0, 1.0, A), (1.0, 4.0))
        assert value == pytest.approx(2.0, abs=1e-3)

    @pytest.mark.slow
    def test_dipole_limit_critical_charge(self):
        """μ=a=1: Q_crit = 2/π²."""
        value = critical_parameter(lambda Q: solve_dipole_limit(1.0, 1.0, Q), (0.1, 0.5))
        assert value == pytest.approx(2.0 / math.pi ** 2, abs=2e-4)

    @pytest.mark.slow
    def test_quadrupole_critical_offset(self):
        """β=Q=1: a_crit = 1/π."""
        value = critical_parameter(lambda a: solve_example3(1.0, 1.0, a), (0.2, 0.5))
        assert value == pytest.approx(1.0 / math.pi, abs=3e-4)

    @pytest.mark.slow
    def test_source_sink_critical_charge(self):
        """q=1, a/b = 1/4: bisection agrees with the closed-form threshold."""
        closed = example1_critical_charge(1.0, 0.25)
        value = critical_parameter(lambda Q: solve_example1(1.0, 1.0, 4.0, Q), (0.2, 0.5))
        assert value == pytest.approx(closed, rel=1e-2)


class TestDomainArea:
    """Tests for domain_area."""

    def test_unit_circle(self, disk_boundary):
        """Area π."""
        assert domain_area(disk_boundary) == pytest.approx(math.pi, rel=1e-12)

    def test_circle_of_given_area(self):
        """Radius √(μ/π) encloses area μ."""
        mu = 2.5
        boundary = sample_boundary(ConformalMap.numeric([0.0, math.sqrt(mu / math.pi)]), 128)
        assert domain_area(boundary) == pytest.approx(mu, rel=1e-12)

    def test_scaling(self):
        """Scaling a map by r scales the area by r²."""
        base = domain_area(sample_boundary(_quadratic(0.3), 256))
        scaled = domain_area(sample_boundary(ConformalMap.numeric([0.0, 3.0, 0.9]), 256))
        assert scaled == pytest.approx(9.0 * base, rel=1e-12)

    def test_colocated_area_series(self):
        """A=4, B=0.5: π A² Σ m B^{2(m−1)}/((m−1)!)²."""
        A, B = 4.0, 0.5
        expected = math.pi * A * A * sum(m * B ** (2 * (m - 1)) / math.factorial(m - 1) ** 2 for m in range(1, 40))
        boundary = sample_boundary(solve_example2(1.0, 2.0 / (B * A), A), 512)
        assert domain_area(boundary) == pytest.approx(expected, rel=1e-12)

    def test_non_univalent_raises(self):
        """No area for an overlapping boundary."""
        with pytest.raises(GeometryError):
            domain_area(sample_boundary(_quadratic(0.7), 512))

    def test_negative_orientation_raises(self, disk_boundary):
        """A clockwise boundary is rejected."""
        reversed_curve = BoundaryCurve(disk_boundary.points[::-1], -disk_boundary.tangents[::-1])
        with pytest.raises(GeometryError):
            domain_area(reversed_curve)


class TestWindingNumber:
    """Tests for winding numbers."""

    def test_inside_and_outside(self, disk_boundary):
        """1 inside the circle, 0 outside."""
        assert winding_number(disk_boundary.points, 0.2j) == 1
        assert winding_number(disk_boundary.points, 2.0) == 0

    def test_array_query(self, disk_boundary):
        """Array queries give an integer array."""
        result = winding_number(disk_boundary.points, np.array([0.0, 3.0, -0.5]))
        assert list(result) == [1, 0, 1]


class TestInvertMap:
    """Tests for invert_map."""

    def test_affine_map(self, shifted_disk_map):
        """f = 2 + ζ/2 sends ζ = 0.5 to 2.25."""
        assert invert_map(shifted_disk_map, 2.25) == pytest.approx(0.5, abs=1e-12)

    def test_outside_raises(self, shifted_disk_map):
        """Points outside the image raise DomainError."""
        with pytest.raises(DomainError):
            invert_map(shifted_disk_map, 5.0)

    def test_closed_form_map(self):
        """Inversion inverts evaluation for the source/sink family."""
        conformal_map = solve_example1(1.0, 1.0, 4.0, 0.5)
        zeta = 0.3 - 0.2j
        assert invert_map(conformal_map, conformal_map.evaluate(zeta)) == pytest.approx(zeta, abs=1e-10)
