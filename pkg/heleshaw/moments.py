"""
Moment identities of equilibrium domains.

For an equilibrium domain D and any U analytic near D̄,

    J(U) = ∫_D ω̄ U' dA = −Σ q_i U(z_i) + μ U'(z_d) − (β/2) U''(z_q)

with sources q_i, a dipole μ and a quadrupole β. J is evaluated on the
boundary through Green's theorem:

    J(U) = (i/2) ∮ ω̄ U dz̄ − Σ_{z'_m ∈ D} (Q_m/2) U(z'_m)        (point charges)
    J(U) = −i ∮ G U' dz                                           (any smooth G)

The module also evaluates the feasibility number, the moments of the
transformed domain F(D), the rationality defect of d/dζ F(f(ζ)), the
exterior Cauchy transform of a sampled boundary, and a dense area
quadrature used as an independent oracle for J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_config
from .field import (
    FieldSpec,
    TWO_PI,
    eval_F,
    eval_omega,
    eval_omega_prime,
    eval_potential,
)
from .geometry import (
    BoundaryCurve,
    ConformalMap,
    check_curve_univalence,
    invert_map,
    sample_boundary,
    winding_number,
)
from .logging_config import get_logger
from .spectral import circle_points, fourier_series, CircleGrid
from .validation import (
    DomainError,
    FeasibilityError,
    IllConditionedWarning,
    InputValidationError,
    ReductionInapplicableError,
    UnsupportedScenarioError,
    validate_complex,
    validate_finite,
    warn,
)

logger = get_logger(__name__)

# Gauss-Legendre nodes per chord in the area oracle
ORACLE_CHORD_NODES = 24


# =============================================================================
# Hydrodynamic singularities
# =============================================================================

class SingularityKind(Enum):
    SOURCE_SINK = "source_sink"
    DIPOLE = "dipole"
    QUADRUPOLE = "quadrupole"


# Pole order of the singularity's reflected image in d/dζ F(f(ζ))
_POLE_ORDER = {
    SingularityKind.SOURCE_SINK: 1,
    SingularityKind.DIPOLE: 2,
    SingularityKind.QUADRUPOLE: 3,
}


@dataclass(frozen=True)
class HydroSingularity:
    """A source/sink q, dipole μ or quadrupole β at a point of the domain."""

    kind: SingularityKind
    strength: float
    position: complex

    def __post_init__(self):
        validate_finite(self.strength, f"{self.kind.value} strength")
        if self.strength == 0:
            raise InputValidationError(f"{self.kind.value} strength must be nonzero")
        object.__setattr__(self, "strength", float(self.strength))
        object.__setattr__(self, "position", validate_complex(self.position, "singularity position"))

    @classmethod
    def source(cls, q: float, position: complex) -> "HydroSingularity":
        """Source (q > 0) or sink (q < 0)."""
        return cls(SingularityKind.SOURCE_SINK, q, position)

    @classmethod
    def dipole(cls, mu: float, position: complex) -> "HydroSingularity":
        return cls(SingularityKind.DIPOLE, mu, position)

    @classmethod
    def quadrupole(cls, beta: float, position: complex) -> "HydroSingularity":
        return cls(SingularityKind.QUADRUPOLE, beta, position)


def check_balanced(singularities: Sequence[HydroSingularity]) -> None:
    """
    Raise FeasibilityError unless the net source strength vanishes.

    A stationary domain cannot change its area, so Σ q_j must be zero.
    """
    strengths = [s.strength for s in singularities if s.kind is SingularityKind.SOURCE_SINK]
    net = math.fsum(strengths)
    if strengths and abs(net) > 1e-12 * max(abs(q) for q in strengths):
        raise FeasibilityError(f"net source strength {net:.6g} is not zero")


# =============================================================================
# Test functions
# =============================================================================

@dataclass(frozen=True)
class TestFunction:
    """An analytic test function U with its first two derivatives."""

    __test__ = False

    label: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    second: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def monomial(cls, k: int, center: complex = 0.0, radius: float = 1.0) -> "TestFunction":
        """U(z) = ((z − center)/radius)^k."""
        if k < 0:
            raise InputValidationError(f"monomial degree must be non-negative, got {k}")

        def value(z):
            return ((np.asarray(z, dtype=complex) - center) / radius) ** k

        def derivative(z):
            if k == 0:
                return np.zeros_like(np.asarray(z, dtype=complex))
            return k / radius * ((np.asarray(z, dtype=complex) - center) / radius) ** (k - 1)

        def second(z):
            if k < 2:
                return np.zeros_like(np.asarray(z, dtype=complex))
            return k * (k - 1) / radius ** 2 * ((np.asarray(z, dtype=complex) - center) / radius) ** (k - 2)

        return cls(f"U{k}", value, derivative, second)


def monomial_family(boundary: BoundaryCurve, size: int) -> List[TestFunction]:
    """Monomials k = 1..size centred on the sample centroid and scaled by the boundary radius."""
    center = complex(boundary.points.mean())
    radius = boundary.scale or 1.0
    return [TestFunction.monomial(k, center, radius) for k in range(1, size + 1)]


# =============================================================================
# Moment functional
# =============================================================================

def _charge_windings(boundary: BoundaryCurve, field_spec: FieldSpec) -> np.ndarray:
    positions = np.array([c.position for c in field_spec.charges])
    collar = get_config().moments.boundary_collar * max(boundary.scale, 1.0)
    for position in positions:
        gap = float(np.min(np.abs(boundary.points - position)))
        if gap <= collar:
            warn(f"charge at {position} lies within {gap:.2e} of the boundary", IllConditionedWarning)
    return winding_number(boundary.points, positions)


def moment_integral(boundary: BoundaryCurve, field_spec: FieldSpec, test: TestFunction) -> complex:
    """
    J(U) = ∫_D ω̄ U' dA through its boundary form.

    Point-charge fields use the ω̄ contour integral with the interior
    charge sum weighted by the boundary's winding number about each charge;
    other fields use −i∮ G U' dz.

    Raises:
        DomainError: If a charge lies on a boundary sample.
    """
    weight = 2.0 * math.pi / boundary.n
    z = boundary.points
    dz = boundary.tangents

    if not field_spec.is_harmonic:
        potential = eval_potential(field_spec, z)
        return complex(-1j * weight * np.sum(potential * test.derivative(z) * dz))

    omega_bar = np.conj(eval_omega(field_spec, z))
    contour = 0.5j * weight * np.sum(omega_bar * test.value(z) * np.conj(dz))

    windings = _charge_windings(boundary, field_spec)
    interior = 0.0j
    for charge, w in zip(field_spec.charges, windings):
        if w:
            interior += w * 0.5 * charge.strength * complex(test.value(charge.position))
    return complex(contour - interior)


@dataclass(frozen=True)
class ResidualReport:
    """Per-test residuals of the moment identity and the resulting verdict."""

    residuals: Tuple[Tuple[str, complex], ...]
    max_abs_residual: float
    scale: float
    tolerance: float
    verdict: bool

    def __post_init__(self):
        if self.verdict != (self.max_abs_residual <= self.tolerance * self.scale):
            raise InputValidationError("verdict inconsistent with residual and tolerance")

    @property
    def relative_residual(self) -> float:
        return self.max_abs_residual / self.scale


def _prediction(test: TestFunction, singularities: Sequence[HydroSingularity]) -> complex:
    """Right-hand side −Σ q U(z_i) + μ U'(z_d) − (β/2) U''(z_q)."""
    total = 0.0j
    for s in singularities:
        if s.kind is SingularityKind.SOURCE_SINK:
            total -= s.strength * complex(test.value(s.position))
        elif s.kind is SingularityKind.DIPOLE:
            total += s.strength * complex(test.derivative(s.position))
        else:
            total -= 0.5 * s.strength * complex(test.second(s.position))
    return total


def check_equilibrium(
    boundary: BoundaryCurve,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity],
    family_size: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> ResidualReport:
    """
    Verify the moment identity on a family of centred, scaled monomials.

    Args:
        boundary: Boundary of the candidate equilibrium domain.
        field_spec: External field.
        singularities: Hydrodynamic singularities (net source strength zero).
        family_size: Number of test monomials (default 12).
        tolerance: Relative tolerance (default 1e-8).

    Returns:
        ResidualReport; the verdict compares the largest residual with
        tolerance × scale, scale being the largest |J| or right-hand side.

    Raises:
        FeasibilityError: If the sources are not balanced.
    """
    config = get_config().moments
    family_size = config.test_family_size if family_size is None else family_size
    tolerance = config.tolerance if tolerance is None else tolerance
    check_balanced(singularities)

    residuals = []
    magnitudes = []
    for test in monomial_family(boundary, family_size):
        j_value = moment_integral(boundary, field_spec, test)
        rhs = _prediction(test, singularities)
        residuals.append((test.label, j_value - rhs))
        magnitudes.append(max(abs(j_value), abs(rhs)))

    max_residual = max(abs(r) for _, r in residuals)
    scale = max(max(magnitudes), np.finfo(float).tiny)
    verdict = max_residual <= tolerance * scale
    logger.info(
        "Moment identity: max residual %.3e (scale %.3e, %s)",
        max_residual, scale, "pass" if verdict else "fail",
    )
    return ResidualReport(tuple(residuals), max_residual, scale, tolerance, verdict)


# =============================================================================
# Feasibility and the transformed domain
# =============================================================================

def _require_harmonic(field_spec: FieldSpec) -> None:
    if not field_spec.is_harmonic:
        raise UnsupportedScenarioError(f"{field_spec.kind.value} fields have no complex potential")


def feasibility(field_spec: FieldSpec, singularities: Sequence[HydroSingularity]) -> complex:
    """
    Area of the transformed domain F(D) predicted from the data,
    −Σ q_j F(z_j) + μ F'(z_d) − (β/2) F''(z_q).

    A physical configuration needs a real positive value; the caller
    compares the imaginary part with the real part.
    """
    _require_harmonic(field_spec)
    total = 0.0j
    for s in singularities:
        if s.kind is SingularityKind.SOURCE_SINK:
            total -= s.strength * eval_F(field_spec, s.position)
        elif s.kind is SingularityKind.DIPOLE:
            total += s.strength * eval_omega(field_spec, s.position)
        else:
            total -= 0.5 * s.strength * eval_omega_prime(field_spec, s.position)
    return complex(total)


def _continued_potential(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    zeta_path: np.ndarray,
) -> np.ndarray:
    """F(f(ζ)) along a path starting at ζ = 0, each log term continued from its principal value at f(0)."""
    z = conformal_map.evaluate(zeta_path)
    total = np.zeros(z.shape, dtype=complex)
    for charge in field_spec.charges:
        offset = z - charge.position
        phase = np.unwrap(np.angle(offset))
        total += charge.strength / TWO_PI * (np.log(np.abs(offset)) + 1j * phase)
    return total


def _ray(zeta: complex, steps: int = 257) -> np.ndarray:
    return np.linspace(0.0, 1.0, steps) * zeta


def transformed_boundary(conformal_map: ConformalMap, field_spec: FieldSpec, n: int) -> np.ndarray:
    """
    Samples of w = F(f(e^{iφ})) on the branch continued from f(0).

    Raises:
        ReductionInapplicableError: If a log term fails to close around the
            circle, i.e. a charge lies inside D and F is multivalued there.
    """
    _require_harmonic(field_spec)
    ray = _ray(1.0 + 0.0j)
    circle = circle_points(n)
    path = np.concatenate((ray, circle[1:], circle[:1]))
    values = _continued_potential(conformal_map, field_spec, path)
    closure = abs(values[-1] - values[len(ray) - 1])
    if closure > 1e-8 * max(1.0, float(np.max(np.abs(values)))):
        raise ReductionInapplicableError("F is multivalued on the domain (a charge lies inside)")
    return values[len(ray) - 1:-1]


def _continued_at(conformal_map: ConformalMap, field_spec: FieldSpec, position: complex) -> complex:
    zeta = invert_map(conformal_map, position)
    return complex(_continued_potential(conformal_map, field_spec, _ray(zeta))[-1])


def transformed_moments(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity],
    order: int,
    n: Optional[int] = None,
) -> List[Tuple[complex, complex]]:
    """
    Moments M_k = ∫_{F(D)} w^k dA, k = 0..order, against their prediction.

    Computed as (1/2i)∮ w^k w̄ dw over the image curve; the prediction is
    −Σ q Ũ(z_j) + μ Ũ'(z_d) − (β/2) Ũ''(z_q) with Ũ = F^{k+1}/(k+1).

    Returns:
        [(computed M_k, predicted M_k), ...]

    Raises:
        ReductionInapplicableError: If F is not univalent on D.
    """
    n = get_config().spectral.default_grid if n is None else n
    if order < 0:
        raise InputValidationError(f"moment order must be non-negative, got {order}")

    image = BoundaryCurve.from_samples(transformed_boundary(conformal_map, field_spec, n))
    verdict = check_curve_univalence(image)
    if not verdict.univalent:
        raise ReductionInapplicableError(
            f"F is not univalent on the domain ({verdict.failure.kind.value})"
        )

    data = []
    for s in singularities:
        data.append((
            s,
            _continued_at(conformal_map, field_spec, s.position),
            complex(eval_omega(field_spec, s.position)),
            complex(eval_omega_prime(field_spec, s.position)),
        ))

    weight = 2.0 * math.pi / n
    w = image.points
    results = []
    for k in range(order + 1):
        computed = complex(weight * np.sum(w ** k * np.conj(w) * image.tangents) / 2j)
        predicted = 0.0j
        for s, F, dF, d2F in data:
            if s.kind is SingularityKind.SOURCE_SINK:
                predicted -= s.strength * F ** (k + 1) / (k + 1)
            elif s.kind is SingularityKind.DIPOLE:
                predicted += s.strength * F ** k * dF
            else:
                second = (k * F ** (k - 1) * dF * dF if k else 0.0) + F ** k * d2F
                predicted -= 0.5 * s.strength * second
        results.append((computed, predicted))
    return results


# =============================================================================
# Rationality of d/dζ F(f(ζ))
# =============================================================================

def _pole_structure(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity],
    boundary: BoundaryCurve,
) -> Tuple[np.ndarray, int]:
    """Denominator polynomial (lowest degree first) and the allowed numerator degree."""
    roots: List[complex] = []
    degree_at_infinity = -2

    windings = winding_number(boundary.points, np.array([c.position for c in field_spec.charges]))
    for charge, w in zip(field_spec.charges, windings):
        if not w:
            continue
        zeta = invert_map(conformal_map, charge.position)
        roots.append(zeta)
        if abs(zeta) < 1e-12:
            degree_at_infinity = max(degree_at_infinity, -1)
        else:
            roots.append(1.0 / np.conj(zeta))

    for s in singularities:
        try:
            zeta = invert_map(conformal_map, s.position)
        except DomainError:
            raise UnsupportedScenarioError(f"singularity at {s.position} is not inside the domain")
        order = _POLE_ORDER[s.kind]
        if abs(zeta) < 1e-12:
            degree_at_infinity = max(degree_at_infinity, order - 2)
        else:
            roots.extend([1.0 / np.conj(zeta)] * order)

    denominator = np.polynomial.polynomial.polyfromroots(roots) if roots else np.array([1.0 + 0j])
    return denominator, len(roots) + degree_at_infinity


def _numerator_series(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity],
    n: Optional[int],
):
    _require_harmonic(field_spec)
    n = get_config().spectral.default_grid if n is None else n
    boundary = sample_boundary(conformal_map, n)
    denominator, allowed = _pole_structure(conformal_map, field_spec, singularities, boundary)

    zeta = circle_points(n)
    derivative = eval_omega(field_spec, boundary.points) * conformal_map.derivative(zeta)
    product = np.polynomial.polynomial.polyval(zeta, denominator) * derivative
    return fourier_series(CircleGrid(product)), allowed


def rationality_check(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity] = (),
    n: Optional[int] = None,
) -> float:
    """
    Relative defect of d/dζ F(f(ζ)) from the rational form its pole data allow.

    The sampled derivative is multiplied by the denominator built from the
    preimages of interior charges (and their reflections) and from the
    reflected singularity preimages; for a true equilibrium the product is a
    polynomial of known degree. The defect is the norm of the Fourier
    content outside that degree range over the total norm.

    Raises:
        UnsupportedScenarioError: If the field has no complex potential or a
            singularity cannot be located inside the domain.
    """
    series, allowed = _numerator_series(conformal_map, field_spec, singularities, n)
    c = series.coefficients
    total = float(np.linalg.norm(c))
    if total == 0.0:
        return 0.0
    j = series.frequencies
    outside = (j < 0) | (j > allowed)
    defect = float(np.linalg.norm(c[outside])) / total
    logger.debug("Rationality defect %.3e (numerator degree <= %d)", defect, allowed)
    return defect


def rational_numerator(
    conformal_map: ConformalMap,
    field_spec: FieldSpec,
    singularities: Sequence[HydroSingularity] = (),
    n: Optional[int] = None,
) -> np.ndarray:
    """Coefficients (lowest degree first) of the numerator polynomial within its allowed degree."""
    series, allowed = _numerator_series(conformal_map, field_spec, singularities, n)
    return np.array([series.coefficient(j) for j in range(max(allowed, -1) + 1)])


# =============================================================================
# Cauchy transform and the area oracle
# =============================================================================

def cauchy_transform(boundary: BoundaryCurve, w):
    """
    Exterior Cauchy transform χ(w) = ∫_D dA/(π(w − z)) = (1/2πi)∮ z̄ dz/(w − z).

    Args:
        boundary: Positively oriented boundary.
        w: Point(s) outside the closed domain.
    """
    scalar = np.isscalar(w)
    ws = np.atleast_1d(np.asarray(w, dtype=complex))
    weight = 2.0 * math.pi / boundary.n
    z = boundary.points
    density = np.conj(z) * boundary.tangents
    values = np.array([np.sum(density / (wk - z)) for wk in ws]) * weight / (2j * math.pi)
    return complex(values[0]) if scalar else values


def _hermite_row_crossings(boundary: BoundaryCurve, y: float) -> np.ndarray:
    """Abscissae where the row Im z = y crosses the boundary, on cubic Hermite arcs."""
    z0 = boundary.points
    z1 = np.roll(z0, -1)
    h = 2.0 * math.pi / boundary.n
    m0 = h * boundary.tangents
    m1 = np.roll(m0, -1)

    crosses = (z0.imag - y) * (z1.imag - y) < 0
    if not np.any(crosses):
        return np.empty(0)
    z0, z1, m0, m1 = z0[crosses], z1[crosses], m0[crosses], m1[crosses]

    def arc(t):
        t2, t3 = t * t, t * t * t
        return (2 * t3 - 3 * t2 + 1) * z0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * z1 + (t3 - t2) * m1

    def slope(t):
        t2 = t * t
        return (6 * t2 - 6 * t) * z0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * z1 + (3 * t2 - 2 * t) * m1

    t = (y - z0.imag) / (z1.imag - z0.imag)
    for _ in range(6):
        d = slope(t).imag
        step = np.where(d != 0, (arc(t).imag - y) / np.where(d != 0, d, 1.0), 0.0)
        t = np.clip(t - step, 0.0, 1.0)
    return np.sort(arc(t).real)


def area_moment_oracle(
    boundary: BoundaryCurve,
    field_spec: FieldSpec,
    test: TestFunction,
    grid: Optional[int] = None,
) -> complex:
    """
    ∫_D ω̄ U' dA by dense quadrature over the domain.

    Rows are Gauss-Legendre nodes in y (split at interior charge ordinates);
    each row is cut at its boundary crossings and the chords inside D are
    integrated with Gauss-Legendre in x. Accuracy is spectral for charges
    outside D and degrades near interior charges.
    """
    _require_harmonic(field_spec)
    grid = get_config().moments.oracle_grid if grid is None else grid
    ymin, ymax = float(boundary.points.imag.min()), float(boundary.points.imag.max())

    cuts = sorted({ymin, ymax} | {c.position.imag for c in field_spec.charges if ymin < c.position.imag < ymax})
    per_piece = max(8, grid // (len(cuts) - 1))
    chord_x, chord_w = np.polynomial.legendre.leggauss(ORACLE_CHORD_NODES)

    total = 0.0j
    for lower, upper in zip(cuts[:-1], cuts[1:]):
        ny, wy = np.polynomial.legendre.leggauss(per_piece)
        rows = 0.5 * (upper - lower) * (ny + 1.0) + lower
        weights = 0.5 * (upper - lower) * wy
        for y, row_weight in zip(rows, weights):
            xs = _hermite_row_crossings(boundary, float(y))
            if len(xs) < 2:
                continue
            chords = xs[: len(xs) // 2 * 2].reshape(-1, 2)
            half = 0.5 * (chords[:, 1] - chords[:, 0])
            mid = 0.5 * (chords[:, 1] + chords[:, 0])
            x = (mid[:, None] + half[:, None] * chord_x[None, :]).ravel()
            z = x + 1j * y
            integrand = np.conj(eval_omega(field_spec, z)) * test.derivative(z)
            total += row_weight * np.sum(integrand * (half[:, None] * chord_w[None, :]).ravel())
    return complex(total)
