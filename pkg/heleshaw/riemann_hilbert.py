"""
Equilibrium shapes in non-harmonic external fields.

On the boundary of an equilibrium domain the velocity potential W equals
the external potential G. Pulled back to the disk, Θ(ζ) = W(f(ζ)) is real
on |ζ| = 1 and extends to the whole plane by reflection, so for a dipole
at f(0) it is fixed up to two real numbers:

    Θ(ζ) = α(ζ + 1/ζ) + β.

The boundary relation G(f, f̄) = Θ then becomes a linear Riemann-Hilbert
problem for the unknown map, solved by splitting boundary data into the
parts analytic inside and outside the circle:

    unidirectional  G = H(x):          f = 2·plus[H⁻¹(Θ)]
    axisymmetric    G = H(x² + y²):    f = exp(plus[ln H⁻¹(Θ)])
    composed        G = H(Re Ξ(z)):    f = Ξ⁻¹(2·plus[H⁻¹(Θ)])

The dipole location and strength follow from the series at ζ = 0:
f(0) is the location and μ = α f'(0). They are evaluated by Gauss-Legendre
quadrature over the half circle, which is where the (α, β) solves happen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import interpolate

from .config import get_config
from .field import (
    FieldKind,
    FieldSpec,
    HarmonicCore,
    CoreKind,
    MonotoneProfile,
    TWO_PI,
    conformal_coordinate_1d,
    conformal_coordinate_radial,
    eval_potential,
)
from .geometry import BoundaryCurve, ConformalMap, winding_number
from .logging_config import get_logger
from .moments import HydroSingularity, SingularityKind
from .spectral import (
    CircleGrid,
    FourierSeries,
    cauchy_projection,
    circle_points,
    find_root_2d,
    fourier_series,
    gauss_legendre_half_circle,
)
from .validation import (
    AssumptionViolatedError,
    BranchError,
    ConvergenceError,
    DomainError,
    InputValidationError,
    InvalidParametersError,
    UnsupportedScenarioError,
    validate_finite,
    validate_positive,
)

logger = get_logger(__name__)

# Doubling the grid must shrink the Fourier tail at least this much,
# otherwise the data is taken to be only algebraically smooth
GEOMETRIC_GAIN = 0.125

# Radii sampled when checking that Z avoids the square-root cut
BRANCH_RADII = 33

# Nodes of the interpolated profile of a curved cell
EFFECTIVE_PROFILE_NODES = 257


# =============================================================================
# Θ functions
# =============================================================================

class ThetaForm(Enum):
    DIPOLE_PAIR = "dipole_pair"
    GENERAL_LOG = "general_log"


@dataclass(frozen=True)
class ThetaFunction:
    """
    Θ(ζ), real on the unit circle and symmetric under ζ → 1/ζ̄.

    DIPOLE_PAIR: α(ζ + 1/ζ) + β; α and β may be left unset until a
    parameter solve fixes them.
    GENERAL_LOG: Σ q_j/2π [ln(ζ − ζ_j) + ln(1/ζ − ζ̄_j)] for sources q_j at
    disk points ζ_j.
    """

    form: ThetaForm
    alpha: Optional[float] = None
    beta: Optional[float] = None
    sources: Tuple[Tuple[float, complex], ...] = ()

    def __post_init__(self):
        if self.form is ThetaForm.DIPOLE_PAIR:
            if self.sources:
                raise InputValidationError("a dipole-pair Θ takes no sources")
            if (self.alpha is None) != (self.beta is None):
                raise InputValidationError("α and β are set together")
            if self.alpha is not None:
                object.__setattr__(self, "alpha", float(validate_finite(self.alpha, "alpha")))
                object.__setattr__(self, "beta", float(validate_finite(self.beta, "beta")))
            return

        if self.alpha is not None or self.beta is not None:
            raise InputValidationError("a logarithmic Θ has no α, β parameters")
        checked = []
        for q, position in self.sources:
            position = complex(validate_finite(position, "source position"))
            if abs(position) >= 1.0:
                raise DomainError(f"source image {position} is not inside the unit disk")
            checked.append((float(validate_finite(q, "source strength")), position))
        object.__setattr__(self, "sources", tuple(checked))

    @classmethod
    def dipole_pair(cls, alpha: Optional[float] = None, beta: Optional[float] = None) -> "ThetaFunction":
        return cls(ThetaForm.DIPOLE_PAIR, alpha=alpha, beta=beta)

    @classmethod
    def general_log(cls, sources: Sequence[Tuple[float, complex]]) -> "ThetaFunction":
        return cls(ThetaForm.GENERAL_LOG, sources=tuple(sources))

    @property
    def is_free(self) -> bool:
        return self.form is ThetaForm.DIPOLE_PAIR and self.alpha is None

    def with_parameters(self, alpha: float, beta: float) -> "ThetaFunction":
        if self.form is not ThetaForm.DIPOLE_PAIR:
            raise InputValidationError("only a dipole-pair Θ has α, β parameters")
        return ThetaFunction.dipole_pair(alpha, beta)

    def evaluate(self, zeta):
        scalar = np.isscalar(zeta)
        z = np.asarray(zeta, dtype=complex)
        if np.any(z == 0):
            raise DomainError("Θ has a pole or branch point at ζ = 0")
        if self.form is ThetaForm.DIPOLE_PAIR:
            if self.is_free:
                raise InputValidationError("α and β of this Θ are not fixed yet")
            values = self.alpha * (z + 1.0 / z) + self.beta
        else:
            values = np.zeros(z.shape, dtype=complex)
            for q, position in self.sources:
                values += q / TWO_PI * (np.log(z - position) + np.log(1.0 / z - np.conj(position)))
        return values.item() if scalar else values

    def derivative(self, zeta):
        scalar = np.isscalar(zeta)
        z = np.asarray(zeta, dtype=complex)
        if self.form is ThetaForm.DIPOLE_PAIR:
            if self.is_free:
                raise InputValidationError("α and β of this Θ are not fixed yet")
            values = self.alpha * (1.0 - 1.0 / (z * z))
        else:
            values = np.zeros(z.shape, dtype=complex)
            for q, position in self.sources:
                values += q / TWO_PI * (1.0 / (z - position) - 1.0 / (z * (1.0 - np.conj(position) * z)))
        return values.item() if scalar else values

    def on_circle(self, n: int) -> np.ndarray:
        """Real values of Θ at the n circle nodes."""
        return np.real(self.evaluate(circle_points(n)))


def build_theta(singularities: Sequence[HydroSingularity]) -> ThetaFunction:
    """
    Θ for singularities given by their images in the unit disk.

    A single dipole must sit at ζ = 0 and gives a free dipole-pair Θ;
    sources and sinks give the logarithmic form.

    Raises:
        DomainError: If an image is not strictly inside the disk.
        UnsupportedScenarioError: For quadrupoles, off-centre dipoles or
            dipoles mixed with sources.
    """
    for s in singularities:
        if abs(complex(s.position)) >= 1.0:
            raise DomainError(f"singularity image {s.position} is not inside the unit disk")

    kinds = {s.kind for s in singularities}
    if kinds == {SingularityKind.DIPOLE} and len(singularities) == 1:
        if singularities[0].position != 0:
            raise UnsupportedScenarioError("the dipole must be mapped to ζ = 0")
        return ThetaFunction.dipole_pair()
    if singularities and kinds == {SingularityKind.SOURCE_SINK}:
        return ThetaFunction.general_log([(s.strength, complex(s.position)) for s in singularities])
    raise UnsupportedScenarioError(
        "Θ is built for one dipole at the centre or for sources and sinks only"
    )


# =============================================================================
# Solutions
# =============================================================================

class RHKind(Enum):
    UNIDIRECTIONAL = "unidirectional"
    AXISYMMETRIC = "axisymmetric"
    COMPOSED = "composed"


@dataclass(frozen=True, eq=False)
class RHSolution:
    """
    A converged Riemann-Hilbert equilibrium.

    boundary holds the node values of the map on the grid the problem was
    solved on; location and mu are the dipole data the parameters
    reproduce (x₀, r₀ or a).
    """

    kind: RHKind
    field_spec: FieldSpec
    theta: ThetaFunction
    conformal_map: ConformalMap
    boundary: BoundaryCurve
    location: float
    mu: float

    @property
    def alpha(self) -> float:
        return self.theta.alpha

    @property
    def beta(self) -> float:
        return self.theta.beta

    @property
    def ratio(self) -> float:
        """B = β/α."""
        return self.theta.beta / self.theta.alpha

    @property
    def n(self) -> int:
        return self.boundary.n

    def singularities(self) -> List[HydroSingularity]:
        """The dipole as it enters the moment identity (strength 2πμ)."""
        return [HydroSingularity.dipole(TWO_PI * self.mu, self.location)]

    def boundary_residual(self) -> float:
        """max |G(f) − Θ| over the grid nodes."""
        potential = eval_potential(self.field_spec, self.boundary.points)
        return float(np.max(np.abs(potential - self.theta.on_circle(self.n))))

    def dipole_defect(self) -> float:
        """max(|f(0) − location|, |μ/f'(0) − α|) from the map's series."""
        coefficients = self.conformal_map.coefficients
        return max(
            abs(coefficients[0] - self.location),
            abs(self.mu / coefficients[1] - self.alpha),
        )


# =============================================================================
# Boundary data and grids
# =============================================================================

def _inverse_data(profile: MonotoneProfile, theta_values: np.ndarray) -> np.ndarray:
    try:
        return np.asarray(profile.inverse(theta_values), dtype=float)
    except DomainError as e:
        raise InvalidParametersError(f"Θ leaves the range of the profile: {e}") from e


def _log_data(values: np.ndarray) -> np.ndarray:
    if np.any(values <= 0):
        raise InvalidParametersError(
            f"H⁻¹(Θ) must be positive for the logarithmic problem, minimum {float(np.min(values)):.6g}"
        )
    return np.log(values)


def _resolved_grid(sample: Callable[[int], np.ndarray], n: Optional[int]) -> CircleGrid:
    """
    Boundary data on the smallest doubling of n that resolves its Fourier series.

    Doubling stops at the configured maximum or when the tail stops
    decaying geometrically.
    """
    spectral = get_config().spectral
    n = spectral.default_grid if n is None else n
    grid = CircleGrid(sample(n))
    tail = fourier_series(grid).tail_ratio()
    while tail > spectral.tail_tolerance and grid.n < spectral.max_grid:
        finer = CircleGrid(sample(2 * grid.n))
        finer_tail = fourier_series(finer).tail_ratio()
        if finer_tail > GEOMETRIC_GAIN * tail:
            logger.debug("Tail %.2e -> %.2e at n=%d: data not analytic across the circle", tail, finer_tail, finer.n)
            break
        logger.debug("Boundary data tail %.2e at n=%d, doubling", tail, grid.n)
        grid, tail = finer, finer_tail
    return grid


def _doubled_plus(grid: CircleGrid) -> FourierSeries:
    """2·plus[g]: the analytic function whose real part on the circle is g."""
    plus, _ = cauchy_projection(grid)
    return FourierSeries(2.0 * plus.coefficients)


def _gauss_legendre_theta(alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    phi, weights = gauss_legendre_half_circle(get_config().riemann_hilbert.gauss_legendre_nodes)
    return phi, weights, 2.0 * alpha * np.cos(phi) + beta


def _check_dipole_pair(alpha: float, beta: float) -> Tuple[float, float]:
    alpha = validate_positive(alpha, "alpha")
    beta = float(validate_finite(beta, "beta"))
    return alpha, beta


def _square_default(profile: Optional[MonotoneProfile]) -> MonotoneProfile:
    return MonotoneProfile.square() if profile is None else profile


# =============================================================================
# Dipole data from (α, β)
# =============================================================================

def unidirectional_parameters(
    alpha: float,
    beta: float,
    profile: Optional[MonotoneProfile] = None,
) -> Tuple[float, float]:
    """
    (x₀, μ) of the unidirectional solution with Θ = α(ζ + 1/ζ) + β.

    x₀ = (1/π)∫₀^π g dφ and f'(0) = (2/π)∫₀^π g cos φ dφ with
    g = H⁻¹(2α cos φ + β); H defaults to x².
    """
    alpha, beta = _check_dipole_pair(alpha, beta)
    phi, weights, theta = _gauss_legendre_theta(alpha, beta)
    g = _inverse_data(_square_default(profile), theta)
    x0 = float(weights @ g) / math.pi
    slope = 2.0 * float(weights @ (g * np.cos(phi))) / math.pi
    return x0, alpha * slope


def axisymmetric_parameters(
    alpha: float,
    beta: float,
    profile: Optional[MonotoneProfile] = None,
) -> Tuple[float, float]:
    """
    (r₀, μ) of the axisymmetric solution; H acts on the squared radius and
    defaults to the identity.
    """
    alpha, beta = _check_dipole_pair(alpha, beta)
    phi, weights, theta = _gauss_legendre_theta(alpha, beta)
    profile = MonotoneProfile.identity() if profile is None else profile
    log_g = _log_data(_inverse_data(profile, theta))
    r0 = math.exp(0.5 * float(weights @ log_g) / math.pi)
    slope = r0 * float(weights @ (log_g * np.cos(phi))) / math.pi
    return r0, alpha * slope


def composed_parameters(
    alpha: float,
    beta: float,
    core: Optional[HarmonicCore] = None,
    profile: Optional[MonotoneProfile] = None,
) -> Tuple[float, float]:
    """
    (a, μ) of the composed solution f = Ξ⁻¹(Z): a = Ξ⁻¹(Z(0)) and
    f'(0) = Z'(0)/Ξ'(a). Defaults: Ξ = z²/2, H = x².
    """
    core = HarmonicCore(CoreKind.HALF_SQUARE) if core is None else core
    z0, z_slope = unidirectional_parameters(alpha, beta, profile)
    z_slope /= alpha
    a = complex(core.inverse(z0))
    if abs(a.imag) > 1e-12 * abs(a):
        raise BranchError(f"Ξ⁻¹(Z(0)) = {a} is not on the real axis")
    slope = z_slope / complex(core.derivative(a)).real
    return a.real, alpha * slope


# =============================================================================
# Constructing solutions from (α, β)
# =============================================================================

def construct_unidirectional(
    alpha: float,
    beta: float,
    profile: Optional[MonotoneProfile] = None,
    n: Optional[int] = None,
) -> RHSolution:
    """
    Solution of H(Re f) = α(ζ + 1/ζ) + β on the circle.

    Raises:
        InvalidParametersError: If Θ leaves the range of H.
    """
    alpha, beta = _check_dipole_pair(alpha, beta)
    profile = _square_default(profile)
    theta = ThetaFunction.dipole_pair(alpha, beta)
    x0, mu = unidirectional_parameters(alpha, beta, profile)

    grid = _resolved_grid(lambda m: _inverse_data(profile, theta.on_circle(m)), n)
    series = _doubled_plus(grid)
    boundary = BoundaryCurve(series.at_nodes(), series.derivative_at_nodes())
    conformal_map = ConformalMap.numeric(series.taylor(), label=f"unidirectional B={beta / alpha:.6g}")

    logger.info("Unidirectional solution: alpha=%.6g beta=%.6g x0=%.10g mu=%.10g (n=%d)", alpha, beta, x0, mu, grid.n)
    return RHSolution(RHKind.UNIDIRECTIONAL, FieldSpec.unidirectional(profile), theta, conformal_map, boundary, x0, mu)


def construct_axisymmetric(
    alpha: float,
    beta: float,
    profile: Optional[MonotoneProfile] = None,
    n: Optional[int] = None,
) -> RHSolution:
    """
    Solution of H(|f|²) = Θ on the circle with the symmetry axis outside D.

    Raises:
        InvalidParametersError: If H⁻¹(Θ) is not positive on the circle.
        AssumptionViolatedError: If the boundary winds around the origin.
    """
    alpha, beta = _check_dipole_pair(alpha, beta)
    profile = MonotoneProfile.identity() if profile is None else profile
    theta = ThetaFunction.dipole_pair(alpha, beta)
    r0, mu = axisymmetric_parameters(alpha, beta, profile)

    grid = _resolved_grid(lambda m: _log_data(_inverse_data(profile, theta.on_circle(m))), n)
    log_map, _ = cauchy_projection(grid)
    points = np.exp(log_map.at_nodes())
    boundary = BoundaryCurve(points, points * log_map.derivative_at_nodes())

    if winding_number(boundary.points, 0.0) != 0:
        raise AssumptionViolatedError("axisymmetric boundary winds around the symmetry axis")

    conformal_map = ConformalMap.from_boundary_values(points, label=f"axisymmetric B={beta / alpha:.6g}")
    logger.info("Axisymmetric solution: alpha=%.6g beta=%.6g r0=%.10g mu=%.10g (n=%d)", alpha, beta, r0, mu, grid.n)
    return RHSolution(RHKind.AXISYMMETRIC, FieldSpec.axisymmetric(profile), theta, conformal_map, boundary, r0, mu)


def _check_branch(series: FourierSeries) -> None:
    """Z must stay off (−∞, 0] on the closed disk for the principal √(2Z)."""
    n = series.n
    radii = np.linspace(0.0, 1.0, BRANCH_RADII)
    powers = np.zeros(n)
    powers[: n // 2] = np.arange(n // 2)
    scaled = series.coefficients[None, :] * radii[:, None] ** powers[None, :]
    values = np.fft.ifft(scaled, axis=1) * n
    if np.any(values == 0):
        raise BranchError("Z vanishes in the disk")
    angles = np.unwrap(np.angle(values), axis=0)
    if np.any(np.abs(angles) >= math.pi):
        raise BranchError("Z crosses the branch cut of the square root")


def construct_composed(
    alpha: float,
    beta: float,
    core: Optional[HarmonicCore] = None,
    profile: Optional[MonotoneProfile] = None,
    n: Optional[int] = None,
) -> RHSolution:
    """
    Solution of H(Re Ξ(f)) = Θ: Z = 2·plus[H⁻¹(Θ)], f = Ξ⁻¹(Z).

    Raises:
        BranchError: If Z reaches the cut of Ξ⁻¹ (half-square core).
    """
    alpha, beta = _check_dipole_pair(alpha, beta)
    core = HarmonicCore(CoreKind.HALF_SQUARE) if core is None else core
    profile = _square_default(profile)
    theta = ThetaFunction.dipole_pair(alpha, beta)
    a, mu = composed_parameters(alpha, beta, core, profile)

    grid = _resolved_grid(lambda m: _inverse_data(profile, theta.on_circle(m)), n)
    z_series = _doubled_plus(grid)
    if core.kind is CoreKind.HALF_SQUARE:
        _check_branch(z_series)

    points = core.inverse(z_series.at_nodes())
    tangents = z_series.derivative_at_nodes() / core.derivative(points)
    boundary = BoundaryCurve(points, tangents)
    conformal_map = ConformalMap.from_boundary_values(points, label=f"composed B={beta / alpha:.6g}")

    logger.info("Composed solution: alpha=%.6g beta=%.6g a=%.10g mu=%.10g (n=%d)", alpha, beta, a, mu, grid.n)
    return RHSolution(RHKind.COMPOSED, FieldSpec.composed(profile, core), theta, conformal_map, boundary, a, mu)


# =============================================================================
# Solving for (α, β) from the dipole data
# =============================================================================

def _solve_dipole_pair(
    parameters: Callable[[float, float], Tuple[float, float]],
    location: float,
    mu: float,
) -> Tuple[float, float]:
    """(α, β) reproducing (location, μ); Newton runs in (ln α, β)."""
    rh = get_config().riemann_hilbert
    alpha0 = rh.initial_alpha_factor * mu
    guess = (math.log(alpha0), rh.initial_ratio * alpha0)

    def residual(x: np.ndarray) -> np.ndarray:
        got_location, got_mu = parameters(math.exp(x[0]), x[1])
        return np.array([(got_location - location) / abs(location), (got_mu - mu) / mu])

    try:
        log_alpha, beta = find_root_2d(residual, guess)
    except ConvergenceError as e:
        raise ConvergenceError(f"no (α, β) found for location={location}, μ={mu}: {e}") from e
    return math.exp(log_alpha), beta


def solve_unidirectional(
    profile: MonotoneProfile,
    x0: float,
    mu: float,
    n: Optional[int] = None,
) -> RHSolution:
    """
    Equilibrium in the field G = H(x) with a dipole μ at x₀.

    Raises:
        ConvergenceError: If no admissible (α, β) is found.
    """
    x0 = validate_positive(x0, "x0")
    mu = validate_positive(mu, "mu")
    alpha, beta = _solve_dipole_pair(lambda a, b: unidirectional_parameters(a, b, profile), x0, mu)
    return construct_unidirectional(alpha, beta, profile, n)


def solve_axisymmetric(
    profile: MonotoneProfile,
    r0: float,
    mu: float,
    n: Optional[int] = None,
) -> RHSolution:
    """Equilibrium in the field G = H(x² + y²) with a dipole μ at r₀ > 0."""
    r0 = validate_positive(r0, "r0")
    mu = validate_positive(mu, "mu")
    alpha, beta = _solve_dipole_pair(lambda a, b: axisymmetric_parameters(a, b, profile), r0, mu)
    return construct_axisymmetric(alpha, beta, profile, n)


def solve_composed(
    core: HarmonicCore,
    profile: MonotoneProfile,
    a: float,
    mu: float,
    n: Optional[int] = None,
) -> RHSolution:
    """Equilibrium in the field G = H(Re Ξ(z)) with a dipole μ at a."""
    a = validate_positive(a, "a")
    mu = validate_positive(mu, "mu")
    alpha, beta = _solve_dipole_pair(lambda al, be: composed_parameters(al, be, core, profile), a, mu)
    return construct_composed(alpha, beta, core, profile, n)


# =============================================================================
# Cells with a curved bottom
# =============================================================================

def effective_profile(
    field_spec: FieldSpec,
    interval: Optional[Tuple[float, float]] = None,
) -> MonotoneProfile:
    """
    Profile of the flat-cell problem equivalent to field_spec.

    Curved cells are tabulated over interval (physical x, or r > 0) in
    their conformal coordinate and interpolated monotonically: h∘s⁻¹ for
    a bottom h(x), and K∘R⁻¹ as a function of the squared radius for a
    bottom K(r).

    Raises:
        InputValidationError: If a curved cell comes without an interval or
            its bottom is not increasing there.
    """
    kind = field_spec.kind
    if kind in (FieldKind.UNIDIRECTIONAL, FieldKind.AXISYMMETRIC, FieldKind.COMPOSED_HARMONIC):
        return field_spec.profile
    if kind is FieldKind.POINT_CHARGES:
        raise UnsupportedScenarioError("point-charge fields are solved in closed form")
    if interval is None:
        raise InputValidationError("curved cells need the coordinate interval of the boundary data")

    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise InputValidationError(f"empty interval [{lo}, {hi}]")
    xs = np.linspace(lo, hi, EFFECTIVE_PROFILE_NODES)
    elevation = field_spec.elevation
    heights = np.asarray(elevation.height(xs), dtype=float)
    if kind is FieldKind.NONPLANAR_UNIDIRECTIONAL:
        reduced = np.array([conformal_coordinate_1d(elevation, x) for x in xs])
    else:
        if lo <= 0:
            raise DomainError("a radial cell needs r > 0 on the whole interval")
        reduced = np.array([conformal_coordinate_radial(elevation, r) for r in xs]) ** 2

    if np.any(np.diff(heights) <= 0):
        raise InputValidationError("the cell bottom must increase over the interval")
    interpolant = interpolate.PchipInterpolator(reduced, heights)
    return MonotoneProfile.from_function(interpolant, float(reduced[0]), float(reduced[-1]))


def solve_nonplanar(
    field_spec: FieldSpec,
    location: float,
    mu: float,
    interval: Tuple[float, float],
    n: Optional[int] = None,
) -> RHSolution:
    """Reduce a curved-cell field to the flat unidirectional or axisymmetric problem and solve it."""
    profile = effective_profile(field_spec, interval)
    if field_spec.kind is FieldKind.NONPLANAR_UNIDIRECTIONAL:
        return solve_unidirectional(profile, location, mu, n)
    if field_spec.kind is FieldKind.NONPLANAR_RADIAL:
        return solve_axisymmetric(profile, location, mu, n)
    raise UnsupportedScenarioError(f"{field_spec.kind.value} is not a curved-cell field")
