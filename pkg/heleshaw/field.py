"""
External fields: potentials G, complex potentials F and complex currents ω.

Point charges generate G(z) = Σ Q_m/2π ln|z − z'_m| with complex potential
F(z) = Σ Q_m/2π ln(z − z'_m) (per-term principal branches) and current
ω = F'. The other field kinds describe the non-harmonic potentials used by
the Riemann-Hilbert solvers: G = H(x), G = H(x² + y²), G = H(Re Ξ(z)), and
the effective potentials of cells with a curved bottom, which reduce to
the first two after a change to conformal coordinates.

The velocity potential Φ and the pressure are not reconstructed; the shape
problem only needs G, ω and dF. The classification of which G admit the
Riemann-Hilbert treatment (G depending on a harmonic function through a
monotone profile, or on the distance to an axis) is taken as given here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate, optimize

from .logging_config import get_logger
from .validation import (
    DomainError,
    InputValidationError,
    IntegrationError,
    UnsupportedScenarioError,
    validate_finite,
)

logger = get_logger(__name__)

TWO_PI = 2.0 * math.pi

# Relative distance under which a point is taken to coincide with a charge
POLE_TOLERANCE = 1e-14

# Stopping width of the vectorized monotone bisection
BISECTION_RTOL = 1e-13


# =============================================================================
# Charges
# =============================================================================

@dataclass(frozen=True)
class Charge:
    """A point source of the external field with strength Q at position z'."""

    strength: float
    position: complex

    def __post_init__(self):
        validate_finite(self.strength, "charge strength")
        validate_finite(complex(self.position), "charge position")
        if self.strength == 0:
            raise InputValidationError("charge strength must be nonzero")
        object.__setattr__(self, "strength", float(self.strength))
        object.__setattr__(self, "position", complex(self.position))


def _check_distinct(charges: Sequence[Charge]) -> None:
    positions = [c.position for c in charges]
    for i, p in enumerate(positions):
        for other in positions[i + 1:]:
            if p == other:
                raise InputValidationError(f"two charges share the position {p}")


# =============================================================================
# Monotone profiles
# =============================================================================

class ProfileKind(Enum):
    SQUARE = "square"
    IDENTITY = "identity"
    POWER = "power"
    TABULATED = "tabulated"
    FUNCTION = "function"


@dataclass(frozen=True)
class MonotoneProfile:
    """
    A strictly increasing scalar profile H with its inverse.

    square, identity and power(p) are defined on [0, ∞) (identity on the
    whole line) and inverted analytically; tabulated and function profiles
    are inverted by vectorized bisection on their declared interval.
    """

    kind: ProfileKind
    exponent: float = 1.0
    nodes: Tuple[Tuple[float, ...], Tuple[float, ...]] = ((), ())
    function: Optional[Callable] = field(default=None, compare=False)
    interval: Tuple[float, float] = (0.0, math.inf)

    # ---- constructors ------------------------------------------------------

    @classmethod
    def square(cls) -> "MonotoneProfile":
        return cls(ProfileKind.SQUARE, exponent=2.0)

    @classmethod
    def identity(cls) -> "MonotoneProfile":
        return cls(ProfileKind.IDENTITY, interval=(-math.inf, math.inf))

    @classmethod
    def power(cls, p: float) -> "MonotoneProfile":
        p = validate_finite(p, "profile exponent")
        if p <= 0:
            raise InputValidationError(f"power profile needs a positive exponent, got {p}")
        return cls(ProfileKind.POWER, exponent=float(p))

    @classmethod
    def tabulated(cls, xs: Sequence[float], ys: Sequence[float]) -> "MonotoneProfile":
        """Piecewise-linear profile through (xs, ys); both strictly increasing."""
        xs_arr = np.asarray(xs, dtype=float)
        ys_arr = np.asarray(ys, dtype=float)
        if xs_arr.ndim != 1 or xs_arr.shape != ys_arr.shape or len(xs_arr) < 2:
            raise InputValidationError("tabulated profile needs two equal-length sequences of at least 2 nodes")
        if not (np.all(np.isfinite(xs_arr)) and np.all(np.isfinite(ys_arr))):
            raise InputValidationError("tabulated profile nodes must be finite")
        if np.any(np.diff(xs_arr) <= 0) or np.any(np.diff(ys_arr) <= 0):
            raise InputValidationError("tabulated profile must be strictly increasing")
        return cls(
            ProfileKind.TABULATED,
            nodes=(tuple(xs_arr), tuple(ys_arr)),
            interval=(float(xs_arr[0]), float(xs_arr[-1])),
        )

    @classmethod
    def from_function(cls, fn: Callable, lower: float, upper: float) -> "MonotoneProfile":
        """Wrap a vectorized increasing function defined on [lower, upper]."""
        if not (math.isfinite(lower) and math.isfinite(upper) and lower < upper):
            raise InputValidationError("profile interval must be finite with lower < upper")
        return cls(ProfileKind.FUNCTION, function=fn, interval=(float(lower), float(upper)))

    # ---- evaluation --------------------------------------------------------

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is ProfileKind.IDENTITY:
            return x
        if self.kind in (ProfileKind.SQUARE, ProfileKind.POWER):
            if np.any(x < 0):
                raise DomainError(f"{self.kind.value} profile is defined for x >= 0")
            return x ** self.exponent
        if self.kind is ProfileKind.TABULATED:
            self._check_interval(x, self.interval)
            return np.interp(x, self.nodes[0], self.nodes[1])
        self._check_interval(x, self.interval)
        return np.asarray(self.function(x), dtype=float)

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind is ProfileKind.IDENTITY:
            return y
        if self.kind in (ProfileKind.SQUARE, ProfileKind.POWER):
            if np.any(y < 0):
                raise DomainError(f"{self.kind.value} profile takes only non-negative values")
            return y ** (1.0 / self.exponent)
        lo, hi = self.interval
        self._check_interval(y, (float(self.forward(lo)), float(self.forward(hi))))
        return self._bisect(y, lo, hi)

    def derivative(self, x):
        """H'(x); used for the increasing-profile checks and Newton steps."""
        x = np.asarray(x, dtype=float)
        if self.kind is ProfileKind.IDENTITY:
            return np.ones_like(x)
        if self.kind in (ProfileKind.SQUARE, ProfileKind.POWER):
            return self.exponent * x ** (self.exponent - 1.0)
        h = 1e-7 * np.maximum(1.0, np.abs(x))
        lo, hi = self.interval
        left = np.clip(x - h, lo, hi)
        right = np.clip(x + h, lo, hi)
        return (self.forward(right) - self.forward(left)) / (right - left)

    def _bisect(self, y: np.ndarray, lo: float, hi: float) -> np.ndarray:
        low = np.full_like(y, lo)
        high = np.full_like(y, hi)
        for _ in range(200):
            mid = 0.5 * (low + high)
            above = self.forward(mid) >= y
            high = np.where(above, mid, high)
            low = np.where(above, low, mid)
            if np.all(high - low <= BISECTION_RTOL * np.maximum(1.0, np.abs(mid))):
                break
        return 0.5 * (low + high)

    @staticmethod
    def _check_interval(x: np.ndarray, interval: Tuple[float, float]) -> None:
        lo, hi = interval
        if np.any(x < lo) or np.any(x > hi):
            raise DomainError(f"profile argument outside [{lo}, {hi}]")


# =============================================================================
# Elevation profiles for cells with a curved bottom
# =============================================================================

@dataclass(frozen=True)
class ElevationProfile:
    """Bottom elevation h(x) (or K(r)) with its slope."""

    height: Callable = field(compare=False)
    slope: Callable = field(compare=False)
    label: str = ""

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "ElevationProfile":
        """h(x) = Σ c_k x^k, lowest degree first."""
        poly = Polynomial(np.asarray(coefficients, dtype=float))
        deriv = poly.deriv()
        return cls(height=poly, slope=deriv, label=f"polynomial{tuple(coefficients)}")

    @classmethod
    def flat(cls, level: float = 0.0) -> "ElevationProfile":
        return cls.polynomial([level])


# =============================================================================
# Harmonic cores of composed fields
# =============================================================================

class CoreKind(Enum):
    IDENTITY = "identity"
    HALF_SQUARE = "half_square"
    LOG_CHARGE = "log_charge"


@dataclass(frozen=True)
class HarmonicCore:
    """
    Analytic core Ξ of a composed field G = H(Re Ξ).

    identity: Ξ = z; half_square: Ξ = z²/2 (the field T = Re Ξ of a
    quadrupolar charge configuration at infinity); log_charge: the complex
    potential of a single charge, Ξ = (Q/2π) ln(z − z').
    """

    kind: CoreKind
    charges: Tuple[Charge, ...] = ()

    @classmethod
    def from_charges(cls, charges: Sequence[Charge]) -> "HarmonicCore":
        if len(charges) != 1:
            raise UnsupportedScenarioError(
                f"only single-charge logarithmic cores are invertible, got {len(charges)} charges"
            )
        return cls(CoreKind.LOG_CHARGE, tuple(charges))

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind is CoreKind.IDENTITY:
            return z
        if self.kind is CoreKind.HALF_SQUARE:
            return 0.5 * z * z
        charge = self.charges[0]
        return charge.strength / TWO_PI * np.log(z - charge.position)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind is CoreKind.IDENTITY:
            return np.ones_like(z)
        if self.kind is CoreKind.HALF_SQUARE:
            return z
        charge = self.charges[0]
        return charge.strength / (TWO_PI * (z - charge.position))

    def inverse(self, w):
        """Ξ⁻¹ on the principal branch; the caller guards the branch cut."""
        w = np.asarray(w, dtype=complex)
        if self.kind is CoreKind.IDENTITY:
            return w
        if self.kind is CoreKind.HALF_SQUARE:
            return np.sqrt(2.0 * w)
        charge = self.charges[0]
        return charge.position + np.exp(TWO_PI * w / charge.strength)


# =============================================================================
# Field specification
# =============================================================================

class FieldKind(Enum):
    POINT_CHARGES = "point_charges"
    UNIDIRECTIONAL = "unidirectional"
    AXISYMMETRIC = "axisymmetric"
    COMPOSED_HARMONIC = "composed_harmonic"
    NONPLANAR_UNIDIRECTIONAL = "nonplanar_unidirectional"
    NONPLANAR_RADIAL = "nonplanar_radial"


_REQUIRED = {
    FieldKind.POINT_CHARGES: ("charges",),
    FieldKind.UNIDIRECTIONAL: ("profile",),
    FieldKind.AXISYMMETRIC: ("profile",),
    FieldKind.COMPOSED_HARMONIC: ("profile", "core"),
    FieldKind.NONPLANAR_UNIDIRECTIONAL: ("elevation",),
    FieldKind.NONPLANAR_RADIAL: ("elevation",),
}


@dataclass(frozen=True)
class FieldSpec:
    """An external field of exactly one kind with the data that kind needs."""

    kind: FieldKind
    charges: Tuple[Charge, ...] = ()
    profile: Optional[MonotoneProfile] = None
    core: Optional[HarmonicCore] = None
    elevation: Optional[ElevationProfile] = None

    def __post_init__(self):
        required = _REQUIRED[self.kind]
        present = {
            "charges": bool(self.charges),
            "profile": self.profile is not None,
            "core": self.core is not None,
            "elevation": self.elevation is not None,
        }
        for name in required:
            if not present[name]:
                raise InputValidationError(f"{self.kind.value} field requires {name}")
        for name, is_set in present.items():
            if is_set and name not in required:
                raise InputValidationError(f"{self.kind.value} field does not take {name}")
        if self.charges:
            object.__setattr__(self, "charges", tuple(self.charges))
            _check_distinct(self.charges)

    @classmethod
    def point_charges(cls, charges: Sequence[Charge]) -> "FieldSpec":
        return cls(FieldKind.POINT_CHARGES, charges=tuple(charges))

    @classmethod
    def unidirectional(cls, profile: MonotoneProfile) -> "FieldSpec":
        return cls(FieldKind.UNIDIRECTIONAL, profile=profile)

    @classmethod
    def axisymmetric(cls, profile: MonotoneProfile) -> "FieldSpec":
        return cls(FieldKind.AXISYMMETRIC, profile=profile)

    @classmethod
    def composed(cls, profile: MonotoneProfile, core: HarmonicCore) -> "FieldSpec":
        return cls(FieldKind.COMPOSED_HARMONIC, profile=profile, core=core)

    @classmethod
    def nonplanar_unidirectional(cls, elevation: ElevationProfile) -> "FieldSpec":
        return cls(FieldKind.NONPLANAR_UNIDIRECTIONAL, elevation=elevation)

    @classmethod
    def nonplanar_radial(cls, elevation: ElevationProfile) -> "FieldSpec":
        return cls(FieldKind.NONPLANAR_RADIAL, elevation=elevation)

    @property
    def is_harmonic(self) -> bool:
        return self.kind is FieldKind.POINT_CHARGES


# =============================================================================
# Point-charge potentials
# =============================================================================

def _charge_field(field_spec: FieldSpec) -> Tuple[Charge, ...]:
    if field_spec.kind is not FieldKind.POINT_CHARGES:
        raise UnsupportedScenarioError(f"expected a point-charge field, got {field_spec.kind.value}")
    return field_spec.charges


def _offsets(charge: Charge, z: np.ndarray) -> np.ndarray:
    d = z - charge.position
    if np.any(np.abs(d) <= POLE_TOLERANCE * (1.0 + abs(charge.position))):
        raise DomainError(f"evaluation at the charge position {charge.position}")
    return d


def _as_output(values: np.ndarray, scalar: bool):
    return values.item() if scalar else values


def eval_G(field_spec: FieldSpec, z):
    """
    External potential G(z) = Σ Q_m/2π ln|z − z'_m|.

    Args:
        field_spec: A point-charge field.
        z: Evaluation point(s).

    Returns:
        Real potential, scalar or array matching z.

    Raises:
        DomainError: If z coincides with a charge.
    """
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    total = np.zeros(zz.shape, dtype=float)
    for charge in _charge_field(field_spec):
        total += charge.strength / TWO_PI * np.log(np.abs(_offsets(charge, zz)))
    return _as_output(total, scalar)


def eval_F(field_spec: FieldSpec, z):
    """Complex potential Σ Q_m/2π Log(z − z'_m), principal branch per term."""
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    total = np.zeros(zz.shape, dtype=complex)
    for charge in _charge_field(field_spec):
        total += charge.strength / TWO_PI * np.log(_offsets(charge, zz))
    return _as_output(total, scalar)


def eval_omega(field_spec: FieldSpec, z):
    """Complex current ω(z) = F'(z) = Σ Q_m / (2π(z − z'_m))."""
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    total = np.zeros(zz.shape, dtype=complex)
    for charge in _charge_field(field_spec):
        total += charge.strength / (TWO_PI * _offsets(charge, zz))
    return _as_output(total, scalar)


def eval_omega_prime(field_spec: FieldSpec, z):
    """F''(z) = −Σ Q_m / (2π(z − z'_m)²)."""
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    total = np.zeros(zz.shape, dtype=complex)
    for charge in _charge_field(field_spec):
        d = _offsets(charge, zz)
        total -= charge.strength / (TWO_PI * d * d)
    return _as_output(total, scalar)


# =============================================================================
# Conformal coordinates of curved cells
# =============================================================================

def _arc_integrand(profile: ElevationProfile, radial: bool) -> Callable[[float], float]:
    def integrand(t: float) -> float:
        slope = float(profile.slope(t))
        if not math.isfinite(slope):
            raise IntegrationError(f"non-finite elevation slope at {t}")
        value = math.sqrt(1.0 + slope * slope)
        return value / t if radial else value

    return integrand


def _quad(integrand: Callable[[float], float], a: float, b: float) -> float:
    if a == b:
        return 0.0
    value, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
    if not math.isfinite(value):
        raise IntegrationError(f"quadrature on [{a}, {b}] did not produce a finite value")
    return value


def conformal_coordinate_1d(profile: ElevationProfile, x: float) -> float:
    """
    Arclength coordinate s(x) = ∫₀ˣ √(1 + h'(t)²) dt of a cell with bottom h.

    In the coordinate s the cell is flat and the effective potential is
    H(z) = h(s⁻¹(Re z)).

    Raises:
        IntegrationError: If h' is not finite on [0, x].
    """
    x = float(validate_finite(x, "x"))
    return _quad(_arc_integrand(profile, radial=False), 0.0, x)


def conformal_coordinate_radial(profile: ElevationProfile, r: float) -> float:
    """
    Radial conformal coordinate R(r) = exp ∫₁^r √(1 + K'(ρ)²) dρ/ρ.

    Raises:
        DomainError: If r <= 0.
    """
    r = float(validate_finite(r, "r"))
    if r <= 0:
        raise DomainError(f"radial coordinate needs r > 0, got {r}")
    return math.exp(_quad(_arc_integrand(profile, radial=True), 1.0, r))


def _monotone_inverse(fn: Callable[[float], float], target: float, start: float, positive: bool) -> float:
    """Invert an increasing map by bracketing outward from start and brentq."""
    lo = hi = start
    step = max(1.0, abs(target))
    for _ in range(200):
        lo = lo / 2.0 if positive else lo - step
        hi = hi * 2.0 if positive else hi + step
        if fn(lo) <= target <= fn(hi):
            break
        step *= 2.0
    else:
        raise DomainError(f"cannot bracket the inverse conformal coordinate for {target}")
    return optimize.brentq(lambda t: fn(t) - target, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def inverse_coordinate_1d(profile: ElevationProfile, s: float) -> float:
    """x with conformal_coordinate_1d(profile, x) = s."""
    return _monotone_inverse(lambda x: conformal_coordinate_1d(profile, x), s, 0.0, positive=False)


def inverse_coordinate_radial(profile: ElevationProfile, radius: float) -> float:
    """r with conformal_coordinate_radial(profile, r) = radius."""
    if radius <= 0:
        raise DomainError(f"radial coordinate values are positive, got {radius}")
    return _monotone_inverse(lambda r: conformal_coordinate_radial(profile, r), radius, 1.0, positive=True)


# =============================================================================
# Generic potential
# =============================================================================

def eval_potential(field_spec: FieldSpec, z):
    """
    External potential G at z for any field kind.

    PointCharges use eval_G; the other kinds evaluate their profile on the
    reduced coordinate (Re z, |z|², Re Ξ(z), or the conformal coordinates
    of curved cells).
    """
    kind = field_spec.kind
    if kind is FieldKind.POINT_CHARGES:
        return eval_G(field_spec, z)

    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)

    if kind is FieldKind.UNIDIRECTIONAL:
        values = field_spec.profile.forward(zz.real)
    elif kind is FieldKind.AXISYMMETRIC:
        values = field_spec.profile.forward(np.abs(zz) ** 2)
    elif kind is FieldKind.COMPOSED_HARMONIC:
        values = field_spec.profile.forward(np.real(field_spec.core.evaluate(zz)))
    elif kind is FieldKind.NONPLANAR_UNIDIRECTIONAL:
        elevation = field_spec.elevation
        flat = [float(elevation.height(inverse_coordinate_1d(elevation, s))) for s in zz.real.ravel()]
        values = np.asarray(flat).reshape(zz.shape)
    else:
        elevation = field_spec.elevation
        flat = [float(elevation.height(inverse_coordinate_radial(elevation, r))) for r in np.abs(zz).ravel()]
        values = np.asarray(flat).reshape(zz.shape)

    return _as_output(np.asarray(values, dtype=float), scalar)
