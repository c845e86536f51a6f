"""
Explicit equilibrium maps driven by a point-charge field.

Four families are available:

* source/sink pair (q at a, −q at b) with a charge Q at the origin outside
  the domain: f(ζ) = √(ab) ((1+αζ)/(1−αζ))^{1/λ}, λ = Q/2q;
* its dipole limit (dipole μ at a): f(ζ) = a exp(ζ√(2μ/aQ));
* a dipole μ colocated with the charge Q at the origin: f(ζ) = Aζe^{Bζ},
  B = 2μ/QA, a one-parameter family of sizes A;
* a quadrupole β at the origin between charges Q at ±a:
  f(ζ) = a ζ √((1 − e^{−cζ²})/ζ²), c = √(β/a²Q).

Each solver returns a ConformalMap whose predicted_univalent flag is the
closed-form threshold; scenario_data() rebuilds the field and singularity
list that the map is an equilibrium for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .config import get_config
from .field import Charge, FieldSpec
from .geometry import ConformalMap, MapFamily, sample_boundary
from .logging_config import get_logger
from .moments import HydroSingularity, feasibility
from .spectral import find_root_1d
from .validation import (
    ConvergenceError,
    FeasibilityError,
    InputValidationError,
    validate_finite,
    validate_positive,
)

logger = get_logger(__name__)


# =============================================================================
# Parameter sets
# =============================================================================

@dataclass(frozen=True)
class Example1Params:
    """Source q at a, sink −q at b, charge Q at the origin."""

    q: float
    a: float
    b: float
    Q: float

    def __post_init__(self):
        validate_positive(self.q, "q")
        validate_positive(self.a, "a")
        validate_positive(self.b, "b")
        validate_finite(self.Q, "Q")
        if self.a == self.b:
            raise InputValidationError("source and sink positions must differ")
        if self.Q == 0:
            raise InputValidationError("Q must be nonzero")
        if self.q * self.Q * math.log(self.b / self.a) <= 0:
            raise FeasibilityError(
                f"qQ ln(b/a) = {self.q * self.Q * math.log(self.b / self.a):.6g} must be positive"
            )

    @property
    def lam(self) -> float:
        return self.Q / (2.0 * self.q)

    @property
    def alpha(self) -> float:
        """Closed-form α = √(((b/a)^{λ/2} − 1)/((b/a)^{λ/2} + 1)) = √tanh(λ ln(b/a)/4)."""
        return math.sqrt(math.tanh(self.lam * math.log(self.b / self.a) / 4.0))


@dataclass(frozen=True)
class Example2Params:
    """Dipole μ and charge Q both at the origin; domain size A."""

    mu: float
    Q: float
    A: float

    def __post_init__(self):
        validate_positive(self.mu, "mu")
        validate_positive(self.Q, "Q")
        validate_positive(self.A, "A")

    @property
    def B(self) -> float:
        return 2.0 * self.mu / (self.Q * self.A)


@dataclass(frozen=True)
class Example3Params:
    """Quadrupole β at the origin, charges Q at ±a."""

    beta: float
    Q: float
    a: float

    def __post_init__(self):
        validate_positive(self.beta, "beta")
        validate_positive(self.Q, "Q")
        validate_positive(self.a, "a")

    @property
    def c(self) -> float:
        return math.sqrt(self.beta / (self.a * self.a * self.Q))

    @property
    def alpha(self) -> float:
        return math.sqrt(self.beta * self.Q) / (2.0 * math.pi * self.a)


# =============================================================================
# Source/sink pair and its dipole limit
# =============================================================================

def _example1_alpha(params: Example1Params) -> float:
    """Solve (1/λ) ln((1+α²)/(1−α²)) = ½ ln(b/a) for α and cross-check the closed form."""
    log_ratio = math.log(params.b / params.a)
    lam = params.lam

    def condition(alpha: float) -> float:
        return 2.0 * math.atanh(alpha * alpha) / lam - 0.5 * log_ratio

    upper = math.sqrt(math.tanh(lam * log_ratio / 2.0))
    alpha = find_root_1d(condition, (0.0, upper))
    closed = params.alpha
    if abs(alpha - closed) > 1e-10 * max(1.0, closed):
        raise ConvergenceError(f"α = {alpha!r} disagrees with the closed form {closed!r}")
    return alpha


def solve_example1(q: float, a: float, b: float, Q: float) -> ConformalMap:
    """
    Equilibrium map for a source q at a and a sink −q at b in the field of a
    charge Q at the origin.

    The source maps from ζ = −α and the sink from ζ = α. For λ = 1 the
    domain is a disk.

    Raises:
        FeasibilityError: If qQ ln(b/a) <= 0.
    """
    params = Example1Params(q, a, b, Q)
    alpha = _example1_alpha(params)
    parameters = {
        "q": params.q,
        "a": params.a,
        "b": params.b,
        "Q": params.Q,
        "lambda": params.lam,
        "alpha": alpha,
        "sqrt_ab": math.sqrt(params.a * params.b),
    }
    ratio = min(params.a, params.b) / max(params.a, params.b)
    predicted = ratio >= example1_critical_ratio(params.q, abs(params.Q))
    logger.debug("Example 1: lambda=%.6g alpha=%.12g", params.lam, alpha)
    return ConformalMap(MapFamily.SOURCE_SINK_CHARGE, parameters, predicted_univalent=predicted)


def example1_critical_ratio(q: float, Q: float) -> float:
    """
    Smallest ratio a/b = cos(πλ)^{2/λ} keeping the domain simply connected.

    Returns 0 for λ = Q/2q >= 1/2 (any ratio works) and 1 as Q → 0.
    """
    validate_positive(q, "q")
    validate_finite(Q, "Q")
    if Q < 0:
        raise InputValidationError("critical ratio is defined for Q >= 0")
    lam = Q / (2.0 * q)
    if lam == 0:
        return 1.0
    if lam >= 0.5:
        return 0.0
    return math.cos(math.pi * lam) ** (2.0 / lam)


def example1_critical_charge(q: float, ratio: float) -> float:
    """Charge Q at which a/b = ratio becomes critical (inverse of example1_critical_ratio)."""
    validate_positive(q, "q")
    validate_positive(ratio, "ratio")
    if ratio >= 1:
        raise InputValidationError(f"ratio must be below 1, got {ratio}")
    return find_root_1d(
        lambda Q: example1_critical_ratio(q, Q) - ratio,
        (1e-12 * q, q * (1.0 - 1e-12)),
    )


def example1_feasibility(q: float, a: float, b: float, Q: float) -> float:
    """
    Transformed-domain area predicted by the source/sink data, qQ ln(b/a)/2π.

    An equilibrium needs it positive; reported for infeasible items.
    """
    field_spec = FieldSpec.point_charges([Charge(Q, 0.0)])
    singularities = [HydroSingularity.source(q, a), HydroSingularity.source(-q, b)]
    return float(feasibility(field_spec, singularities).real)


def example1_transformed_map(conformal_map: ConformalMap) -> ConformalMap:
    """
    F(f(ζ)) = (q/π) ln((1+αζ)/(1−αζ)) + (Q/2π) ln √(ab) as a Taylor series.

    The image is the transformed domain; its series converges geometrically
    with ratio α.
    """
    if conformal_map.family is not MapFamily.SOURCE_SINK_CHARGE:
        raise InputValidationError("transformed map needs a source/sink map")
    p = conformal_map.parameters
    alpha, q, Q = p["alpha"], p["q"], p["Q"]
    terms = max(3, min(4096, int(math.ceil(math.log(1e-18) / math.log(alpha))) + 2))
    coefficients = np.zeros(terms, dtype=complex)
    coefficients[0] = Q / (2.0 * math.pi) * math.log(p["sqrt_ab"])
    odd = np.arange(1, terms, 2)
    coefficients[odd] = 2.0 * q / math.pi * alpha ** odd / odd
    return ConformalMap.numeric(coefficients, label="example1_transformed")


def solve_dipole_limit(mu: float, a: float, Q: float) -> ConformalMap:
    """f(ζ) = a exp(kζ), k = √(2μ/aQ); univalent iff k <= π."""
    validate_positive(mu, "mu")
    validate_positive(a, "a")
    validate_positive(Q, "Q")
    k2 = 2.0 * mu / (a * Q)
    parameters = {"mu": float(mu), "a": float(a), "Q": float(Q), "k": math.sqrt(k2)}
    return ConformalMap(
        MapFamily.DIPOLE_CHARGE_LIMIT,
        parameters,
        predicted_univalent=k2 <= math.pi ** 2,
    )


def dipole_family_map(mu: float, a: float, Q: float, epsilon: float) -> ConformalMap:
    """
    Source/sink map with b = a e^ε and q = μ/(εa), converging to the
    dipole-limit map as ε → 0.
    """
    validate_positive(epsilon, "epsilon")
    validate_positive(mu, "mu")
    validate_positive(a, "a")
    return solve_example1(mu / (epsilon * a), a, a * math.exp(epsilon), Q)


def dipole_limit_critical_charge(mu: float, a: float) -> float:
    """Q_crit = 2μ/(π² a)."""
    return 2.0 * validate_positive(mu, "mu") / (math.pi ** 2 * validate_positive(a, "a"))


# =============================================================================
# Colocated dipole and charge
# =============================================================================

def inverse_conjugate_integral(conformal_map: ConformalMap, n: Optional[int] = None) -> complex:
    """
    ∫_D dA/z̄ = (1/2i)∮ ln|z|² dz for a domain containing the origin.

    The logarithmic singularity at the origin contributes nothing to the
    contour form, so the integral is spectrally accurate.
    """
    n = get_config().spectral.default_grid if n is None else n
    boundary = sample_boundary(conformal_map, n)
    integrand = np.log(np.abs(boundary.points) ** 2) * boundary.tangents
    return complex(2.0 * math.pi / n * np.sum(integrand) / 2j)


def solve_example2(mu: float, Q: float, A: float, B: Optional[float] = None) -> ConformalMap:
    """
    f(ζ) = Aζe^{Bζ} with B = 2μ/QA.

    The moment condition ∫_D dA/z̄ = 2πμ/Q is re-verified numerically.
    An explicit B overrides the equilibrium value and yields a map that is
    not an equilibrium (used as a negative control).
    """
    params = Example2Params(mu, Q, A)
    equilibrium_B = params.B
    if B is None:
        B = equilibrium_B
        value = inverse_conjugate_integral(
            ConformalMap(MapFamily.DIPOLE_CHARGE_COLOCATED, {"A": params.A, "B": B})
        )
        expected = 2.0 * math.pi * params.mu / params.Q
        if abs(value - expected) > 1e-6 * expected:
            raise ConvergenceError(f"moment condition gives {value}, expected {expected}")
    else:
        B = validate_positive(B, "B")

    parameters = {"mu": params.mu, "Q": params.Q, "A": params.A, "B": float(B)}
    return ConformalMap(
        MapFamily.DIPOLE_CHARGE_COLOCATED,
        parameters,
        predicted_univalent=B <= 1.0,
    )


def example2_critical_size(mu: float, Q: float) -> float:
    """A_crit = 2μ/Q, where B = 1."""
    return 2.0 * validate_positive(mu, "mu") / validate_positive(Q, "Q")


def example2_overlap_angle(B: float) -> float:
    """
    Root of φ + B sin φ = π on (0, π), where the boundary meets its mirror.

    Raises:
        InputValidationError: If B <= 1 (no overlap).
    """
    B = validate_positive(B, "B")
    if B <= 1.0:
        raise InputValidationError(f"the boundary overlaps only for B > 1, got {B}")
    peak = math.acos(-1.0 / B)
    return find_root_1d(lambda phi: phi + B * math.sin(phi) - math.pi, (0.0, peak))


# =============================================================================
# Quadrupole between two charges
# =============================================================================

def solve_example3(beta: float, Q: float, a: float) -> ConformalMap:
    """
    f(ζ) = aζ√((1 − e^{−cζ²})/ζ²), c = √(β/a²Q), with f'(0) = a√c > 0.

    Then F(f(ζ)) = −αζ² + const with α = √(βQ)/(2πa); univalent iff c <= π.
    """
    params = Example3Params(beta, Q, a)
    parameters = {
        "beta": params.beta,
        "Q": params.Q,
        "a": params.a,
        "c": params.c,
        "alpha": params.alpha,
    }
    return ConformalMap(
        MapFamily.QUADRUPOLE_TWO_CHARGES,
        parameters,
        predicted_univalent=params.c <= math.pi,
    )


def example3_critical_offset(beta: float, Q: float) -> float:
    """a_crit = √(β/Q)/π."""
    return math.sqrt(validate_positive(beta, "beta") / validate_positive(Q, "Q")) / math.pi


# =============================================================================
# Scenario data of a closed-form map
# =============================================================================

def scenario_data(conformal_map: ConformalMap) -> Tuple[FieldSpec, List[HydroSingularity]]:
    """Field and singularities for which a closed-form map is an equilibrium."""
    p = conformal_map.parameters
    family = conformal_map.family

    if family is MapFamily.SOURCE_SINK_CHARGE:
        field_spec = FieldSpec.point_charges([Charge(p["Q"], 0.0)])
        return field_spec, [HydroSingularity.source(p["q"], p["a"]), HydroSingularity.source(-p["q"], p["b"])]
    if family is MapFamily.DIPOLE_CHARGE_LIMIT:
        field_spec = FieldSpec.point_charges([Charge(p["Q"], 0.0)])
        return field_spec, [HydroSingularity.dipole(p["mu"], p["a"])]
    if family is MapFamily.DIPOLE_CHARGE_COLOCATED:
        field_spec = FieldSpec.point_charges([Charge(p["Q"], 0.0)])
        return field_spec, [HydroSingularity.dipole(p["mu"], 0.0)]
    if family is MapFamily.QUADRUPOLE_TWO_CHARGES:
        field_spec = FieldSpec.point_charges([Charge(p["Q"], p["a"]), Charge(p["Q"], -p["a"])])
        return field_spec, [HydroSingularity.quadrupole(p["beta"], 0.0)]
    raise InputValidationError(f"{family.value} maps carry no scenario data")
