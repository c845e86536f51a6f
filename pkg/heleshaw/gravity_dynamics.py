"""
Evolution of the exterior Cauchy transform under gravity.

With gravity acting along −x at rate C and sources q_i at z_i, the Cauchy
transform χ(w) = ∫_D dA/(π(w − z)) evolves as

    χ(w, t) = χ₀(w + Ct) + Σ ∫₀ᵗ q_i dτ / (π(w + C(t − τ) − z_i)),

so every pole of χ₀ translates by −Ct, a source adds
(q/πC) ln((w − z_i + Ct)/(w − z_i)) and a dipole μ at z_d adds
(μ/C)[1/(w − z_d) − 1/(w − z_d + Ct)]. The dipole part at z_d never moves:
a disk with residue μ/C stays put while the rest of the fluid sinks.

Residues are area/π. All arithmetic is done on the residue and pole values
as given, so Fraction inputs yield exact rational coefficients.
"""

from __future__ import annotations

import cmath
import numbers
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .logging_config import get_logger
from .validation import (
    InputValidationError,
    NotADiskError,
    UnphysicalWarning,
    UnsupportedRepresentationError,
    validate_finite,
    warn,
)

logger = get_logger(__name__)


def _number(value, name: str):
    """Accept ints, Fractions, floats and complex values unchanged; reject the rest."""
    if isinstance(value, bool) or not isinstance(value, numbers.Number):
        raise InputValidationError(f"{name} must be a number, got {value!r}")
    validate_finite(complex(value), name)
    return value


# =============================================================================
# Cauchy transforms
# =============================================================================

@dataclass(frozen=True)
class CauchyTransform:
    """
    χ(w) = Σ r_k/(w − p_k) + Σ c_l ln((w − u_l)/(w − v_l)).

    poles holds (residue, pole) pairs with coincident poles merged and zero
    residues dropped; logs holds (coefficient, upper, lower) triples from
    sources. A transform without log terms is rational.
    """

    poles: Tuple[Tuple[numbers.Number, numbers.Number], ...] = ()
    logs: Tuple[Tuple[numbers.Number, numbers.Number, numbers.Number], ...] = ()

    def __post_init__(self):
        merged: Dict[numbers.Number, numbers.Number] = {}
        for residue, pole in self.poles:
            residue = _number(residue, "residue")
            pole = _number(pole, "pole")
            merged[pole] = merged.get(pole, 0) + residue
        poles = tuple((r, p) for p, r in merged.items() if r != 0)

        logs = []
        for coefficient, upper, lower in self.logs:
            coefficient = _number(coefficient, "log coefficient")
            upper, lower = _number(upper, "log endpoint"), _number(lower, "log endpoint")
            if coefficient != 0 and upper != lower:
                logs.append((coefficient, upper, lower))

        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "logs", tuple(logs))

    @classmethod
    def zero(cls) -> "CauchyTransform":
        return cls()

    @classmethod
    def single_pole(cls, residue, pole) -> "CauchyTransform":
        return cls(poles=((residue, pole),))

    @property
    def is_rational(self) -> bool:
        return not self.logs

    @property
    def is_zero(self) -> bool:
        return not self.poles and not self.logs

    def residues(self) -> Dict[numbers.Number, numbers.Number]:
        """Pole → residue, for coefficient-level comparison."""
        return {p: r for r, p in self.poles}

    @property
    def total_residue(self):
        """Coefficient of 1/w at infinity (area/π), log terms included."""
        total = sum((r for r, _ in self.poles), 0)
        for coefficient, upper, lower in self.logs:
            total += coefficient * (lower - upper)
        return total

    def shifted(self, offset) -> "CauchyTransform":
        """χ(w + offset): every pole and log endpoint moves by −offset."""
        offset = _number(offset, "offset")
        return CauchyTransform(
            poles=tuple((r, p - offset) for r, p in self.poles),
            logs=tuple((c, u - offset, v - offset) for c, u, v in self.logs),
        )

    def __add__(self, other: "CauchyTransform") -> "CauchyTransform":
        if not isinstance(other, CauchyTransform):
            return NotImplemented
        return CauchyTransform(self.poles + other.poles, self.logs + other.logs)

    def __neg__(self) -> "CauchyTransform":
        return CauchyTransform(
            poles=tuple((-r, p) for r, p in self.poles),
            logs=tuple((-c, u, v) for c, u, v in self.logs),
        )

    def __sub__(self, other: "CauchyTransform") -> "CauchyTransform":
        if not isinstance(other, CauchyTransform):
            return NotImplemented
        return self + (-other)

    def evaluate(self, w):
        """χ(w) for scalar or array w away from the poles and log cuts."""
        scalar = np.isscalar(w)
        ws = np.asarray(w, dtype=complex)
        values = np.zeros(ws.shape, dtype=complex)
        for residue, pole in self.poles:
            values += complex(residue) / (ws - complex(pole))
        for coefficient, upper, lower in self.logs:
            values += complex(coefficient) * np.log((ws - complex(upper)) / (ws - complex(lower)))
        return values.item() if scalar else values

    def __repr__(self) -> str:
        terms = [f"{r}/(w - {p})" for r, p in self.poles]
        terms += [f"{c} ln((w - {u})/(w - {v}))" for c, u, v in self.logs]
        return "CauchyTransform(" + (" + ".join(terms) if terms else "0") + ")"


# =============================================================================
# Scenarios
# =============================================================================

@dataclass(frozen=True)
class GravityScenario:
    """
    Fluid under gravity rate C with sources and at most one dipole.

    sources are (q, z) pairs, dipole a (μ, z_d) pair, initial the
    transform χ₀ of the domain at t = 0.
    """

    C: numbers.Number
    initial: CauchyTransform
    sources: Tuple[Tuple[numbers.Number, numbers.Number], ...] = ()
    dipole: Optional[Tuple[numbers.Number, numbers.Number]] = None

    def __post_init__(self):
        c = _number(self.C, "C")
        if isinstance(c, complex) or c <= 0:
            raise InputValidationError(f"gravity rate C must be real and positive, got {c}")
        if not isinstance(self.initial, CauchyTransform):
            raise UnsupportedRepresentationError(
                f"initial transform must be a rational CauchyTransform, got {type(self.initial).__name__}"
            )
        object.__setattr__(self, "sources", tuple(
            (_number(q, "source strength"), _number(z, "source position")) for q, z in self.sources
        ))
        if self.dipole is not None:
            mu, z = self.dipole
            object.__setattr__(self, "dipole", (_number(mu, "dipole strength"), _number(z, "dipole position")))

    @classmethod
    def dipole_in_disk(cls, C, area_residue, mu, center=0) -> "GravityScenario":
        """Dipole μ at the centre of a disk with χ₀ = A/(w − center)."""
        return cls(C, transform_of_disk(center, area_residue), dipole=(mu, center))

    @property
    def steady_residue(self):
        """Residue μ/C of the stationary disk around the dipole."""
        if self.dipole is None:
            raise InputValidationError("scenario has no dipole")
        return self.dipole[0] / self.C


def _check_time(t):
    t = _number(t, "t")
    if isinstance(t, complex) or t < 0:
        raise InputValidationError(f"time must be real and non-negative, got {t}")
    return t


def evolve_transform(scenario: GravityScenario, t) -> CauchyTransform:
    """
    χ(w, t) in closed form.

    Raises:
        UnsupportedRepresentationError: If χ₀ carries logarithmic terms.
        InputValidationError: If t < 0.
    """
    t = _check_time(t)
    if not scenario.initial.is_rational:
        raise UnsupportedRepresentationError("initial transform must be rational")

    C = scenario.C
    drift = C * t
    result = scenario.initial.shifted(drift)

    logs = tuple((q / (cmath.pi * C), z - drift, z) for q, z in scenario.sources)
    if logs:
        result = result + CauchyTransform(logs=logs)

    if scenario.dipole is not None:
        mu, z = scenario.dipole
        result = result + CauchyTransform(poles=((mu / C, z), (-mu / C, z - drift)))

    logger.debug("Evolved transform at t=%s: %r", t, result)
    return result


def split_decomposition(scenario: GravityScenario, t) -> Tuple[CauchyTransform, CauchyTransform]:
    """
    Stationary disk (μ/C)/(w − z_d) and the sinking remainder.

    The two parts sum to evolve_transform(scenario, t) exactly. A negative
    residue in the sinking part means the data describe no domain and is
    reported with UnphysicalWarning.
    """
    if scenario.dipole is None:
        raise InputValidationError("split decomposition needs a dipole scenario")
    total = evolve_transform(scenario, t)
    stationary = CauchyTransform.single_pole(scenario.steady_residue, scenario.dipole[1])
    sinking = total - stationary

    for residue, pole in sinking.poles:
        if complex(residue).real < 0:
            warn(f"sinking part has negative residue {residue} at {pole}", UnphysicalWarning)
    return stationary, sinking


# =============================================================================
# Disks
# =============================================================================

def transform_of_disk(center, coefficient) -> CauchyTransform:
    """
    χ(w) = coefficient/(w − center) of a disk of area π·coefficient.

    A zero coefficient gives the zero transform.
    """
    coefficient = _number(coefficient, "coefficient")
    if isinstance(coefficient, complex) or coefficient < 0:
        raise InputValidationError(f"disk coefficient must be real and non-negative, got {coefficient}")
    return CauchyTransform.single_pole(coefficient, _number(center, "center"))


def disk_parameters(transform: CauchyTransform):
    """
    (center, coefficient) of a single-pole transform.

    Raises:
        NotADiskError: For zero, multi-pole, logarithmic or negative-residue transforms.
    """
    if transform.logs or len(transform.poles) != 1:
        raise NotADiskError(f"{transform!r} is not the transform of a disk")
    residue, pole = transform.poles[0]
    if isinstance(residue, complex) or residue < 0:
        raise NotADiskError(f"residue {residue} is not a disk coefficient")
    return pole, residue


def disk_boundary(center, coefficient, n: int) -> np.ndarray:
    """Boundary samples of the disk with transform coefficient/(w − center)."""
    radius = float(coefficient) ** 0.5
    phi = 2.0 * np.pi * np.arange(n) / n
    return complex(center) + radius * np.exp(1j * phi)
