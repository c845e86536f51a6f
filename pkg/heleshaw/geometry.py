"""
Conformal maps of the unit disk, sampled boundaries and univalence.

A ConformalMap is either one of the closed-form equilibrium families or a
Numeric map given by Taylor coefficients. Boundaries are sampled at the
uniform circle nodes together with dz/dφ = iζ f'(ζ), which is all the
moment quadratures need.

Univalence is decided on the boundary: a map analytic on the closed disk
is injective iff its boundary curve is a simple curve with non-vanishing
tangent. Failures are reported as either a zero of f' on the circle or a
pair of boundary angles with the same image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial
from scipy import optimize
from scipy.spatial import cKDTree

from .config import get_config
from .logging_config import get_logger
from .spectral import circle_nodes, circle_points, fourier_series, CircleGrid
from .validation import (
    AnalyticityError,
    BracketError,
    ConvergenceError,
    DomainError,
    GeometryError,
    InputValidationError,
    ResolutionWarning,
    validate_complex,
    warn,
)

logger = get_logger(__name__)

# Rows of the bounding-box overlap matrix processed at once by the sweep
SWEEP_BLOCK = 256

# Radial steps used to continue √g of the quadrupole family from ζ = 0
CONTINUATION_STEPS = 129
CONTINUATION_CHUNK = 4096


# =============================================================================
# Conformal maps
# =============================================================================

class MapFamily(Enum):
    SOURCE_SINK_CHARGE = "source_sink_charge"
    DIPOLE_CHARGE_LIMIT = "dipole_charge_limit"
    DIPOLE_CHARGE_COLOCATED = "dipole_charge_colocated"
    QUADRUPOLE_TWO_CHARGES = "quadrupole_two_charges"
    NUMERIC = "numeric"


def _quadrupole_g(c: float, zeta: np.ndarray) -> np.ndarray:
    """(1 − e^{−cζ²})/ζ², by its power series for |ζ| < 0.25."""
    z2 = zeta * zeta
    out = np.empty_like(z2)
    small = np.abs(zeta) < 0.25
    if np.any(small):
        w = z2[small]
        # Σ_{k≥1} (−1)^{k+1} c^k w^{k−1} / k!, Horner from the top term
        acc = np.zeros_like(w)
        for k in range(30, 0, -1):
            acc = (-1) ** (k + 1) * c ** k / math.factorial(k) + w * acc
        out[small] = acc
    large = ~small
    out[large] = -np.expm1(-c * z2[large]) / z2[large]
    return out


def _quadrupole_sqrt_g(c: float, zeta: np.ndarray) -> np.ndarray:
    """√g continued along the ray from 0, where g(0) = c > 0."""
    flat = zeta.ravel()
    result = np.empty(flat.shape, dtype=complex)
    t = np.linspace(0.0, 1.0, CONTINUATION_STEPS)[:, None]
    for start in range(0, len(flat), CONTINUATION_CHUNK):
        chunk = flat[start:start + CONTINUATION_CHUNK]
        path = _quadrupole_g(c, t * chunk[None, :])
        phase = np.unwrap(np.angle(path), axis=0)[-1]
        result[start:start + CONTINUATION_CHUNK] = np.sqrt(np.abs(path[-1])) * np.exp(0.5j * phase)
    return result.reshape(zeta.shape)


def _eval_source_sink(p: Dict[str, float], zeta: np.ndarray, derivative: bool) -> np.ndarray:
    alpha, lam = p["alpha"], p["lambda"]
    # log((1+αζ)/(1−αζ)) = 2 artanh(αζ), principal branch on the closed disk for α < 1
    value = p["sqrt_ab"] * np.exp(2.0 * np.arctanh(alpha * zeta) / lam)
    if not derivative:
        return value
    return value * (2.0 * alpha / lam) / (1.0 - alpha * alpha * zeta * zeta)


def _eval_dipole_limit(p: Dict[str, float], zeta: np.ndarray, derivative: bool) -> np.ndarray:
    value = p["a"] * np.exp(p["k"] * zeta)
    return p["k"] * value if derivative else value


def _eval_colocated(p: Dict[str, float], zeta: np.ndarray, derivative: bool) -> np.ndarray:
    A, B = p["A"], p["B"]
    exp_term = np.exp(B * zeta)
    if derivative:
        return A * (1.0 + B * zeta) * exp_term
    return A * zeta * exp_term


def _eval_quadrupole(p: Dict[str, float], zeta: np.ndarray, derivative: bool) -> np.ndarray:
    a, c = p["a"], p["c"]
    root = _quadrupole_sqrt_g(c, zeta)
    if derivative:
        # f' = a c e^{−cζ²} / √g, regular at ζ = 0
        return a * c * np.exp(-c * zeta * zeta) / root
    return a * zeta * root


_EVALUATORS: Dict[MapFamily, Callable[[Dict[str, float], np.ndarray, bool], np.ndarray]] = {
    MapFamily.SOURCE_SINK_CHARGE: _eval_source_sink,
    MapFamily.DIPOLE_CHARGE_LIMIT: _eval_dipole_limit,
    MapFamily.DIPOLE_CHARGE_COLOCATED: _eval_colocated,
    MapFamily.QUADRUPOLE_TWO_CHARGES: _eval_quadrupole,
}


@dataclass(frozen=True, eq=False)
class ConformalMap:
    """
    A map f from the closed unit disk onto a fluid domain.

    Closed-form families carry their parameters (including derived ones
    such as λ and α); Numeric maps carry Taylor coefficients c_0, c_1, ...
    predicted_univalent holds the closed-form threshold verdict when the
    family has one.
    """

    family: MapFamily
    parameters: Dict[str, float] = field(default_factory=dict)
    coefficients: Optional[np.ndarray] = None
    predicted_univalent: Optional[bool] = None
    label: str = ""

    def __post_init__(self):
        if self.family is MapFamily.NUMERIC:
            if self.coefficients is None:
                raise InputValidationError("numeric map requires Taylor coefficients")
            coefficients = np.array(self.coefficients, dtype=complex)
            if coefficients.ndim != 1 or len(coefficients) < 2:
                raise InputValidationError("numeric map needs at least the coefficients c_0 and c_1")
            if not np.all(np.isfinite(coefficients)):
                raise InputValidationError("numeric map coefficients must be finite")
            if coefficients[1] == 0:
                raise InputValidationError("numeric map must have f'(0) != 0")
            coefficients.setflags(write=False)
            object.__setattr__(self, "coefficients", coefficients)
        elif self.coefficients is not None:
            raise InputValidationError(f"{self.family.value} map does not take coefficients")
        object.__setattr__(self, "parameters", dict(self.parameters))

    # ---- constructors ------------------------------------------------------

    @classmethod
    def identity(cls) -> "ConformalMap":
        return cls.numeric([0.0, 1.0], label="identity")

    @classmethod
    def numeric(cls, coefficients: Sequence[complex], label: str = "") -> "ConformalMap":
        return cls(MapFamily.NUMERIC, coefficients=np.asarray(coefficients, dtype=complex), label=label)

    @classmethod
    def from_boundary_values(cls, values: np.ndarray, label: str = "") -> "ConformalMap":
        """
        Numeric map whose boundary values at the circle nodes are given.

        Raises:
            AnalyticityError: If the values carry negative-frequency content,
                i.e. are not the trace of a function analytic in the disk.
        """
        series = fourier_series(CircleGrid(values))
        c = series.coefficients
        n = series.n
        total = float(np.linalg.norm(c))
        negative = float(np.linalg.norm(c[n // 2:]))
        if total > 0 and negative > get_config().spectral.tail_tolerance * total:
            raise AnalyticityError(
                f"boundary values have negative-frequency content {negative / total:.2e}"
            )
        return cls.numeric(series.taylor(), label=label)

    # ---- evaluation --------------------------------------------------------

    def _apply(self, zeta, derivative: bool):
        scalar = np.isscalar(zeta)
        z = np.asarray(zeta, dtype=complex)
        if self.family is MapFamily.NUMERIC:
            coefficients = polynomial.polyder(self.coefficients) if derivative else self.coefficients
            values = polynomial.polyval(z, coefficients)
        else:
            values = _EVALUATORS[self.family](self.parameters, z, derivative)
        values = np.asarray(values, dtype=complex)
        return values.item() if scalar else values

    def evaluate(self, zeta):
        """f(ζ) for scalar or array ζ in the closed disk."""
        return self._apply(zeta, derivative=False)

    def derivative(self, zeta):
        """f'(ζ)."""
        return self._apply(zeta, derivative=True)

    @property
    def center(self) -> complex:
        """Image f(0) of the disk center."""
        return complex(self.evaluate(0.0 + 0.0j))

    @property
    def is_real_symmetric(self) -> bool:
        """True when f(ζ̄) = conj f(ζ), so the domain is symmetric about the real axis."""
        if self.family is not MapFamily.NUMERIC:
            return all(not isinstance(v, complex) for v in self.parameters.values())
        c = self.coefficients
        return bool(np.max(np.abs(c.imag)) <= 1e-12 * np.max(np.abs(c)))

    def tail_ratio(self) -> float:
        """Largest coefficient of the last eighth relative to the largest one (Numeric only)."""
        c = np.abs(self.coefficients)
        tail = c[-max(1, len(c) // 8):]
        return float(np.max(tail) / np.max(c))

    def __repr__(self) -> str:
        if self.family is MapFamily.NUMERIC:
            return f"ConformalMap(numeric, {len(self.coefficients)} coefficients)"
        params = ", ".join(f"{k}={v:.6g}" for k, v in self.parameters.items())
        return f"ConformalMap({self.family.value}, {params})"


# =============================================================================
# Boundary curves
# =============================================================================

@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Samples z_k = f(e^{iφ_k}) of a closed curve with tangents dz/dφ."""

    points: np.ndarray
    tangents: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=complex)
        tangents = np.array(self.tangents, dtype=complex)
        if points.ndim != 1 or points.shape != tangents.shape or len(points) < 3:
            raise InputValidationError("boundary needs matching point and tangent arrays of at least 3 samples")
        points.setflags(write=False)
        tangents.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "tangents", tangents)

    @classmethod
    def from_samples(cls, points: np.ndarray) -> "BoundaryCurve":
        """Curve from samples alone; tangents by spectral differentiation."""
        series = fourier_series(CircleGrid(points))
        return cls(series.at_nodes(), series.derivative_at_nodes())

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def nodes(self) -> np.ndarray:
        return circle_nodes(self.n)

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.abs(np.roll(self.points, -1) - self.points)

    @property
    def scale(self) -> float:
        """Radius of the sample cloud about its centroid."""
        return float(np.max(np.abs(self.points - self.points.mean())))


def sample_boundary(conformal_map: ConformalMap, n: int) -> BoundaryCurve:
    """
    Sample the boundary of a map at n uniform angles.

    Raises:
        AnalyticityError: If a Numeric map's coefficients do not decay.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise InputValidationError(f"boundary needs an integer sample count >= 3, got {n!r}")

    if conformal_map.family is MapFamily.NUMERIC and len(conformal_map.coefficients) >= 16:
        ratio = conformal_map.tail_ratio()
        if ratio > get_config().spectral.tail_tolerance:
            raise AnalyticityError(f"map coefficients do not decay (tail ratio {ratio:.2e})")

    zeta = circle_points(n)
    points = conformal_map.evaluate(zeta)
    tangents = 1j * zeta * conformal_map.derivative(zeta)
    if not (np.all(np.isfinite(points)) and np.all(np.isfinite(tangents))):
        raise AnalyticityError("map is not finite on the unit circle")
    return BoundaryCurve(points, tangents)


# =============================================================================
# Univalence verdicts
# =============================================================================

class FailureKind(Enum):
    BOUNDARY_DERIVATIVE_ZERO = "boundary_derivative_zero"
    SELF_INTERSECTION = "self_intersection"


@dataclass(frozen=True)
class UnivalenceFailure:
    kind: FailureKind
    angles: Tuple[float, ...]


@dataclass(frozen=True)
class UnivalenceVerdict:
    """
    Result of a univalence check.

    grid is the sample count the verdict was reached at; resolution_limited
    is set when non-adjacent samples were still in near contact there.
    """

    univalent: bool
    failure: Optional[UnivalenceFailure] = None
    grid: int = 0
    resolution_limited: bool = False

    def __post_init__(self):
        if self.univalent == (self.failure is not None):
            raise InputValidationError("a failure is present exactly when the verdict is negative")

    def __bool__(self) -> bool:
        return self.univalent


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u.real * v.imag - u.imag * v.real


def _exact_orientation(p: complex, q: complex, r: complex) -> int:
    px, py = Fraction(p.real), Fraction(p.imag)
    value = (Fraction(q.real) - px) * (Fraction(r.imag) - py) - (Fraction(q.imag) - py) * (Fraction(r.real) - px)
    return (value > 0) - (value < 0)


def _orientations(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Sign of the turn p → q → r; near-degenerate cases are decided exactly."""
    d1, d2 = q - p, r - p
    value = _cross(d1, d2)
    signs = np.sign(value).astype(int)
    ambiguous = np.abs(value) <= 1e-12 * np.abs(d1) * np.abs(d2)
    for k in np.flatnonzero(ambiguous):
        signs[k] = _exact_orientation(complex(p[k]), complex(q[k]), complex(r[k]))
    return signs


def _on_segment(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """For collinear p, q, r: is r within the bounding box of pq."""
    return (
        (np.minimum(p.real, q.real) <= r.real) & (r.real <= np.maximum(p.real, q.real))
        & (np.minimum(p.imag, q.imag) <= r.imag) & (r.imag <= np.maximum(p.imag, q.imag))
    )


def _segments_intersect(p1, q1, p2, q2) -> np.ndarray:
    o1 = _orientations(p1, q1, p2)
    o2 = _orientations(p1, q1, q2)
    o3 = _orientations(p2, q2, p1)
    o4 = _orientations(p2, q2, q1)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    touching = (
        ((o1 == 0) & _on_segment(p1, q1, p2))
        | ((o2 == 0) & _on_segment(p1, q1, q2))
        | ((o3 == 0) & _on_segment(p2, q2, p1))
        | ((o4 == 0) & _on_segment(p2, q2, q1))
    )
    return proper | touching


def _crossing_parameters(p1: complex, q1: complex, p2: complex, q2: complex) -> Tuple[float, float]:
    d1, d2, r = q1 - p1, q2 - p2, p2 - p1
    denom = d1.real * d2.imag - d1.imag * d2.real
    if denom == 0:
        return 0.5, 0.5
    s = (r.real * d2.imag - r.imag * d2.real) / denom
    t = (r.real * d1.imag - r.imag * d1.real) / denom
    return float(np.clip(s, 0.0, 1.0)), float(np.clip(t, 0.0, 1.0))


def _first_crossing(
    a_start: np.ndarray,
    a_end: np.ndarray,
    b_start: np.ndarray,
    b_end: np.ndarray,
    same_closed_curve: bool,
) -> Optional[Tuple[int, int, float, float]]:
    """
    First intersecting segment pair between two segment lists.

    Candidate pairs come from bounding-box overlap computed in row blocks;
    only candidates get the orientation test. With same_closed_curve the
    two lists are the same closed polygon and neighbouring segments (which
    share an endpoint) are skipped.

    Returns:
        (i, j, s, t) with the crossing at a_start[i] + s·(a_end[i] − a_start[i]),
        or None.
    """
    ax0, ax1 = np.minimum(a_start.real, a_end.real), np.maximum(a_start.real, a_end.real)
    ay0, ay1 = np.minimum(a_start.imag, a_end.imag), np.maximum(a_start.imag, a_end.imag)
    bx0, bx1 = np.minimum(b_start.real, b_end.real), np.maximum(b_start.real, b_end.real)
    by0, by1 = np.minimum(b_start.imag, b_end.imag), np.maximum(b_start.imag, b_end.imag)
    m = len(b_start)

    for block in range(0, len(a_start), SWEEP_BLOCK):
        rows = slice(block, block + SWEEP_BLOCK)
        overlap = (
            (ax0[rows, None] <= bx1[None, :]) & (ax1[rows, None] >= bx0[None, :])
            & (ay0[rows, None] <= by1[None, :]) & (ay1[rows, None] >= by0[None, :])
        )
        i_idx, j_idx = np.nonzero(overlap)
        i_idx = i_idx + block
        if same_closed_curve:
            keep = (j_idx > i_idx + 1) & ~((i_idx == 0) & (j_idx == m - 1))
            i_idx, j_idx = i_idx[keep], j_idx[keep]
        if len(i_idx) == 0:
            continue

        hits = _segments_intersect(a_start[i_idx], a_end[i_idx], b_start[j_idx], b_end[j_idx])
        if np.any(hits):
            k = int(np.flatnonzero(hits)[0])
            i, j = int(i_idx[k]), int(j_idx[k])
            s, t = _crossing_parameters(
                complex(a_start[i]), complex(a_end[i]), complex(b_start[j]), complex(b_end[j])
            )
            return i, j, s, t
    return None


def _closed_polygon_crossing(points: np.ndarray) -> Optional[Tuple[int, int, float, float]]:
    end = np.roll(points, -1)
    return _first_crossing(points, end, points, end, same_closed_curve=True)


def _refine_crossing(conformal_map: ConformalMap, phi1: float, phi2: float, width: float) -> Tuple[float, float]:
    """Shrink the angle brackets around a boundary self-crossing."""
    resolution = get_config().geometry.angle_resolution
    offsets = np.linspace(-1.0, 1.0, 9)
    while width > resolution:
        a = phi1 + width * offsets
        b = phi2 + width * offsets
        pa = conformal_map.evaluate(np.exp(1j * a))
        pb = conformal_map.evaluate(np.exp(1j * b))
        hit = _first_crossing(pa[:-1], pa[1:], pb[:-1], pb[1:], same_closed_curve=False)
        if hit is None:
            break
        i, j, s, t = hit
        step = width / 4.0
        phi1 = float(a[i] + s * step)
        phi2 = float(b[j] + t * step)
        width = step
    return phi1 % (2 * math.pi), phi2 % (2 * math.pi)


def _derivative_zero(conformal_map: ConformalMap, boundary: BoundaryCurve) -> Optional[UnivalenceFailure]:
    geometry = get_config().geometry
    speeds = np.abs(boundary.tangents)
    scale = float(np.max(speeds))
    k = int(np.argmin(speeds))
    phi_k = float(boundary.nodes[k])
    dphi = 2.0 * math.pi / boundary.n

    result = optimize.minimize_scalar(
        lambda phi: abs(conformal_map.derivative(complex(math.cos(phi), math.sin(phi)))),
        bounds=(phi_k - dphi, phi_k + dphi),
        method="bounded",
        options={"xatol": geometry.angle_resolution},
    )
    minimum = min(float(result.fun), float(speeds[k]))
    phi_min = float(result.x) if result.fun <= speeds[k] else phi_k
    if minimum <= geometry.derivative_zero_tolerance * scale:
        logger.debug("f' vanishes on the boundary at phi=%.12g", phi_min)
        return UnivalenceFailure(FailureKind.BOUNDARY_DERIVATIVE_ZERO, (phi_min % (2 * math.pi),))
    return None


def _symmetric_crossing(conformal_map: ConformalMap, n: int) -> Optional[UnivalenceFailure]:
    """
    For real-symmetric maps, f(e^{iφ}) = f(e^{−iφ}) exactly when Im f(e^{iφ}) = 0;
    a zero of Im f on the open upper arc is therefore a self-contact.
    """
    half = np.pi * np.arange(1, n // 2) / (n // 2)
    heights = np.imag(conformal_map.evaluate(np.exp(1j * half)))
    exact = np.flatnonzero(heights == 0)
    if len(exact):
        phi = float(half[exact[0]])
        return UnivalenceFailure(FailureKind.SELF_INTERSECTION, (phi, 2 * math.pi - phi))

    changes = np.flatnonzero(heights[:-1] * heights[1:] < 0)
    if len(changes) == 0:
        return None
    k = int(changes[0])
    phi = optimize.brentq(
        lambda t: float(np.imag(conformal_map.evaluate(complex(math.cos(t), math.sin(t))))),
        float(half[k]),
        float(half[k + 1]),
        xtol=get_config().geometry.angle_resolution,
    )
    logger.debug("Boundary meets its mirror image at phi=%.12g", phi)
    return UnivalenceFailure(FailureKind.SELF_INTERSECTION, (phi, 2 * math.pi - phi))


def _near_contacts(boundary: BoundaryCurve) -> int:
    """Count non-adjacent sample pairs closer than the local sampling step allows."""
    factor = get_config().geometry.near_contact_factor
    lengths = boundary.segment_lengths
    coords = np.column_stack([boundary.points.real, boundary.points.imag])
    pairs = cKDTree(coords).query_pairs(r=factor * float(np.max(lengths)), output_type="ndarray")
    if len(pairs) == 0:
        return 0
    i, j = pairs[:, 0], pairs[:, 1]
    gap = np.abs(i - j)
    gap = np.minimum(gap, boundary.n - gap)
    distance = np.abs(boundary.points[i] - boundary.points[j])
    local = factor * np.maximum(lengths[i], lengths[j])
    return int(np.count_nonzero((gap > 2) & (distance < local)))


def _assess(conformal_map: ConformalMap, boundary: BoundaryCurve) -> Optional[UnivalenceFailure]:
    failure = _derivative_zero(conformal_map, boundary)
    if failure is not None:
        return failure

    if conformal_map.is_real_symmetric:
        failure = _symmetric_crossing(conformal_map, boundary.n)
        if failure is not None:
            return failure

    crossing = _closed_polygon_crossing(boundary.points)
    if crossing is None:
        return None
    i, j, s, t = crossing
    dphi = 2.0 * math.pi / boundary.n
    phi1, phi2 = _refine_crossing(conformal_map, (i + s) * dphi, (j + t) * dphi, dphi)
    return UnivalenceFailure(FailureKind.SELF_INTERSECTION, (phi1, phi2))


def check_univalence(
    conformal_map: ConformalMap,
    n: Optional[int] = None,
    auto_refine: bool = True,
) -> UnivalenceVerdict:
    """
    Decide whether a map is injective on the closed disk.

    The boundary is tested for a zero of |f'| (relative to max |f'|) and
    for self-intersection: a mirror-contact scan for real-symmetric maps
    and a segment-pair sweep in every case. A positive verdict with
    non-adjacent samples in near contact doubles n (with a resolution
    warning) up to the configured maximum.

    Args:
        conformal_map: Map analytic on the closed disk.
        n: Initial sample count (default from config).
        auto_refine: Set False to accept the verdict at n as is.

    Returns:
        UnivalenceVerdict with the failure location when not univalent.
    """
    config = get_config()
    n = config.spectral.default_grid if n is None else n
    while True:
        boundary = sample_boundary(conformal_map, n)
        failure = _assess(conformal_map, boundary)
        if failure is not None:
            return UnivalenceVerdict(False, failure, grid=n)

        contacts = _near_contacts(boundary)
        if not contacts or not auto_refine or n >= config.spectral.max_grid:
            return UnivalenceVerdict(True, grid=n, resolution_limited=bool(contacts))

        warn(f"{contacts} near contacts unresolved at n={n}; doubling the grid", ResolutionWarning)
        n *= 2


def check_curve_univalence(boundary: BoundaryCurve) -> UnivalenceVerdict:
    """Univalence of a sampled closed curve without access to its map."""
    speeds = np.abs(boundary.tangents)
    scale = float(np.max(speeds))
    if scale == 0.0 or float(np.min(speeds)) <= get_config().geometry.derivative_zero_tolerance * scale:
        k = int(np.argmin(speeds))
        failure = UnivalenceFailure(FailureKind.BOUNDARY_DERIVATIVE_ZERO, (float(boundary.nodes[k]),))
        return UnivalenceVerdict(False, failure, grid=boundary.n)

    crossing = _closed_polygon_crossing(boundary.points)
    if crossing is not None:
        i, j, s, t = crossing
        dphi = 2.0 * math.pi / boundary.n
        failure = UnivalenceFailure(FailureKind.SELF_INTERSECTION, ((i + s) * dphi, (j + t) * dphi))
        return UnivalenceVerdict(False, failure, grid=boundary.n)

    return UnivalenceVerdict(True, grid=boundary.n, resolution_limited=bool(_near_contacts(boundary)))


def critical_parameter(
    build: Callable[[float], ConformalMap],
    bracket: Sequence[float],
    n: Optional[int] = None,
    rtol: Optional[float] = None,
) -> float:
    """
    Bisect a one-parameter family for the change of univalence verdict.

    Args:
        build: Maps a parameter value to a ConformalMap.
        bracket: (lo, hi) with different verdicts at the two ends.
        n: Sample count for every verdict (no automatic doubling).
        rtol: Relative bracket width at which to stop (default 1e-6).

    Returns:
        Midpoint of the final bracket.

    Raises:
        BracketError: If both ends give the same verdict.
    """
    rtol = get_config().geometry.bisection_rtol if rtol is None else rtol
    lo, hi = float(bracket[0]), float(bracket[1])

    def verdict(value: float) -> bool:
        return check_univalence(build(value), n, auto_refine=False).univalent

    lo_verdict = verdict(lo)
    if verdict(hi) == lo_verdict:
        raise BracketError(f"same univalence verdict ({lo_verdict}) at both ends of [{lo}, {hi}]")

    steps = 0
    while abs(hi - lo) > rtol * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if verdict(mid) == lo_verdict:
            lo = mid
        else:
            hi = mid
        steps += 1

    logger.info("Critical parameter %.10g after %d bisection steps", 0.5 * (lo + hi), steps)
    return 0.5 * (lo + hi)


# =============================================================================
# Area, winding and inversion
# =============================================================================

def domain_area(boundary: BoundaryCurve) -> float:
    """
    Enclosed area (1/2)∮(x dy − y dx) by the trapezoid rule.

    Raises:
        GeometryError: If the boundary is not a simple, positively oriented curve.
    """
    verdict = check_curve_univalence(boundary)
    if not verdict.univalent:
        raise GeometryError(f"area of a non-univalent boundary ({verdict.failure.kind.value})")

    area = 0.5 * (2.0 * math.pi / boundary.n) * float(np.sum(np.imag(np.conj(boundary.points) * boundary.tangents)))
    if area <= 0:
        raise GeometryError(f"boundary is negatively oriented (signed area {area:.6g})")
    return area


def winding_number(points: np.ndarray, z):
    """
    Winding number of the closed polygon through points about z.

    Args:
        points: Closed curve samples (last point joins the first).
        z: Scalar or array of query points off the curve.

    Returns:
        int for scalar z, integer array otherwise.
    """
    scalar = np.isscalar(z)
    queries = np.atleast_1d(np.asarray(z, dtype=complex))
    ring = np.asarray(points, dtype=complex)
    out = np.empty(queries.shape, dtype=int)
    for start in range(0, len(queries), 512):
        q = queries[start:start + 512, None]
        rel = ring[None, :] - q
        turns = np.angle(np.roll(rel, -1, axis=1) / rel).sum(axis=1) / (2.0 * math.pi)
        out[start:start + 512] = np.rint(turns).astype(int)
    return int(out[0]) if scalar else out


def invert_map(conformal_map: ConformalMap, z: complex, tol: float = 1e-13) -> complex:
    """
    Locate ζ in the open disk with f(ζ) = z.

    Newton's iteration is seeded from the best point of a polar grid.

    Raises:
        DomainError: If the preimage is not inside the unit disk.
        ConvergenceError: If Newton's iteration stalls.
    """
    z = validate_complex(z, "z")
    radii = np.concatenate(([0.0], np.linspace(0.1, 0.9, 9), [0.95, 0.99]))
    angles = circle_nodes(64)
    seeds = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    values = conformal_map.evaluate(seeds)
    zeta = complex(seeds[int(np.argmin(np.abs(values - z)))])

    scale = max(1.0, abs(z), abs(conformal_map.center))
    for _ in range(60):
        residual = complex(conformal_map.evaluate(zeta)) - z
        if abs(residual) <= tol * scale:
            break
        slope = complex(conformal_map.derivative(zeta))
        if slope == 0:
            raise ConvergenceError(f"f' vanishes at {zeta} during inversion")
        zeta -= residual / slope
        if abs(zeta) >= 1.0:
            zeta *= (1.0 - 1e-9) / abs(zeta)
    else:
        raise ConvergenceError(f"could not invert the map at {z}")

    if abs(zeta) >= 1.0 - 1e-9:
        raise DomainError(f"{z} is not inside the mapped domain")
    return zeta

