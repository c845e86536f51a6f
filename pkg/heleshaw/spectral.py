"""
Quadrature and Fourier primitives on the unit circle.

Boundary data of every solver is sampled on the uniform grid
φ_k = 2πk/n, k = 0..n−1. For data analytic in an annulus around |ζ| = 1
the trapezoid rule and the discrete Fourier transform converge
geometrically, which is what makes n = 2048 ample for the closed-form
families and a few doublings enough near critical parameters.

Fourier coefficients are stored in FFT order: index k holds c_j with
j = k for k < n/2 and j = k − n otherwise, so j runs over [−n/2, n/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre, polynomial
from scipy import optimize

from .config import get_config
from .logging_config import get_logger
from .validation import (
    BracketError,
    ConvergenceError,
    DomainError,
    HeleShawError,
    InputValidationError,
    ResolutionWarning,
    validate_grid_size,
    warn,
)

logger = get_logger(__name__)


def circle_nodes(n: int) -> np.ndarray:
    """Angles φ_k = 2πk/n."""
    return 2.0 * np.pi * np.arange(n) / n


def circle_points(n: int) -> np.ndarray:
    """Points ζ_k = e^{iφ_k} on the unit circle."""
    return np.exp(1j * circle_nodes(n))


# =============================================================================
# Grids and series
# =============================================================================

@dataclass(frozen=True)
class CircleGrid:
    """Complex values sampled at the n uniform nodes of the unit circle."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.ndim != 1:
            raise InputValidationError("circle grid values must be one-dimensional")
        validate_grid_size(len(values))
        if not np.all(np.isfinite(values)):
            raise InputValidationError("circle grid values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(cls, fn: Callable[[np.ndarray], np.ndarray], n: int) -> "CircleGrid":
        """Sample a vectorized function of ζ at the grid points."""
        validate_grid_size(n)
        return cls(np.asarray(fn(circle_points(n)), dtype=complex) * np.ones(n))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def nodes(self) -> np.ndarray:
        return circle_nodes(self.n)

    @property
    def points(self) -> np.ndarray:
        return circle_points(self.n)


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients c_j, j ∈ [−n/2, n/2), of a function on the circle."""

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=complex)
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def frequencies(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    def coefficient(self, j: int) -> complex:
        if not -self.n // 2 <= j < self.n // 2:
            raise IndexError(f"frequency {j} outside [{-self.n // 2}, {self.n // 2})")
        return complex(self.coefficients[j % self.n])

    def at_nodes(self) -> np.ndarray:
        """Values at the grid nodes (inverse DFT)."""
        return np.fft.ifft(self.coefficients) * self.n

    def derivative_at_nodes(self) -> np.ndarray:
        """d/dφ of the series at the grid nodes; the Nyquist mode is dropped."""
        j = self.frequencies.astype(float)
        j[self.n // 2] = 0.0
        return np.fft.ifft(1j * j * self.coefficients) * self.n

    def taylor(self) -> np.ndarray:
        """Coefficients c_0 .. c_{n/2−1} of the non-negative powers."""
        return np.array(self.coefficients[: self.n // 2])

    def evaluate(self, zeta) -> np.ndarray:
        """Σ c_j ζ^j over all stored frequencies; ζ ≠ 0 when negative modes are present."""
        zeta = np.asarray(zeta, dtype=complex)
        result = polynomial.polyval(zeta, self.taylor())
        negative = self.coefficients[self.n // 2:][::-1]
        if np.any(negative != 0):
            if np.any(zeta == 0):
                raise DomainError("series with negative powers cannot be evaluated at ζ = 0")
            # c_{-1}, c_{-2}, ... as a polynomial in 1/ζ without constant term
            result = result + polynomial.polyval(1.0 / zeta, np.concatenate(([0.0], negative)))
        return result

    def tail_ratio(self) -> float:
        """|c_{−n/2}| relative to the largest coefficient magnitude."""
        largest = float(np.max(np.abs(self.coefficients)))
        if largest == 0.0:
            return 0.0
        return float(abs(self.coefficients[self.n // 2])) / largest

    def is_resolved(self, tolerance: Optional[float] = None) -> bool:
        if tolerance is None:
            tolerance = get_config().spectral.tail_tolerance
        return self.tail_ratio() <= tolerance


def fourier_series(grid: CircleGrid) -> FourierSeries:
    """Discrete Fourier coefficients c_j = (1/n) Σ_k g_k e^{−ijφ_k}."""
    return FourierSeries(np.fft.fft(grid.values) / grid.n)


# =============================================================================
# Quadrature and Cauchy splitting
# =============================================================================

def circle_quadrature(grid: CircleGrid) -> complex:
    """
    Trapezoid rule (2π/n) Σ g_k over the circle.

    Contour integrals ∮ g(ζ) dζ are obtained by sampling g(ζ)·iζ.
    """
    return complex(2.0 * np.pi * np.mean(grid.values))


def cauchy_projection(grid: CircleGrid) -> Tuple[FourierSeries, FourierSeries]:
    """
    Split boundary data g into g⁺ (analytic in the disk) and g⁻ (analytic
    outside, vanishing at infinity apart from the constant share).

    plus keeps c_j for j ≥ 1 and c_0/2; minus keeps c_j for j ≤ −1 and c_0/2.
    The Nyquist mode j = −n/2 goes to minus.

    Returns:
        (plus, minus) Fourier series with plus + minus = g at the nodes.
    """
    series = fourier_series(grid)
    n = grid.n
    if not series.is_resolved():
        warn(
            f"Fourier tail {series.tail_ratio():.2e} not resolved at n={n}",
            ResolutionWarning,
        )

    c = series.coefficients
    plus = np.zeros(n, dtype=complex)
    minus = np.zeros(n, dtype=complex)
    plus[1: n // 2] = c[1: n // 2]
    minus[n // 2:] = c[n // 2:]
    plus[0] = minus[0] = 0.5 * c[0]
    return FourierSeries(plus), FourierSeries(minus)


@lru_cache(maxsize=16)
def gauss_legendre_half_circle(count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, π]."""
    x, w = legendre.leggauss(count)
    nodes = 0.5 * np.pi * (x + 1.0)
    weights = 0.5 * np.pi * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


# =============================================================================
# Root finding
# =============================================================================

def find_root_1d(
    fn: Callable[[float], float],
    bracket: Sequence[float],
    ftol: Optional[float] = None,
) -> float:
    """
    Root of a scalar function on a sign-changing bracket (Brent's
    bisection/secant/inverse-quadratic hybrid).

    Args:
        fn: Continuous real function.
        bracket: (a, b) with fn(a)·fn(b) <= 0.
        ftol: Residual tolerance, default from config (1e-12).

    Returns:
        x with |fn(x)| <= ftol, or the machine-resolution root when fn is
        too steep to reach ftol in floating point.

    Raises:
        BracketError: If fn does not change sign on the bracket.
        ConvergenceError: If the residual test fails.
    """
    roots = get_config().roots
    ftol = roots.ftol_1d if ftol is None else ftol
    a, b = float(bracket[0]), float(bracket[1])
    fa, fb = fn(a), fn(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not (math.isfinite(fa) and math.isfinite(fb)) or fa * fb > 0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")

    root = optimize.brentq(fn, a, b, xtol=roots.xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    residual = fn(root)
    if abs(residual) <= ftol:
        return root

    delta = 4 * np.finfo(float).eps * max(1.0, abs(root))
    if fn(root - delta) * fn(root + delta) <= 0:
        logger.debug("Root %.17g limited by floating point: |f| = %.3e", root, abs(residual))
        return root

    raise ConvergenceError(f"root residual {abs(residual):.3e} exceeds {ftol:.1e}")


def _safe_eval(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> Optional[np.ndarray]:
    try:
        value = np.asarray(fn(x), dtype=float)
    except HeleShawError as e:
        logger.debug("Trial point %s rejected: %s", x, e)
        return None
    return value if np.all(np.isfinite(value)) else None


def _jacobian(fn, x: np.ndarray, fx: np.ndarray, step: float) -> np.ndarray:
    jac = np.empty((len(fx), len(x)))
    for k in range(len(x)):
        h = step * max(1.0, abs(x[k]))
        shifted = x.copy()
        shifted[k] += h
        value = _safe_eval(fn, shifted)
        if value is None:
            shifted[k] = x[k] - h
            value = _safe_eval(fn, shifted)
            h = -h
        if value is None:
            raise ConvergenceError(f"cannot difference the residual around {x}")
        jac[:, k] = (value - fx) / h
    return jac


def find_root_2d(
    fn2: Callable[[np.ndarray], np.ndarray],
    guess: Sequence[float],
    ftol: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> Tuple[float, float]:
    """
    Damped Newton iteration with a forward-difference Jacobian.

    Trial points where fn2 raises a package error (for instance boundary
    data leaving the admissible range) are treated as infeasible and the
    step is halved.

    Args:
        fn2: Residual map R² → R².
        guess: Starting point.
        ftol: Stop when ‖fn2‖ <= ftol (default 1e-10).
        max_iterations: Iteration cap (default 100).

    Returns:
        The root as a tuple.

    Raises:
        ConvergenceError: If no admissible descent step exists or the
            iteration cap is reached.
    """
    roots = get_config().roots
    ftol = roots.ftol_2d if ftol is None else ftol
    max_iterations = roots.max_newton_iterations if max_iterations is None else max_iterations

    x = np.asarray(guess, dtype=float).copy()
    fx = _safe_eval(fn2, x)
    if fx is None:
        raise ConvergenceError(f"initial guess {tuple(x)} is not admissible")
    norm = float(np.linalg.norm(fx))

    for iteration in range(max_iterations):
        logger.debug("Newton iteration %d: x=%s |F|=%.3e", iteration, x, norm)
        if norm <= ftol:
            return float(x[0]), float(x[1])

        jac = _jacobian(fn2, x, fx, roots.fd_step)
        try:
            step = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            raise ConvergenceError(f"singular Jacobian at {tuple(x)}")

        damping = 1.0
        while damping > 1e-12:
            trial = x + damping * step
            f_trial = _safe_eval(fn2, trial)
            if f_trial is not None:
                trial_norm = float(np.linalg.norm(f_trial))
                if trial_norm < (1.0 - 1e-4 * damping) * norm or trial_norm <= ftol:
                    break
            damping *= 0.5
        else:
            raise ConvergenceError(f"no admissible descent step from {tuple(x)} (|F|={norm:.3e})")

        x, fx, norm = trial, f_trial, trial_norm

    if norm <= ftol:
        return float(x[0]), float(x[1])
    raise ConvergenceError(f"Newton iteration did not converge in {max_iterations} steps (|F|={norm:.3e})")
