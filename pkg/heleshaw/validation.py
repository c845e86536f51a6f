"""
Exceptions, warnings and input validators for heleshaw.

Every error raised deliberately by the package derives from HeleShawError,
so callers (the CLI in particular) can separate solver failures from
programming errors with a single except clause.
"""

from __future__ import annotations

import math
import os
import re
import threading
import warnings
from contextlib import contextmanager
from typing import Iterable, Iterator, List

from .logging_config import get_logger

logger = get_logger(__name__)

MIN_GRID = 64

# Patterns refused in output directories
DANGEROUS_PATTERNS = [
    r'\.\./',
    r'\.\.\\',
    r'\x00',
]


class HeleShawError(Exception):
    """Base exception for heleshaw errors."""
    pass


class InputValidationError(HeleShawError):
    """Raised when a parameter is malformed, non-finite or out of range."""
    pass


class DomainError(HeleShawError):
    """Raised when a function is evaluated outside its domain (e.g. at a pole)."""
    pass


class IntegrationError(HeleShawError):
    """Raised when an adaptive quadrature meets a non-finite integrand."""
    pass


class BracketError(HeleShawError):
    """Raised when a bracket does not enclose a sign or verdict change."""
    pass


class ConvergenceError(HeleShawError):
    """Raised when an iterative solve fails to reach its tolerance."""
    pass


class AnalyticityError(HeleShawError):
    """Raised when sampled coefficients do not decay like an analytic map's."""
    pass


class GeometryError(HeleShawError):
    """Raised when a geometric quantity is requested for an invalid boundary."""
    pass


class FeasibilityError(HeleShawError):
    """Raised when singularity and charge data cannot support an equilibrium."""
    pass


class ReductionInapplicableError(HeleShawError):
    """Raised when the complex potential is not univalent on the domain."""
    pass


class UnsupportedScenarioError(HeleShawError):
    """Raised when the pole structure or field kind is not supported."""
    pass


class UnsupportedRepresentationError(HeleShawError):
    """Raised when a Cauchy transform is not rational."""
    pass


class NotADiskError(HeleShawError):
    """Raised when a transform with several poles is read as a disk."""
    pass


class BranchError(HeleShawError):
    """Raised when an inverse core map would cross its branch cut."""
    pass


class InvalidParametersError(HeleShawError):
    """Raised when boundary data leaves the range of the profile inverse."""
    pass


class AssumptionViolatedError(HeleShawError):
    """Raised when a solution violates a structural assumption of its solver."""
    pass


class ScenarioConfigError(HeleShawError):
    """Raised when a scenario file fails schema validation."""

    def __init__(self, issues: Iterable[str]):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues) or "invalid scenario")


class HeleShawWarning(UserWarning):
    """Base class for non-fatal numerical warnings."""
    pass


class ResolutionWarning(HeleShawWarning):
    """Grid too coarse to resolve the data to the requested tolerance."""
    pass


class IllConditionedWarning(HeleShawWarning):
    """A point lies within the collar of a boundary."""
    pass


class UnphysicalWarning(HeleShawWarning):
    """A transform or parameter set has no physical domain."""
    pass


_collector = threading.local()


@contextmanager
def collect_warnings() -> Iterator[List[str]]:
    """
    Collect package warnings raised on the current thread.

    While active, warn() appends to the yielded list instead of going
    through the warnings module. Collectors nest; each thread has its own.
    """
    outer = getattr(_collector, "messages", None)
    messages: List[str] = []
    _collector.messages = messages
    try:
        yield messages
    finally:
        _collector.messages = outer


def warn(message: str, category: type = HeleShawWarning) -> None:
    """Emit a package warning and mirror it to the log."""
    logger.warning(message)
    messages = getattr(_collector, "messages", None)
    if messages is not None:
        messages.append(message)
        return
    warnings.warn(message, category, stacklevel=3)


def validate_finite(value, name: str) -> complex | float:
    """
    Check that a real or complex number is finite.

    Args:
        value: Number to check.
        name: Parameter name for the error message.

    Returns:
        The value unchanged.

    Raises:
        InputValidationError: If the value is not numeric or not finite.
    """
    if isinstance(value, bool) or not isinstance(value, (int, float, complex)):
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise InputValidationError(f"{name} must be a number, got {type(value).__name__}")

    parts = (value.real, value.imag) if isinstance(value, complex) else (value,)
    for part in parts:
        if math.isnan(part) or math.isinf(part):
            raise InputValidationError(f"{name} must be finite, got {value}")

    return value


def validate_positive(value, name: str) -> float:
    """Check that a real number is finite and strictly positive."""
    value = validate_finite(value, name)
    if isinstance(value, complex):
        raise InputValidationError(f"{name} must be real, got {value}")
    if value <= 0:
        raise InputValidationError(f"{name} must be positive, got {value}")
    return float(value)


def validate_grid_size(n: int) -> int:
    """
    Check a circle grid size: an integer power of two, at least MIN_GRID.

    Raises:
        InputValidationError: If n is not an admissible grid size.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputValidationError(f"Grid size must be an integer, got {type(n).__name__}")
    if n < MIN_GRID:
        raise InputValidationError(f"Grid size must be at least {MIN_GRID}, got {n}")
    if n & (n - 1):
        raise InputValidationError(f"Grid size must be a power of two, got {n}")
    return n


def validate_output_dir(path: str) -> str:
    """
    Validate an output directory and create it if needed.

    Args:
        path: Directory where CSV and SVG files are written.

    Returns:
        The absolute directory path.

    Raises:
        InputValidationError: If the path is empty or cannot be created,
            or contains traversal patterns.
    """
    if not path:
        raise InputValidationError("Output directory cannot be empty")

    if not isinstance(path, str):
        raise InputValidationError(f"Output directory must be a string, got {type(path).__name__}")

    for pattern in DANGEROUS_PATTERNS:
        if re.search(pattern, path):
            raise InputValidationError(f"Output directory contains a forbidden pattern: {path!r}")

    abs_path = os.path.abspath(os.path.normpath(path))
    try:
        os.makedirs(abs_path, exist_ok=True)
    except OSError as e:
        raise InputValidationError(f"Cannot create output directory: {e}")

    return abs_path


def validate_complex(value, name: str = "value") -> complex:
    """Coerce to a finite complex number."""
    try:
        value = complex(value)
    except (TypeError, ValueError):
        raise InputValidationError(f"{name} must be a complex number, got {type(value).__name__}")
    return validate_finite(value, name)
