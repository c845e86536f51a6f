"""
Tool configuration for heleshaw.

Numerical defaults (grid sizes, tolerances, test-family size, output
formatting) live in a tree of dataclasses. They can be overridden from an
optional YAML or TOML file; scenario parameters never come from here, they
come from the JSON scenario file handled by scenario.py.

Usage:
    from .config import get_config
    config = get_config()

    n = config.spectral.default_grid
    tol = config.moments.tolerance
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .logging_config import LEVEL_NAMES, get_logger

logger = get_logger(__name__)

try:
    import yaml
    HAS_YAML = True
except ImportError:
    HAS_YAML = False

try:
    import tomllib  # Python 3.11+
    HAS_TOML = True
except ImportError:
    try:
        import tomli as tomllib
        HAS_TOML = True
    except ImportError:
        HAS_TOML = False


# =============================================================================
# Configuration Data Classes
# =============================================================================

@dataclass
class SpectralConfig:
    """Circle grids and Fourier resolution."""

    default_grid: int = 2048
    max_grid: int = 32768
    min_grid: int = 64

    # |c_{n/2}| relative to max |c_j| above which the grid is unresolved
    tail_tolerance: float = 1e-8


@dataclass
class RootConfig:
    """Scalar and planar root finding."""

    xtol: float = 1e-15
    ftol_1d: float = 1e-12
    ftol_2d: float = 1e-10
    max_newton_iterations: int = 100
    fd_step: float = 1e-7


@dataclass
class GeometryConfig:
    """Univalence checks and critical-parameter bisection."""

    derivative_zero_tolerance: float = 1e-10
    bisection_rtol: float = 1e-6
    angle_resolution: float = 1e-10

    # Non-adjacent samples closer than this many segment lengths
    # make a verdict resolution-limited
    near_contact_factor: float = 2.0


@dataclass
class MomentsConfig:
    """Moment-identity verification."""

    test_family_size: int = 12
    tolerance: float = 1e-8
    boundary_collar: float = 1e-8
    oracle_grid: int = 2000


@dataclass
class RiemannHilbertConfig:
    """Parameter solves of the Riemann-Hilbert problems."""

    gauss_legendre_nodes: int = 200

    # Default Newton start: alpha = factor * mu, beta = ratio * alpha
    initial_alpha_factor: float = 1.0
    initial_ratio: float = 2.5


@dataclass
class OutputConfig:
    """CSV/SVG emission and report rendering."""

    csv_significant_digits: int = 17
    svg_margin: float = 0.05
    svg_size: int = 640
    max_workers: int = 4
    default_format: str = "toon"

    # Column specifications for the TOON table: (key, header, max_width)
    columns: List[tuple] = field(default_factory=lambda: [
        ("item", "item", 6),
        ("parameter", "param", 10),
        ("value", "value", 12),
        ("univalent", "univalent", 9),
        ("max_residual", "residual", 10),
        ("area", "area", 12),
        ("status", "status", 8),
    ])
    row_indent: str = "  "
    column_separator: str = " | "


@dataclass
class HeleShawConfig:
    """Main configuration container."""

    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    roots: RootConfig = field(default_factory=RootConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    moments: MomentsConfig = field(default_factory=MomentsConfig)
    riemann_hilbert: RiemannHilbertConfig = field(default_factory=RiemannHilbertConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # Package log level; debug = true forces DEBUG
    log_level: str = "warning"
    debug: bool = False


# =============================================================================
# Configuration Loading Functions
# =============================================================================

_SECTIONS = ("spectral", "roots", "geometry", "moments", "riemann_hilbert", "output")


def _load_from_yaml(config: HeleShawConfig, path: Path) -> None:
    """Load configuration from a YAML file."""
    if not HAS_YAML:
        return

    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)

        if data:
            _apply_config_dict(config, data)
    except (OSError, yaml.YAMLError) as e:
        logger.debug("Could not load YAML config from %s: %s", path, e)


def _load_from_toml(config: HeleShawConfig, path: Path) -> None:
    """Load configuration from a TOML file."""
    if not HAS_TOML:
        return

    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)

        if data:
            _apply_config_dict(config, data)
    except (OSError, Exception) as e:
        logger.debug("Could not load TOML config from %s: %s", path, e)


def _apply_config_dict(config: HeleShawConfig, data: Dict[str, Any]) -> None:
    """
    Apply a nested dictionary onto the config tree.

    Keys are matched against dataclass fields and values are coerced to the
    type of the current default; unknown keys are logged and ignored.
    """
    for section_name in _SECTIONS:
        section_data = data.get(section_name)
        if not section_data:
            continue

        section = getattr(config, section_name)
        for key, value in section_data.items():
            if not hasattr(section, key):
                logger.warning("Unknown config key %s.%s ignored", section_name, key)
                continue

            current = getattr(section, key)
            if key == "columns":
                value = [tuple(c) for c in value]
            elif isinstance(current, bool):
                value = bool(value)
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            setattr(section, key, value)

    if "log_level" in data:
        config.log_level = str(data["log_level"])
    if "debug" in data:
        config.debug = bool(data["debug"])


def _find_config_file() -> Optional[Path]:
    """Find a configuration file in standard locations."""
    config_names = [
        "heleshaw.yaml",
        "heleshaw.yml",
        "heleshaw.toml",
        ".heleshaw.yaml",
        ".heleshaw.yml",
        ".heleshaw.toml",
    ]

    cwd = Path.cwd()
    for name in config_names:
        path = cwd / name
        if path.exists():
            return path

    home = Path.home()
    xdg_config = Path(os.getenv("XDG_CONFIG_HOME", home / ".config"))
    config_dir = xdg_config / "heleshaw"
    if config_dir.exists():
        for name in ["config.yaml", "config.yml", "config.toml"]:
            path = config_dir / name
            if path.exists():
                return path

    return None


# =============================================================================
# Singleton Configuration Instance
# =============================================================================

_config: Optional[HeleShawConfig] = None


def get_config(reload: bool = False) -> HeleShawConfig:
    """
    Get the global configuration instance.

    Loading order: dataclass defaults, then the first config file found in
    the working directory or ~/.config/heleshaw.

    Args:
        reload: If True, force reload of configuration

    Returns:
        The HeleShawConfig instance
    """
    global _config

    if _config is None or reload:
        _config = HeleShawConfig()

        config_file = _find_config_file()
        if config_file:
            logger.debug("Loading configuration from %s", config_file)
            if config_file.suffix in (".yaml", ".yml"):
                _load_from_yaml(_config, config_file)
            elif config_file.suffix == ".toml":
                _load_from_toml(_config, config_file)

    return _config


def load_config_from_file(path: str) -> HeleShawConfig:
    """
    Load configuration from a specific file path.

    Args:
        path: Path to the configuration file (YAML or TOML)

    Returns:
        A new HeleShawConfig instance with the loaded values
    """
    config = HeleShawConfig()
    file_path = Path(path)

    if not file_path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    if file_path.suffix in (".yaml", ".yml"):
        if not HAS_YAML:
            raise ImportError("PyYAML is required to load YAML config files. Install with: pip install pyyaml")
        _load_from_yaml(config, file_path)
    elif file_path.suffix == ".toml":
        if not HAS_TOML:
            raise ImportError("tomli is required to load TOML config files. Install with: pip install tomli")
        _load_from_toml(config, file_path)
    else:
        raise ValueError(f"Unsupported config file format: {file_path.suffix}")

    return config


def set_config(config: HeleShawConfig) -> None:
    """Install a configuration as the global instance."""
    global _config
    _config = config


def reset_config() -> None:
    """Reset the global configuration to None, forcing reload on next get_config()."""
    global _config
    _config = None


# =============================================================================
# Validation Functions
# =============================================================================

def _is_power_of_two(n: int) -> bool:
    return n > 0 and not n & (n - 1)


def validate_config(config: HeleShawConfig) -> List[str]:
    """
    Validate the configuration and return a list of issues.

    Args:
        config: The configuration to validate

    Returns:
        List of issue messages (empty if valid)
    """
    issues = []

    spectral = config.spectral
    if not _is_power_of_two(spectral.default_grid):
        issues.append("spectral.default_grid must be a power of two")
    if not _is_power_of_two(spectral.max_grid):
        issues.append("spectral.max_grid must be a power of two")
    if spectral.default_grid < spectral.min_grid:
        issues.append(f"spectral.default_grid must be at least {spectral.min_grid}")
    if spectral.max_grid < spectral.default_grid:
        issues.append("spectral.max_grid must be >= spectral.default_grid")
    if not 0 < spectral.tail_tolerance < 1:
        issues.append("spectral.tail_tolerance must lie in (0, 1)")

    if config.roots.max_newton_iterations < 1:
        issues.append("roots.max_newton_iterations must be at least 1")
    if config.roots.fd_step <= 0:
        issues.append("roots.fd_step must be positive")

    if not 0 < config.geometry.bisection_rtol < 1:
        issues.append("geometry.bisection_rtol must lie in (0, 1)")

    if config.moments.test_family_size < 1:
        issues.append("moments.test_family_size must be at least 1")
    if config.moments.tolerance <= 0:
        issues.append("moments.tolerance must be positive")

    if config.riemann_hilbert.gauss_legendre_nodes < 8:
        issues.append("riemann_hilbert.gauss_legendre_nodes should be at least 8")
    if config.riemann_hilbert.initial_ratio <= 2:
        issues.append("riemann_hilbert.initial_ratio must exceed 2")

    if not 1 <= config.output.csv_significant_digits <= 17:
        issues.append("output.csv_significant_digits must lie in [1, 17]")
    if not 0 <= config.output.svg_margin < 0.5:
        issues.append("output.svg_margin must lie in [0, 0.5)")
    if config.output.max_workers < 1:
        issues.append("output.max_workers must be at least 1")
    if config.output.default_format not in ("toon", "json", "rich"):
        issues.append(f"output.default_format must be 'toon', 'json', or 'rich', got '{config.output.default_format}'")
    if config.log_level.strip().upper() not in LEVEL_NAMES:
        issues.append(f"log_level must be one of {', '.join(sorted(LEVEL_NAMES)).lower()}, got '{config.log_level}'")

    return issues
