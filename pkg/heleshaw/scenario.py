"""
Scenario files and the preset catalogue.

A scenario is a JSON object naming a solver, its parameters, an optional
sweep over one parameter, and output settings. See
docs/scenario_schema.md for the schema. Validation collects every issue
before raising ScenarioConfigError, so a broken file is reported in one go.

Usage:
    from .scenario import load_scenario, get_preset

    scenario = load_scenario("fig3.json")
    scenario = get_preset("fig3").with_overrides(grid=4096)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .field import MonotoneProfile
from .logging_config import get_logger
from .validation import MIN_GRID, ScenarioConfigError

logger = get_logger(__name__)


class Solver(Enum):
    EXAMPLE1 = "example1"
    DIPOLE_LIMIT = "dipole_limit"
    EXAMPLE2 = "example2"
    EXAMPLE3 = "example3"
    RH_UNIDIRECTIONAL = "rh_unidirectional"
    RH_AXISYMMETRIC = "rh_axisymmetric"
    RH_COMPOSED = "rh_composed"
    GRAVITY_DYNAMICS = "gravity_dynamics"

    @property
    def is_closed_form(self) -> bool:
        return self in CLOSED_FORM_SOLVERS

    @property
    def is_riemann_hilbert(self) -> bool:
        return self.value.startswith("rh_")


CLOSED_FORM_SOLVERS = frozenset({Solver.EXAMPLE1, Solver.DIPOLE_LIMIT, Solver.EXAMPLE2, Solver.EXAMPLE3})

# Accepted parameter sets per solver; one alternative must be complete
REQUIRED_PARAMETERS: Dict[Solver, Tuple[Tuple[str, ...], ...]] = {
    Solver.EXAMPLE1: (("q", "a", "b", "Q"),),
    Solver.DIPOLE_LIMIT: (("mu", "a", "Q"),),
    Solver.EXAMPLE2: (("mu", "Q", "A"),),
    Solver.EXAMPLE3: (("beta", "Q", "a"),),
    Solver.RH_UNIDIRECTIONAL: (("alpha", "beta"), ("alpha", "B"), ("x0", "mu")),
    Solver.RH_AXISYMMETRIC: (("alpha", "beta"), ("alpha", "B"), ("r0", "mu")),
    Solver.RH_COMPOSED: (("alpha", "beta"), ("alpha", "B"), ("a", "mu")),
    Solver.GRAVITY_DYNAMICS: (("C", "A", "mu", "t"),),
}

OPTIONAL_PARAMETERS: Dict[Solver, Tuple[str, ...]] = {
    Solver.EXAMPLE2: ("B",),
    Solver.GRAVITY_DYNAMICS: ("center",),
}

PROFILE_KINDS = ("square", "identity", "power")


def known_parameters(solver: Solver) -> set:
    names = {name for group in REQUIRED_PARAMETERS[solver] for name in group}
    return names | set(OPTIONAL_PARAMETERS.get(solver, ()))


# =============================================================================
# Scenario data classes
# =============================================================================

@dataclass(frozen=True)
class SweepSpec:
    """One parameter taking a list of values; one run item per value."""

    parameter: str
    values: Tuple[float, ...]


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "."
    csv: bool = True
    svg: bool = True
    parameter_table: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    solver: Solver
    parameters: Dict[str, float] = field(default_factory=dict)
    sweep: Optional[SweepSpec] = None
    grid: Optional[int] = None
    verify: bool = False
    tolerance: Optional[float] = None
    profile: Optional[Tuple[str, float]] = None
    output: OutputSpec = field(default_factory=OutputSpec)
    description: str = ""

    @classmethod
    def from_dict(cls, data: Any) -> "ScenarioConfig":
        """
        Parse and validate a scenario object.

        Raises:
            ScenarioConfigError: Listing every problem found.
        """
        issues: List[str] = []
        if not isinstance(data, dict):
            raise ScenarioConfigError(["scenario must be a JSON object"])

        allowed = {"name", "solver", "parameters", "sweep", "grid", "verify", "tolerance", "profile", "output", "description"}
        for key in sorted(set(data) - allowed):
            issues.append(f"unknown key '{key}'")

        name = data.get("name", "scenario")
        if not isinstance(name, str) or not name or "/" in name or "\\" in name:
            issues.append("name must be a non-empty string without path separators")

        solver = None
        try:
            solver = Solver(data.get("solver"))
        except ValueError:
            issues.append(f"solver must be one of {[s.value for s in Solver]}, got {data.get('solver')!r}")

        parameters = _parse_parameters(data.get("parameters", {}), issues)
        sweep = _parse_sweep(data.get("sweep"), issues)
        grid = _parse_grid(data.get("grid"), issues)
        tolerance = _parse_tolerance(data.get("tolerance"), issues)
        profile = _parse_profile(data.get("profile"), issues)
        output = _parse_output(data.get("output", {}), issues)

        verify = data.get("verify", False)
        if not isinstance(verify, bool):
            issues.append("verify must be true or false")

        description = data.get("description", "")
        if not isinstance(description, str):
            issues.append("description must be a string")

        if solver is not None:
            _check_solver_parameters(solver, parameters, sweep, issues)
            if profile is not None and not solver.is_riemann_hilbert:
                issues.append(f"profile applies to Riemann-Hilbert solvers only, not {solver.value}")

        if issues:
            raise ScenarioConfigError(issues)

        return cls(
            name=name,
            solver=solver,
            parameters=parameters,
            sweep=sweep,
            grid=grid,
            verify=verify,
            tolerance=tolerance,
            profile=profile,
            output=output,
            description=description,
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "solver": self.solver.value,
            "parameters": dict(self.parameters),
            "verify": self.verify,
            "output": {
                "directory": self.output.directory,
                "csv": self.output.csv,
                "svg": self.output.svg,
                "parameter_table": self.output.parameter_table,
            },
        }
        if self.sweep is not None:
            data["sweep"] = {"parameter": self.sweep.parameter, "values": list(self.sweep.values)}
        if self.grid is not None:
            data["grid"] = self.grid
        if self.tolerance is not None:
            data["tolerance"] = self.tolerance
        if self.profile is not None:
            data["profile"] = {"kind": self.profile[0], "exponent": self.profile[1]}
        if self.description:
            data["description"] = self.description
        return data

    def items(self) -> List[Dict[str, float]]:
        """Parameter sets of the run items, in sweep order."""
        if self.sweep is None:
            return [dict(self.parameters)]
        return [{**self.parameters, self.sweep.parameter: value} for value in self.sweep.values]

    def build_profile(self) -> Optional[MonotoneProfile]:
        """Profile H of a Riemann-Hilbert scenario; None selects the solver default."""
        if self.profile is None:
            return None
        kind, exponent = self.profile
        if kind == "square":
            return MonotoneProfile.square()
        if kind == "identity":
            return MonotoneProfile.identity()
        return MonotoneProfile.power(exponent)

    def with_overrides(
        self,
        grid: Optional[int] = None,
        tolerance: Optional[float] = None,
        svg: Optional[bool] = None,
        directory: Optional[str] = None,
        verify: Optional[bool] = None,
    ) -> "ScenarioConfig":
        """Copy with command-line overrides applied and re-validated."""
        data = self.to_dict()
        if grid is not None:
            data["grid"] = grid
        if tolerance is not None:
            data["tolerance"] = tolerance
        if svg is not None:
            data["output"]["svg"] = svg
        if directory is not None:
            data["output"]["directory"] = directory
        if verify is not None:
            data["verify"] = verify
        return ScenarioConfig.from_dict(data)


# =============================================================================
# Field parsers
# =============================================================================

def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _parse_parameters(raw: Any, issues: List[str]) -> Dict[str, float]:
    if not isinstance(raw, dict):
        issues.append("parameters must be an object of name → number")
        return {}
    parameters = {}
    for key, value in raw.items():
        if not _is_number(value):
            issues.append(f"parameter '{key}' must be a finite number, got {value!r}")
        else:
            parameters[key] = float(value)
    return parameters


def _parse_sweep(raw: Any, issues: List[str]) -> Optional[SweepSpec]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        issues.append("sweep must be an object with 'parameter' and 'values'")
        return None
    parameter = raw.get("parameter")
    values = raw.get("values")
    if not isinstance(parameter, str) or not parameter:
        issues.append("sweep.parameter must be a parameter name")
    if not isinstance(values, list) or not values:
        issues.append("sweep.values must be a non-empty list")
        return None
    if not all(_is_number(v) for v in values):
        issues.append("sweep.values must all be finite numbers")
        return None
    if not isinstance(parameter, str) or not parameter:
        return None
    return SweepSpec(parameter, tuple(float(v) for v in values))


def _parse_grid(raw: Any, issues: List[str]) -> Optional[int]:
    if raw is None:
        return None
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < MIN_GRID or raw & (raw - 1):
        issues.append(f"grid must be a power of two >= {MIN_GRID}, got {raw!r}")
        return None
    return raw


def _parse_tolerance(raw: Any, issues: List[str]) -> Optional[float]:
    if raw is None:
        return None
    if not _is_number(raw) or raw <= 0:
        issues.append(f"tolerance must be a positive number, got {raw!r}")
        return None
    return float(raw)


def _parse_profile(raw: Any, issues: List[str]) -> Optional[Tuple[str, float]]:
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, dict) or raw.get("kind") not in PROFILE_KINDS:
        issues.append(f"profile kind must be one of {list(PROFILE_KINDS)}")
        return None
    kind = raw["kind"]
    exponent = raw.get("exponent", {"square": 2.0, "identity": 1.0}.get(kind))
    if kind == "power" and (not _is_number(exponent) or exponent <= 0):
        issues.append("power profile needs a positive exponent")
        return None
    return kind, float(exponent)


def _parse_output(raw: Any, issues: List[str]) -> OutputSpec:
    if not isinstance(raw, dict):
        issues.append("output must be an object")
        return OutputSpec()
    unknown = set(raw) - {"directory", "csv", "svg", "parameter_table"}
    for key in sorted(unknown):
        issues.append(f"unknown output key '{key}'")
    directory = raw.get("directory", ".")
    if not isinstance(directory, str) or not directory:
        issues.append("output.directory must be a non-empty string")
        directory = "."
    flags = {}
    for key, default in (("csv", True), ("svg", True), ("parameter_table", False)):
        value = raw.get(key, default)
        if not isinstance(value, bool):
            issues.append(f"output.{key} must be true or false")
            value = default
        flags[key] = value
    return OutputSpec(directory=directory, **flags)


def _check_solver_parameters(
    solver: Solver,
    parameters: Dict[str, float],
    sweep: Optional[SweepSpec],
    issues: List[str],
) -> None:
    known = known_parameters(solver)
    for key in sorted(set(parameters) - known):
        issues.append(f"unknown parameter '{key}' for solver {solver.value}")
    if sweep is not None and sweep.parameter not in known:
        issues.append(f"sweep parameter '{sweep.parameter}' is not a {solver.value} parameter")

    present = set(parameters) | ({sweep.parameter} if sweep is not None else set())
    alternatives = REQUIRED_PARAMETERS[solver]
    if not any(set(group) <= present for group in alternatives):
        wanted = " or ".join("(" + ", ".join(group) + ")" for group in alternatives)
        issues.append(f"solver {solver.value} requires parameters {wanted}")


# =============================================================================
# Loading
# =============================================================================

def load_scenario(path: str) -> ScenarioConfig:
    """
    Read and validate a JSON scenario file.

    Raises:
        ScenarioConfigError: If the file cannot be read, is not JSON, or
            fails validation.
    """
    try:
        with open(Path(path), encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioConfigError([f"cannot read scenario file: {e}"])
    except json.JSONDecodeError as e:
        raise ScenarioConfigError([f"scenario file is not valid JSON: {e}"])
    logger.debug("Loaded scenario file %s", path)
    return ScenarioConfig.from_dict(data)


# =============================================================================
# Presets
# =============================================================================

SQRT2 = math.sqrt(2.0)

PRESETS: Dict[str, Dict[str, Any]] = {
    "fig1": {
        "description": "source q=1 at a=1, sink at b=4, charge Q at 0 outside the domain",
        "solver": "example1",
        "parameters": {"q": 1.0, "a": 1.0, "b": 4.0},
        "sweep": {"parameter": "Q", "values": [0.2734, 0.2959, 0.3189, 0.3424, 0.3664, 0.3909]},
    },
    "fig2": {
        "description": "dipole limit, mu=1 at a=1, charge Q at 0",
        "solver": "dipole_limit",
        "parameters": {"mu": 1.0, "a": 1.0},
        "sweep": {"parameter": "Q", "values": [0.2026, 0.2410, 0.2866, 0.3408, 0.4053]},
    },
    "fig3": {
        "description": "dipole mu=1 colocated with charge Q=1, sizes A = 1, sqrt2, 2, 2sqrt2, 4",
        "solver": "example2",
        "parameters": {"mu": 1.0, "Q": 1.0},
        "sweep": {"parameter": "A", "values": [1.0, SQRT2, 2.0, 2.0 * SQRT2, 4.0]},
    },
    "fig4": {
        "description": "quadrupole beta=1 between charges Q=1 at +-a",
        "solver": "example3",
        "parameters": {"beta": 1.0, "Q": 1.0},
        "sweep": {"parameter": "a", "values": [0.2677, 0.3183, 0.3785, 0.4502]},
    },
    "fig5": {
        "description": "unidirectional field H(x)=x^2, alpha=1, B=beta/alpha",
        "solver": "rh_unidirectional",
        "parameters": {"alpha": 1.0},
        "sweep": {"parameter": "B", "values": [2.00, 2.02, 2.06, 2.12, 2.20]},
        "output": {"parameter_table": True},
    },
    "fig7": {
        "description": "axisymmetric field H(r^2)=r^2, alpha=1, B=beta/alpha",
        "solver": "rh_axisymmetric",
        "parameters": {"alpha": 1.0},
        "sweep": {"parameter": "B", "values": [2.0, 2.021, 2.061, 2.121, 2.201]},
    },
    "fig8": {
        "description": "composed field H(Re z^2/2) with H(x)=x^2, alpha=1, B=beta/alpha",
        "solver": "rh_composed",
        "parameters": {"alpha": 1.0},
        "sweep": {"parameter": "B", "values": [2.0001, 2.0201, 2.0601, 2.1201, 2.2001]},
    },
    "gravity_split": {
        "description": "dipole mu=1 in a disk of residue A=2 under gravity C=1",
        "solver": "gravity_dynamics",
        "parameters": {"C": 1.0, "A": 2.0, "mu": 1.0},
        "sweep": {"parameter": "t", "values": [0.0, 0.5, 1.0, 2.0]},
    },
}


def list_presets() -> List[Tuple[str, str]]:
    """(id, description) of every preset, in catalogue order."""
    return [(name, spec["description"]) for name, spec in PRESETS.items()]


def get_preset(name: str) -> ScenarioConfig:
    """
    Scenario of a named preset.

    Raises:
        ScenarioConfigError: If no preset has that name.
    """
    if name not in PRESETS:
        raise ScenarioConfigError([f"unknown preset '{name}'; available: {', '.join(PRESETS)}"])
    data = json.loads(json.dumps(PRESETS[name]))
    data["name"] = name
    data.setdefault("verify", True)
    return ScenarioConfig.from_dict(data)
