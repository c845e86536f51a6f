"""
Scenario execution: solver dispatch, verification and report assembly.

Sweep items are independent and run on a thread pool; each item either
produces a boundary with its verdicts or records the error that stopped
it, and the run carries on. Nothing is written here; emit.py writes the
files from the finished report.
"""

from __future__ import annotations

import cmath
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .closed_form import (
    dipole_limit_critical_charge,
    example1_critical_ratio,
    example1_feasibility,
    example2_critical_size,
    example3_critical_offset,
    scenario_data,
    solve_dipole_limit,
    solve_example1,
    solve_example2,
    solve_example3,
)
from .config import get_config
from .field import CoreKind, HarmonicCore, MonotoneProfile
from .geometry import (
    BoundaryCurve,
    ConformalMap,
    check_curve_univalence,
    check_univalence,
    domain_area,
    sample_boundary,
)
from .gravity_dynamics import (
    CauchyTransform,
    GravityScenario,
    disk_boundary,
    disk_parameters,
    evolve_transform,
    split_decomposition,
)
from .logging_config import get_logger
from .moments import (
    cauchy_transform,
    check_equilibrium,
    feasibility,
    rationality_check,
)
from .riemann_hilbert import (
    RHSolution,
    construct_axisymmetric,
    construct_composed,
    construct_unidirectional,
    solve_axisymmetric,
    solve_composed,
    solve_unidirectional,
)
from .scenario import ScenarioConfig, Solver
from .validation import FeasibilityError, HeleShawError, NotADiskError, collect_warnings

logger = get_logger(__name__)


# =============================================================================
# Report data
# =============================================================================

@dataclass(frozen=True)
class Marker:
    """A charge or hydrodynamic singularity drawn on the SVG."""

    kind: str
    position: complex

    def key(self) -> Tuple[str, float, float]:
        return self.kind, round(self.position.real, 12), round(self.position.imag, 12)


@dataclass
class ItemResult:
    """Outcome of one sweep item."""

    index: int
    parameters: Dict[str, float]
    status: str = "ok"
    error: Optional[str] = None
    univalent: Optional[bool] = None
    predicted_univalent: Optional[bool] = None
    area: Optional[float] = None
    max_residual: Optional[float] = None
    relative_residual: Optional[float] = None
    residuals: List[Tuple[str, complex]] = field(default_factory=list)
    equilibrium: Optional[bool] = None
    feasibility: Optional[float] = None
    rationality_defect: Optional[float] = None
    threshold: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    boundary: Optional[np.ndarray] = field(default=None, repr=False)
    markers: List[Marker] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready dictionary (boundary samples excluded)."""
        data = {
            "index": self.index,
            "parameters": dict(self.parameters),
            "status": self.status,
            "error": self.error,
            "univalent": self.univalent,
            "predicted_univalent": self.predicted_univalent,
            "area": self.area,
            "max_residual": self.max_residual,
            "relative_residual": self.relative_residual,
            "residuals": [
                {"label": label, "re": value.real, "im": value.imag} for label, value in self.residuals
            ],
            "equilibrium": self.equilibrium,
            "feasibility": self.feasibility,
            "rationality_defect": self.rationality_defect,
            "threshold": self.threshold,
            "details": self.details,
            "warnings": list(self.warnings),
        }
        return data


@dataclass
class RunReport:
    """Results of every item of a scenario run."""

    scenario: str
    solver: str
    verified: bool
    items: List[ItemResult]
    sweep_parameter: Optional[str] = None
    parameter_table: Optional[List[Dict[str, float]]] = None
    elapsed_seconds: float = 0.0

    @property
    def failed(self) -> List[ItemResult]:
        return [item for item in self.items if not item.ok]

    @property
    def succeeded(self) -> bool:
        """At least one item produced a result."""
        return any(item.ok for item in self.items)

    def markers(self) -> List[Marker]:
        """Distinct markers over all items, first occurrence first."""
        seen = {}
        for item in self.items:
            for marker in item.markers:
                seen.setdefault(marker.key(), marker)
        return list(seen.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "solver": self.solver,
            "verified": self.verified,
            "sweep_parameter": self.sweep_parameter,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
            "items": [item.to_dict() for item in self.items],
            "parameter_table": self.parameter_table,
        }


# =============================================================================
# Closed-form families
# =============================================================================

def _closed_form_map(solver: Solver, p: Dict[str, float]) -> ConformalMap:
    if solver is Solver.EXAMPLE1:
        return solve_example1(p["q"], p["a"], p["b"], p["Q"])
    if solver is Solver.DIPOLE_LIMIT:
        return solve_dipole_limit(p["mu"], p["a"], p["Q"])
    if solver is Solver.EXAMPLE2:
        return solve_example2(p["mu"], p["Q"], p["A"], B=p.get("B"))
    return solve_example3(p["beta"], p["Q"], p["a"])


def _threshold(solver: Solver, p: Dict[str, float]) -> Dict[str, Any]:
    """Closed-form critical value of the swept quantity and the side p is on."""
    if solver is Solver.EXAMPLE1:
        critical = example1_critical_ratio(p["q"], abs(p["Q"]))
        ratio = min(p["a"], p["b"]) / max(p["a"], p["b"])
        return {"name": "critical_ratio", "value": critical, "actual": ratio, "univalent": ratio >= critical}
    if solver is Solver.DIPOLE_LIMIT:
        critical = dipole_limit_critical_charge(p["mu"], p["a"])
        return {"name": "critical_charge", "value": critical, "actual": p["Q"], "univalent": p["Q"] >= critical}
    if solver is Solver.EXAMPLE2 and "B" in p:
        return {"name": "critical_B", "value": 1.0, "actual": p["B"], "univalent": p["B"] <= 1.0}
    if solver is Solver.EXAMPLE2:
        critical = example2_critical_size(p["mu"], p["Q"])
        return {"name": "critical_size", "value": critical, "actual": p["A"], "univalent": p["A"] >= critical}
    critical = example3_critical_offset(p["beta"], p["Q"])
    return {"name": "critical_offset", "value": critical, "actual": p["a"], "univalent": p["a"] >= critical}


def _run_closed_form(scenario: ScenarioConfig, item: ItemResult, n: int) -> None:
    solver = scenario.solver
    p = item.parameters
    try:
        conformal_map = _closed_form_map(solver, p)
    except FeasibilityError:
        if solver is Solver.EXAMPLE1:
            item.feasibility = example1_feasibility(p["q"], p["a"], p["b"], p["Q"])
        raise

    item.predicted_univalent = conformal_map.predicted_univalent
    item.threshold = _threshold(solver, p)
    item.details = {k: v for k, v in conformal_map.parameters.items()}

    verdict = check_univalence(conformal_map, n)
    item.univalent = verdict.univalent
    if verdict.failure is not None:
        item.details["failure"] = verdict.failure.kind.value
        item.details["failure_angles"] = list(verdict.failure.angles)

    boundary = sample_boundary(conformal_map, n)
    item.boundary = boundary.points
    if verdict.univalent:
        item.area = domain_area(boundary)

    field_spec, singularities = scenario_data(conformal_map)
    item.markers = [Marker("charge", complex(c.position)) for c in field_spec.charges]
    item.markers += [Marker(s.kind.value, s.position) for s in singularities]

    if not scenario.verify:
        return
    report = check_equilibrium(boundary, field_spec, singularities, tolerance=scenario.tolerance)
    item.max_residual = report.max_abs_residual
    item.relative_residual = report.relative_residual
    item.residuals = [(label, complex(value)) for label, value in report.residuals]
    item.equilibrium = report.verdict
    item.feasibility = feasibility(field_spec, singularities).real
    try:
        item.rationality_defect = rationality_check(conformal_map, field_spec, singularities, n)
    except HeleShawError as e:
        item.details["rationality_error"] = str(e)


# =============================================================================
# Riemann-Hilbert families
# =============================================================================

def _rh_solution(scenario: ScenarioConfig, p: Dict[str, float], n: int) -> RHSolution:
    solver = scenario.solver
    profile = scenario.build_profile()
    core = HarmonicCore(CoreKind.HALF_SQUARE)

    if "alpha" in p:
        alpha = p["alpha"]
        beta = p["beta"] if "beta" in p else p["B"] * alpha
        if solver is Solver.RH_UNIDIRECTIONAL:
            return construct_unidirectional(alpha, beta, profile, n)
        if solver is Solver.RH_AXISYMMETRIC:
            return construct_axisymmetric(alpha, beta, profile, n)
        return construct_composed(alpha, beta, core, profile, n)

    if solver is Solver.RH_UNIDIRECTIONAL:
        return solve_unidirectional(profile or MonotoneProfile.square(), p["x0"], p["mu"], n)
    if solver is Solver.RH_AXISYMMETRIC:
        return solve_axisymmetric(profile or MonotoneProfile.identity(), p["r0"], p["mu"], n)
    return solve_composed(core, profile or MonotoneProfile.square(), p["a"], p["mu"], n)


def _run_riemann_hilbert(scenario: ScenarioConfig, item: ItemResult, n: int) -> None:
    solution = _rh_solution(scenario, item.parameters, n)
    item.details = {
        "alpha": solution.alpha,
        "beta": solution.beta,
        "B": solution.ratio,
        "location": solution.location,
        "mu": solution.mu,
        "grid": solution.n,
    }
    item.boundary = solution.boundary.points
    item.markers = [Marker("dipole", complex(solution.location))]

    verdict = check_curve_univalence(solution.boundary)
    item.univalent = verdict.univalent
    if verdict.univalent:
        item.area = domain_area(solution.boundary)
    else:
        item.details["failure"] = verdict.failure.kind.value

    if not scenario.verify:
        return
    item.details["boundary_residual"] = solution.boundary_residual()
    item.details["dipole_defect"] = solution.dipole_defect()
    try:
        report = check_equilibrium(
            solution.boundary, solution.field_spec, solution.singularities(), tolerance=scenario.tolerance
        )
    except HeleShawError as e:
        item.details["moment_error"] = str(e)
        return
    item.max_residual = report.max_abs_residual
    item.relative_residual = report.relative_residual
    item.residuals = [(label, complex(value)) for label, value in report.residuals]
    item.equilibrium = report.verdict


# =============================================================================
# Gravity
# =============================================================================

def _same_residues(left: CauchyTransform, right: CauchyTransform) -> bool:
    a, b = left.residues(), right.residues()
    for pole in set(a) | set(b):
        if not cmath.isclose(complex(a.get(pole, 0)), complex(b.get(pole, 0)), rel_tol=1e-12, abs_tol=1e-14):
            return False
    return True


def _run_gravity(scenario: ScenarioConfig, item: ItemResult, n: int) -> None:
    p = item.parameters
    center = p.get("center", 0.0)
    gravity = GravityScenario.dipole_in_disk(p["C"], p["A"], p["mu"], center)
    stationary, sinking = split_decomposition(gravity, p["t"])
    total = evolve_transform(gravity, p["t"])

    item.details = {
        "stationary_residue": float(gravity.steady_residue),
        "sinking_poles": [[complex(pole).real, complex(r).real] for r, pole in sinking.poles],
        "total_residue": complex(total.total_residue).real,
    }
    item.markers = [Marker("dipole", complex(center))]

    try:
        sink_center, coefficient = disk_parameters(sinking)
    except NotADiskError:
        item.details["sinking"] = "empty" if sinking.is_zero else "not a disk"
        return

    points = disk_boundary(sink_center, coefficient, n)
    item.boundary = points
    item.univalent = True
    item.area = math.pi * float(coefficient)

    if scenario.verify:
        identity = _same_residues(stationary + sinking, total)
        item.details["split_identity"] = identity
        point = complex(sink_center) + 3.0 * math.sqrt(float(coefficient)) + 1.0
        boundary = BoundaryCurve.from_samples(points)
        item.max_residual = abs(cauchy_transform(boundary, point) - sinking.evaluate(point))
        item.relative_residual = item.max_residual / max(abs(sinking.evaluate(point)), np.finfo(float).tiny)
        item.equilibrium = identity


# =============================================================================
# Runs
# =============================================================================

def _run_item(scenario: ScenarioConfig, index: int, parameters: Dict[str, float], n: int) -> ItemResult:
    item = ItemResult(index=index, parameters=parameters)
    with collect_warnings() as messages:
        try:
            if scenario.solver.is_closed_form:
                _run_closed_form(scenario, item, n)
            elif scenario.solver.is_riemann_hilbert:
                _run_riemann_hilbert(scenario, item, n)
            else:
                _run_gravity(scenario, item, n)
        except HeleShawError as e:
            logger.warning("Item %d of %s failed: %s", index, scenario.name, e)
            _mark_failed(item, e)
        except Exception as e:
            logger.exception("Item %d of %s raised an unexpected error", index, scenario.name)
            _mark_failed(item, e)
    item.warnings = list(messages)
    return item


def _mark_failed(item: ItemResult, error: Exception) -> None:
    item.status = "failed"
    item.error = f"{type(error).__name__}: {error}"
    item.boundary = None


def _parameter_table(items: List[ItemResult]) -> List[Dict[str, float]]:
    rows = []
    for item in items:
        if item.ok:
            d = item.details
            rows.append({
                "alpha": d["alpha"],
                "beta": d["beta"],
                "x0": d["location"],
                "mu_over_alpha": d["mu"] / d["alpha"],
            })
    return rows


def run_scenario(scenario: ScenarioConfig, max_workers: Optional[int] = None) -> RunReport:
    """
    Execute every item of a scenario.

    Args:
        scenario: Validated scenario.
        max_workers: Thread count (default from config).

    Returns:
        RunReport with items in sweep order.
    """
    config = get_config()
    n = scenario.grid or config.spectral.default_grid
    max_workers = config.output.max_workers if max_workers is None else max_workers
    items = scenario.items()

    logger.info("Running %s (%s): %d item(s) at n=%d", scenario.name, scenario.solver.value, len(items), n)
    start = time.time()
    if max_workers <= 1 or len(items) == 1:
        results = [_run_item(scenario, i, p, n) for i, p in enumerate(items)]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(_run_item, scenario, i, p, n) for i, p in enumerate(items)]
            results = [f.result() for f in futures]

    table = None
    if scenario.output.parameter_table and scenario.solver is Solver.RH_UNIDIRECTIONAL:
        table = _parameter_table(results)

    report = RunReport(
        scenario=scenario.name,
        solver=scenario.solver.value,
        verified=scenario.verify,
        items=results,
        sweep_parameter=scenario.sweep.parameter if scenario.sweep else None,
        parameter_table=table,
        elapsed_seconds=time.time() - start,
    )
    logger.info("Finished %s: %d ok, %d failed", scenario.name, len(results) - len(report.failed), len(report.failed))
    return report
