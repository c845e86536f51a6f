# heleshaw - equilibrium shapes of Hele-Shaw flows in external potential fields

__version__ = "0.1.0"

# Configuration
from .config import (
    get_config,
    load_config_from_file,
    set_config,
    reset_config,
    validate_config,
    HeleShawConfig,
    SpectralConfig,
    RootConfig,
    GeometryConfig,
    MomentsConfig,
    RiemannHilbertConfig,
    OutputConfig,
)

# Fields
from .field import (
    Charge,
    MonotoneProfile,
    ElevationProfile,
    HarmonicCore,
    CoreKind,
    FieldKind,
    FieldSpec,
    eval_G,
    eval_F,
    eval_omega,
    eval_omega_prime,
    eval_potential,
)

# Numerics and geometry
from .spectral import CircleGrid, FourierSeries, fourier_series, circle_quadrature, cauchy_projection
from .geometry import (
    ConformalMap,
    MapFamily,
    BoundaryCurve,
    UnivalenceVerdict,
    sample_boundary,
    check_univalence,
    check_curve_univalence,
    critical_parameter,
    domain_area,
    invert_map,
)
from .moments import (
    HydroSingularity,
    SingularityKind,
    TestFunction,
    ResidualReport,
    check_equilibrium,
    feasibility,
    transformed_moments,
    rationality_check,
    cauchy_transform,
)

# Solvers
from .closed_form import (
    solve_example1,
    solve_dipole_limit,
    solve_example2,
    solve_example3,
    example1_critical_ratio,
    scenario_data,
)
from .riemann_hilbert import (
    RHSolution,
    ThetaFunction,
    build_theta,
    solve_unidirectional,
    solve_axisymmetric,
    solve_composed,
    solve_nonplanar,
)
from .gravity_dynamics import (
    CauchyTransform,
    GravityScenario,
    evolve_transform,
    split_decomposition,
    transform_of_disk,
    disk_parameters,
)

# Scenarios and output
from .scenario import ScenarioConfig, Solver, load_scenario, get_preset, list_presets
from .runner import ItemResult, RunReport, run_scenario
from .emit import emit_report
from .report_formatter import format_report

# Errors
from .validation import (
    HeleShawError,
    InputValidationError,
    DomainError,
    ConvergenceError,
    AnalyticityError,
    GeometryError,
    FeasibilityError,
    ScenarioConfigError,
    HeleShawWarning,
    ResolutionWarning,
)

__all__ = [
    # Version
    "__version__",
    # Configuration API
    "get_config",
    "load_config_from_file",
    "set_config",
    "reset_config",
    "validate_config",
    "HeleShawConfig",
    "SpectralConfig",
    "RootConfig",
    "GeometryConfig",
    "MomentsConfig",
    "RiemannHilbertConfig",
    "OutputConfig",
    # Fields
    "Charge",
    "MonotoneProfile",
    "ElevationProfile",
    "HarmonicCore",
    "CoreKind",
    "FieldKind",
    "FieldSpec",
    "eval_G",
    "eval_F",
    "eval_omega",
    "eval_omega_prime",
    "eval_potential",
    # Numerics and geometry
    "CircleGrid",
    "FourierSeries",
    "fourier_series",
    "circle_quadrature",
    "cauchy_projection",
    "ConformalMap",
    "MapFamily",
    "BoundaryCurve",
    "UnivalenceVerdict",
    "sample_boundary",
    "check_univalence",
    "check_curve_univalence",
    "critical_parameter",
    "domain_area",
    "invert_map",
    "HydroSingularity",
    "SingularityKind",
    "TestFunction",
    "ResidualReport",
    "check_equilibrium",
    "feasibility",
    "transformed_moments",
    "rationality_check",
    "cauchy_transform",
    # Solvers
    "solve_example1",
    "solve_dipole_limit",
    "solve_example2",
    "solve_example3",
    "example1_critical_ratio",
    "scenario_data",
    "RHSolution",
    "ThetaFunction",
    "build_theta",
    "solve_unidirectional",
    "solve_axisymmetric",
    "solve_composed",
    "solve_nonplanar",
    "CauchyTransform",
    "GravityScenario",
    "evolve_transform",
    "split_decomposition",
    "transform_of_disk",
    "disk_parameters",
    # Scenarios and output
    "ScenarioConfig",
    "Solver",
    "load_scenario",
    "get_preset",
    "list_presets",
    "ItemResult",
    "RunReport",
    "run_scenario",
    "emit_report",
    "format_report",
    # Errors
    "HeleShawError",
    "InputValidationError",
    "DomainError",
    "ConvergenceError",
    "AnalyticityError",
    "GeometryError",
    "FeasibilityError",
    "ScenarioConfigError",
    "HeleShawWarning",
    "ResolutionWarning",
]
