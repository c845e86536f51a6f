"""
heleshaw Test Suite

This package contains unit tests for the heleshaw equilibrium-shape solvers.

Test modules:
- test_field: External fields, profiles and conformal coordinates
- test_spectral: Circle grids, Fourier series, quadrature and root finding
- test_geometry: Conformal maps, univalence and critical parameters
- test_moments: Moment identities, feasibility and rationality
- test_closed_form: Explicit solution families and thresholds
- test_riemann_hilbert: Unidirectional, axisymmetric and composed fields
- test_gravity_dynamics: Cauchy transforms under gravity
- test_scenario / test_runner / test_emit / test_cli: Scenario files to output files
- test_config / test_validation / test_logging_config / test_report_formatter: Tool plumbing

Run all tests:
    pytest

Skip the bisection sweeps:
    pytest -m "not slow"

Run with coverage:
    pytest --cov=heleshaw --cov-report=html

Run specific test class:
    pytest tests/test_closed_form.py::TestSourceSinkThresholds
"""
