"""
Pytest configuration and fixtures for heleshaw tests.

Provides reusable fixtures for:
- Standard external fields (point charges, unidirectional, axisymmetric)
- Closed-form maps and their sampled boundaries
- Temporary output directories and scenario files
- Tool configuration reset between tests
"""

import json
import os
import tempfile

import pytest

from heleshaw.config import reset_config
from heleshaw.field import Charge, FieldSpec, MonotoneProfile
from heleshaw.geometry import ConformalMap, sample_boundary


# ============== CONFIG FIXTURES ==============

@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts from the default tool configuration."""
    reset_config()
    yield
    reset_config()


# ============== FIELD FIXTURES ==============

@pytest.fixture
def unit_charge_field() -> FieldSpec:
    """Single charge Q = 1 at the origin."""
    return FieldSpec.point_charges([Charge(1.0, 0.0)])


@pytest.fixture
def two_charge_field() -> FieldSpec:
    """Charges Q = 1 at ±1."""
    return FieldSpec.point_charges([Charge(1.0, 1.0), Charge(1.0, -1.0)])


@pytest.fixture
def square_field() -> FieldSpec:
    """Unidirectional field with H(x) = x²."""
    return FieldSpec.unidirectional(MonotoneProfile.square())


@pytest.fixture
def radial_field() -> FieldSpec:
    """Axisymmetric field with H(r²) = r²."""
    return FieldSpec.axisymmetric(MonotoneProfile.identity())


# ============== MAP FIXTURES ==============

@pytest.fixture
def disk_map() -> ConformalMap:
    """f(ζ) = ζ."""
    return ConformalMap.identity()


@pytest.fixture
def disk_boundary(disk_map):
    """Unit circle sampled at 256 nodes."""
    return sample_boundary(disk_map, 256)


@pytest.fixture
def shifted_disk_map() -> ConformalMap:
    """f(ζ) = 2 + 0.5ζ."""
    return ConformalMap.numeric([2.0, 0.5], label="shifted disk")


# ============== TEMP DIRECTORY FIXTURES ==============

@pytest.fixture
def temp_dir():
    """Create a temporary directory for output files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


# ============== SCENARIO FIXTURES ==============

@pytest.fixture
def example2_scenario_dict(temp_dir) -> dict:
    """Colocated dipole/charge sweep over the domain size."""
    return {
        "name": "dipole_sizes",
        "solver": "example2",
        "parameters": {"mu": 1.0, "Q": 1.0},
        "sweep": {"parameter": "A", "values": [1.0, 4.0]},
        "grid": 1024,
        "output": {"directory": os.path.join(temp_dir, "out"), "csv": True, "svg": True},
    }


@pytest.fixture
def example1_scenario_dict(temp_dir) -> dict:
    """Single source/sink item that is univalent."""
    return {
        "name": "source_sink",
        "solver": "example1",
        "parameters": {"q": 1.0, "a": 1.0, "b": 4.0, "Q": 0.5},
        "grid": 1024,
        "verify": True,
        "output": {"directory": os.path.join(temp_dir, "out")},
    }


@pytest.fixture
def write_scenario(temp_dir):
    """Write a scenario dict to a JSON file and return its path."""
    def _write(data: dict, name: str = "scenario.json") -> str:
        path = os.path.join(temp_dir, name)
        with open(path, "w") as f:
            json.dump(data, f)
        return path
    return _write
