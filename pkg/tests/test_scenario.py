"""
Tests for the scenario module.

Tests parsing and validation of scenario objects, sweeps, overrides,
file loading and the preset catalogue.
"""

import json
import os

import pytest

from heleshaw.field import ProfileKind
from heleshaw.scenario import (
    PRESETS,
    ScenarioConfig,
    Solver,
    get_preset,
    list_presets,
    load_scenario,
)
from heleshaw.validation import ScenarioConfigError


class TestSolver:
    """Tests for the Solver enum."""

    def test_closed_form(self):
        """The four explicit families are closed form."""
        assert Solver.EXAMPLE1.is_closed_form
        assert Solver.DIPOLE_LIMIT.is_closed_form
        assert not Solver.RH_UNIDIRECTIONAL.is_closed_form
        assert not Solver.GRAVITY_DYNAMICS.is_closed_form

    def test_riemann_hilbert(self):
        """rh_* solvers are Riemann-Hilbert."""
        assert Solver.RH_COMPOSED.is_riemann_hilbert
        assert not Solver.EXAMPLE3.is_riemann_hilbert


class TestFromDict:
    """Tests for ScenarioConfig.from_dict."""

    def test_valid_sweep(self, example2_scenario_dict):
        """A colocated sweep parses into two items."""
        scenario = ScenarioConfig.from_dict(example2_scenario_dict)
        assert scenario.solver is Solver.EXAMPLE2
        assert scenario.grid == 1024
        assert scenario.items() == [
            {"mu": 1.0, "Q": 1.0, "A": 1.0},
            {"mu": 1.0, "Q": 1.0, "A": 4.0},
        ]

    def test_single_item(self, example1_scenario_dict):
        """Without a sweep there is one item."""
        scenario = ScenarioConfig.from_dict(example1_scenario_dict)
        assert scenario.items() == [{"q": 1.0, "a": 1.0, "b": 4.0, "Q": 0.5}]
        assert scenario.verify

    def test_defaults(self):
        """Output defaults to CSV and SVG in the working directory."""
        scenario = ScenarioConfig.from_dict({"solver": "example3", "parameters": {"beta": 1, "Q": 1, "a": 0.5}})
        assert scenario.name == "scenario"
        assert scenario.output.directory == "."
        assert scenario.output.csv and scenario.output.svg
        assert not scenario.output.parameter_table
        assert scenario.grid is None

    def test_collects_every_issue(self):
        """All problems are reported together."""
        data = {
            "solver": "example1",
            "parameters": {"q": 1.0, "a": "one"},
            "grid": 100,
            "colour": "red",
        }
        with pytest.raises(ScenarioConfigError) as exc_info:
            ScenarioConfig.from_dict(data)
        issues = exc_info.value.issues
        assert any("unknown key 'colour'" in issue for issue in issues)
        assert any("parameter 'a'" in issue for issue in issues)
        assert any("grid must be a power of two" in issue for issue in issues)
        assert any("requires parameters" in issue for issue in issues)

    def test_unknown_solver(self):
        """The solver must be one of the catalogue."""
        with pytest.raises(ScenarioConfigError, match="solver must be one of"):
            ScenarioConfig.from_dict({"solver": "navier_stokes"})

    def test_not_an_object(self):
        """The top level must be an object."""
        with pytest.raises(ScenarioConfigError):
            ScenarioConfig.from_dict([1, 2, 3])

    def test_name_without_separators(self):
        """Names become file names."""
        with pytest.raises(ScenarioConfigError, match="name"):
            ScenarioConfig.from_dict({"name": "../evil", "solver": "example3", "parameters": {"beta": 1, "Q": 1, "a": 1}})

    def test_unknown_parameter(self):
        """Parameters must belong to the solver."""
        with pytest.raises(ScenarioConfigError, match="unknown parameter 'k'"):
            ScenarioConfig.from_dict({"solver": "dipole_limit", "parameters": {"mu": 1, "a": 1, "Q": 1, "k": 2}})

    def test_sweep_supplies_required_parameter(self):
        """A swept parameter counts as present."""
        scenario = ScenarioConfig.from_dict({
            "solver": "rh_unidirectional",
            "parameters": {"alpha": 1.0},
            "sweep": {"parameter": "B", "values": [2.1, 2.2]},
        })
        assert [item["B"] for item in scenario.items()] == [2.1, 2.2]

    def test_sweep_parameter_must_be_known(self):
        """Sweeping a foreign parameter is an error."""
        with pytest.raises(ScenarioConfigError, match="sweep parameter"):
            ScenarioConfig.from_dict({
                "solver": "example2",
                "parameters": {"mu": 1, "Q": 1, "A": 1},
                "sweep": {"parameter": "z", "values": [1]},
            })

    def test_empty_sweep(self):
        """Sweeps need at least one value."""
        with pytest.raises(ScenarioConfigError, match="non-empty"):
            ScenarioConfig.from_dict({
                "solver": "example2",
                "parameters": {"mu": 1, "Q": 1},
                "sweep": {"parameter": "A", "values": []},
            })

    def test_alternative_parameter_sets(self):
        """Riemann-Hilbert solvers accept (x0, mu) instead of (alpha, beta)."""
        scenario = ScenarioConfig.from_dict({"solver": "rh_unidirectional", "parameters": {"x0": 1.3, "mu": 0.8}})
        assert scenario.parameters == {"x0": 1.3, "mu": 0.8}

    def test_boolean_is_not_a_number(self):
        """true is not a parameter value."""
        with pytest.raises(ScenarioConfigError):
            ScenarioConfig.from_dict({"solver": "example3", "parameters": {"beta": True, "Q": 1, "a": 1}})

    def test_profile_only_for_riemann_hilbert(self):
        """Closed-form solvers take no profile."""
        with pytest.raises(ScenarioConfigError, match="profile applies"):
            ScenarioConfig.from_dict({
                "solver": "example3",
                "parameters": {"beta": 1, "Q": 1, "a": 1},
                "profile": "square",
            })

    def test_power_profile(self):
        """A power profile carries its exponent."""
        scenario = ScenarioConfig.from_dict({
            "solver": "rh_unidirectional",
            "parameters": {"alpha": 1.0, "beta": 3.0},
            "profile": {"kind": "power", "exponent": 3},
        })
        profile = scenario.build_profile()
        assert profile.kind is ProfileKind.POWER
        assert profile.exponent == 3.0

    def test_default_profile_is_none(self, example1_scenario_dict):
        """No profile selects the solver default."""
        assert ScenarioConfig.from_dict(example1_scenario_dict).build_profile() is None

    def test_unknown_output_key(self):
        """Output keys are checked."""
        with pytest.raises(ScenarioConfigError, match="unknown output key 'png'"):
            ScenarioConfig.from_dict({
                "solver": "example3",
                "parameters": {"beta": 1, "Q": 1, "a": 1},
                "output": {"png": True},
            })


class TestOverrides:
    """Tests for with_overrides and to_dict."""

    def test_round_trip(self, example2_scenario_dict):
        """to_dict feeds back into from_dict unchanged."""
        scenario = ScenarioConfig.from_dict(example2_scenario_dict)
        assert ScenarioConfig.from_dict(scenario.to_dict()) == scenario

    def test_overrides(self, example2_scenario_dict, temp_dir):
        """Command-line values replace file values."""
        scenario = ScenarioConfig.from_dict(example2_scenario_dict)
        updated = scenario.with_overrides(grid=2048, tolerance=1e-6, svg=False, directory=temp_dir, verify=True)
        assert updated.grid == 2048
        assert updated.tolerance == 1e-6
        assert not updated.output.svg
        assert updated.output.directory == temp_dir
        assert updated.verify
        assert scenario.grid == 1024

    def test_invalid_override(self, example2_scenario_dict):
        """Overrides are validated."""
        with pytest.raises(ScenarioConfigError):
            ScenarioConfig.from_dict(example2_scenario_dict).with_overrides(grid=1000)


class TestLoadScenario:
    """Tests for load_scenario."""

    def test_load(self, write_scenario, example1_scenario_dict):
        """A JSON file loads into a scenario."""
        scenario = load_scenario(write_scenario(example1_scenario_dict))
        assert scenario.name == "source_sink"
        assert scenario.solver is Solver.EXAMPLE1

    def test_missing_file(self, temp_dir):
        """Unreadable files raise ScenarioConfigError."""
        with pytest.raises(ScenarioConfigError, match="cannot read"):
            load_scenario(os.path.join(temp_dir, "missing.json"))

    def test_invalid_json(self, temp_dir):
        """Malformed JSON raises ScenarioConfigError."""
        path = os.path.join(temp_dir, "broken.json")
        with open(path, "w") as f:
            f.write("{ not json")
        with pytest.raises(ScenarioConfigError, match="not valid JSON"):
            load_scenario(path)


class TestPresets:
    """Tests for the preset catalogue."""

    def test_every_preset_validates(self):
        """Each preset parses with verification on."""
        for name in PRESETS:
            scenario = get_preset(name)
            assert scenario.name == name
            assert scenario.verify

    def test_list(self):
        """list_presets gives ids and descriptions in order."""
        listed = list_presets()
        assert [name for name, _ in listed] == list(PRESETS)
        assert all(description for _, description in listed)

    def test_colocated_sizes(self):
        """fig3 sweeps A over 1, √2, 2, 2√2, 4."""
        values = get_preset("fig3").sweep.values
        assert values[0] == 1.0 and values[2] == 2.0 and values[-1] == 4.0
        assert values[1] == pytest.approx(2 ** 0.5)

    def test_unidirectional_table(self):
        """fig5 writes the parameter table."""
        assert get_preset("fig5").output.parameter_table

    def test_presets_are_not_shared(self):
        """Modifying a preset scenario does not touch the catalogue."""
        get_preset("fig3").with_overrides(grid=4096)
        assert "grid" not in PRESETS["fig3"]
        assert json.dumps(PRESETS["fig3"])

    def test_unknown_preset(self):
        """Unknown names list the catalogue."""
        with pytest.raises(ScenarioConfigError, match="available"):
            get_preset("fig99")
