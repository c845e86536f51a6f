"""
Tests for the validation module.

Tests the exception hierarchy, warnings and the input validators.
"""

import math
import os
import threading
import warnings

import pytest

from heleshaw.validation import (
    MIN_GRID,
    ConvergenceError,
    HeleShawError,
    HeleShawWarning,
    InputValidationError,
    ResolutionWarning,
    ScenarioConfigError,
    collect_warnings,
    validate_complex,
    validate_finite,
    validate_grid_size,
    validate_output_dir,
    validate_positive,
    warn,
)


class TestExceptions:
    """Tests for the exception hierarchy."""

    def test_common_base(self):
        """Package errors share HeleShawError."""
        assert issubclass(InputValidationError, HeleShawError)
        assert issubclass(ConvergenceError, HeleShawError)

    def test_scenario_issues(self):
        """ScenarioConfigError keeps its issue list."""
        error = ScenarioConfigError(["grid must be a power of two", "unknown key 'x'"])
        assert error.issues == ["grid must be a power of two", "unknown key 'x'"]
        assert str(error) == "grid must be a power of two; unknown key 'x'"

    def test_scenario_no_issues(self):
        """An empty list still has a message."""
        assert str(ScenarioConfigError([])) == "invalid scenario"


class TestWarn:
    """Tests for warn."""

    def test_emits_category(self):
        """The given category is raised as a warning."""
        with pytest.warns(ResolutionWarning, match="tail"):
            warn("tail not resolved", ResolutionWarning)

    def test_default_category(self):
        """The default is the package base warning."""
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            warn("something")
        assert issubclass(caught[0].category, HeleShawWarning)

    def test_collector_takes_warnings(self):
        """Inside a collector warnings are recorded, not raised."""
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            with collect_warnings() as messages:
                warn("first", ResolutionWarning)
                warn("second")
        assert messages == ["first", "second"]
        assert caught == []

    def test_collectors_nest(self):
        """An inner collector does not leak into the outer one."""
        with collect_warnings() as outer:
            warn("outer")
            with collect_warnings() as inner:
                warn("inner")
            warn("outer again")
        assert outer == ["outer", "outer again"]
        assert inner == ["inner"]

    def test_collector_is_per_thread(self):
        """A collector on this thread ignores warnings from another."""
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            with collect_warnings() as messages:
                worker = threading.Thread(target=warn, args=("elsewhere",))
                worker.start()
                worker.join()
        assert messages == []


class TestValidateFinite:
    """Tests for validate_finite and validate_positive."""

    def test_accepts_numbers(self):
        """Real and complex numbers pass through."""
        assert validate_finite(2.5, "x") == 2.5
        assert validate_finite(1 + 2j, "z") == 1 + 2j

    def test_coerces_strings(self):
        """Numeric strings are converted."""
        assert validate_finite("3", "x") == 3.0

    @pytest.mark.parametrize("value", [math.nan, math.inf, complex(1, math.inf)])
    def test_rejects_non_finite(self, value):
        """NaN and infinities are refused."""
        with pytest.raises(InputValidationError, match="finite"):
            validate_finite(value, "x")

    def test_rejects_non_numbers(self):
        """Objects that are not numbers are refused."""
        with pytest.raises(InputValidationError, match="must be a number"):
            validate_finite(None, "x")

    def test_positive(self):
        """validate_positive returns a float."""
        assert validate_positive(3, "a") == 3.0
        assert isinstance(validate_positive(3, "a"), float)

    @pytest.mark.parametrize("value", [0, -1.0, 1j])
    def test_positive_rejects(self, value):
        """Zero, negatives and complex values are refused."""
        with pytest.raises(InputValidationError):
            validate_positive(value, "a")

    def test_complex(self):
        """validate_complex coerces reals."""
        assert validate_complex(2) == 2 + 0j
        with pytest.raises(InputValidationError):
            validate_complex("not a number")


class TestValidateGridSize:
    """Tests for validate_grid_size."""

    def test_accepts_powers_of_two(self):
        """Powers of two from MIN_GRID up pass."""
        assert validate_grid_size(MIN_GRID) == MIN_GRID
        assert validate_grid_size(4096) == 4096

    @pytest.mark.parametrize("n", [32, 100, 1000])
    def test_rejects(self, n):
        """Small or non-power-of-two sizes are refused."""
        with pytest.raises(InputValidationError):
            validate_grid_size(n)

    @pytest.mark.parametrize("n", [True, 256.0, "256"])
    def test_rejects_non_integers(self, n):
        """Only true integers are grid sizes."""
        with pytest.raises(InputValidationError, match="integer"):
            validate_grid_size(n)


class TestValidateOutputDir:
    """Tests for validate_output_dir."""

    def test_creates_directory(self, temp_dir):
        """Missing directories are created and made absolute."""
        target = os.path.join(temp_dir, "a", "b")
        result = validate_output_dir(target)
        assert os.path.isdir(result)
        assert os.path.isabs(result)

    @pytest.mark.parametrize("path", ["../outside", "a/../../b", "..\\up", "bad\x00name"])
    def test_rejects_dangerous(self, path):
        """Traversal and null bytes are refused."""
        with pytest.raises(InputValidationError, match="forbidden"):
            validate_output_dir(path)

    def test_rejects_empty(self):
        """Empty paths are refused."""
        with pytest.raises(InputValidationError, match="empty"):
            validate_output_dir("")

    def test_rejects_file(self, temp_dir):
        """A path blocked by a file cannot be created."""
        blocker = os.path.join(temp_dir, "file")
        with open(blocker, "w") as f:
            f.write("x")
        with pytest.raises(InputValidationError, match="Cannot create"):
            validate_output_dir(os.path.join(blocker, "sub"))
