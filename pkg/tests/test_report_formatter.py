"""
Tests for the report_formatter module.

Tests the TOON table, JSON and rich renderings of a run report.
"""

import json

import pytest

from heleshaw.report_formatter import (
    fit_cell,
    format_report,
    format_report_json,
    format_report_rich,
    format_report_toon,
)
from heleshaw.runner import ItemResult, RunReport


@pytest.fixture
def report():
    """Colocated sweep with one univalent item and one failure."""
    good = ItemResult(
        index=0,
        parameters={"mu": 1.0, "Q": 1.0, "A": 4.0},
        univalent=True,
        predicted_univalent=True,
        area=12.5,
        max_residual=3.2e-12,
        relative_residual=1.1e-13,
        residuals=[("1", 2.0e-12 + 0j), ("z", -3.2e-12 + 1.0e-13j)],
        equilibrium=True,
        threshold={"name": "critical_size", "value": 2.0, "actual": 4.0, "univalent": True},
    )
    bad = ItemResult(
        index=1,
        parameters={"mu": 1.0, "Q": 1.0, "A": 1.0},
        status="failed",
        error="GeometryError: boundary crosses itself",
    )
    return RunReport(
        scenario="dipole_sizes",
        solver="example2",
        verified=True,
        items=[good, bad],
        sweep_parameter="A",
        elapsed_seconds=0.25,
    )


@pytest.fixture
def empty_report():
    return RunReport(scenario="nothing", solver="example1", verified=False, items=[])


class TestFitCell:
    """Tests for fit_cell."""

    def test_short_text_unchanged(self):
        """Text within the width is kept."""
        assert fit_cell("failed", 8) == "failed"

    def test_long_text_cut(self):
        """Long text is cut and marked."""
        result = fit_cell("not-univalent", 8)
        assert len(result) == 8
        assert result.endswith("...")

    def test_very_short_width(self):
        """Widths of three or less cut without a marker."""
        assert fit_cell("failed", 3) == "fai"

    def test_numbers_lose_digits(self):
        """A number drops digits instead of being cut."""
        assert fit_cell(1.2345678e-09, 10) == "1.2346e-09"
        assert fit_cell(12.5, 12) == "12.5"

    def test_none_is_blank(self):
        """Missing values render as an empty cell."""
        assert fit_cell(None, 6) == ""


class TestFormatReportToon:
    """Tests for the TOON table."""

    def test_header(self, report):
        """First line names the scenario and solver."""
        assert format_report_toon(report).splitlines()[0] == "dipole_sizes [example2]"

    def test_one_row_per_item(self, report):
        """Header row plus one row per item."""
        lines = format_report_toon(report).splitlines()
        assert len(lines) == 4
        assert "item" in lines[1] and "univalent" in lines[1]
        assert "yes" in lines[2]
        assert "failed" in lines[3]

    def test_sweep_value_shown(self, report):
        """Rows carry the sweep parameter and value."""
        row = format_report_toon(report).splitlines()[2]
        assert "A" in row
        assert "4" in row

    def test_columns_aligned(self, report):
        """Column separators line up across rows."""
        lines = format_report_toon(report).splitlines()[1:]
        positions = [line.index(" | ") for line in lines]
        assert len(set(positions)) == 1

    def test_empty(self, empty_report):
        """An empty report says so."""
        assert format_report_toon(empty_report) == "nothing [example1]\n  (empty)"


class TestFormatReportJson:
    """Tests for JSON output."""

    def test_valid_json(self, report):
        """Output parses and keeps every item."""
        data = json.loads(format_report_json(report))
        assert data["scenario"] == "dipole_sizes"
        assert [item["status"] for item in data["items"]] == ["ok", "failed"]
        assert data["items"][0]["threshold"]["name"] == "critical_size"
        assert data["items"][0]["residuals"][1] == {"label": "z", "re": -3.2e-12, "im": 1.0e-13}
        assert data["items"][1]["residuals"] == []


class TestFormatReportRich:
    """Tests for the rich summary."""

    def test_summary_lines(self, report):
        """Counts and timing come first."""
        text = format_report_rich(report)
        assert "SCENARIO: dipole_sizes (example2)" in text
        assert "ITEMS: 1 ok, 1 failed" in text

    def test_item_details(self, report):
        """Verdict, threshold and residual are shown."""
        text = format_report_rich(report)
        assert "univalent: yes (predicted yes)" in text
        assert "threshold: critical_size = 2, actual 4 (univalent side)" in text
        assert "equilibrium yes" in text

    def test_residual_table(self, report):
        """Each test function gets its own residual line."""
        text = format_report_rich(report)
        assert "residual table:" in text
        assert "    z: -3.200e-12 +1.000e-13i" in text

    def test_failure_shown(self, report):
        """Failed items show their error."""
        assert "FAILED: GeometryError: boundary crosses itself" in format_report_rich(report)

    def test_parameter_table(self, report):
        """The parameter table is appended when present."""
        report.parameter_table = [{"alpha": 1.0, "beta": 2.0, "x0": 1.2732395447, "mu_over_alpha": 0.8488263632}]
        text = format_report_rich(report)
        assert "PARAMETERS:" in text
        assert "1.273239545" in text

    def test_warnings_listed(self, report):
        """Recorded warnings appear under their item."""
        report.items[0].warnings.append("tail ratio 1e-6 above tolerance")
        assert "warning: tail ratio 1e-6 above tolerance" in format_report_rich(report)


class TestFormatReport:
    """Tests for the format dispatcher."""

    def test_default_is_toon(self, report):
        """TOON is the default."""
        assert format_report(report) == format_report_toon(report)

    @pytest.mark.parametrize("name", ["toon", "json", "rich"])
    def test_known_formats(self, report, name):
        """Every listed format renders."""
        assert format_report(report, format=name)

    def test_unknown_format(self, report):
        """Unknown formats raise ValueError."""
        with pytest.raises(ValueError, match="Unknown format"):
            format_report(report, format="xml")
