"""
Tests for the emit module.

Tests boundary CSV rows, the parameter table, the SVG overlay and the
file set written for a report.
"""

import csv
import math
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from heleshaw.config import get_config
from heleshaw.emit import (
    BOUNDARY_HEADER,
    PARAMETER_TABLE_HEADER,
    build_svg,
    emit_report,
    write_boundary_csv,
    write_parameter_table,
    write_svg,
)
from heleshaw.runner import ItemResult, Marker, RunReport
from heleshaw.scenario import ScenarioConfig
from heleshaw.validation import InputValidationError

SVG_NS = "{http://www.w3.org/2000/svg}"


def _circle(n=64, center=0.0, radius=1.0):
    return center + radius * np.exp(2j * np.pi * np.arange(n) / n)


@pytest.fixture
def sample_report():
    """Two-item sweep: one univalent circle, one failed item."""
    good = ItemResult(
        index=0,
        parameters={"A": 4.0},
        univalent=True,
        boundary=_circle(),
        markers=[Marker("charge", 0j), Marker("dipole", 0j)],
    )
    bad = ItemResult(index=1, parameters={"A": 1.0}, status="failed", error="ConvergenceError: stalled")
    return RunReport(scenario="demo", solver="example2", verified=False, items=[good, bad], sweep_parameter="A")


def _scenario(directory, **output):
    return ScenarioConfig.from_dict({
        "name": "demo",
        "solver": "example2",
        "parameters": {"mu": 1.0, "Q": 1.0},
        "sweep": {"parameter": "A", "values": [4.0, 1.0]},
        "output": {"directory": directory, **output},
    })


class TestBoundaryCsv:
    """Tests for boundary CSV files."""

    def test_rows(self, temp_dir):
        """Header plus one row per sample with φ_k = 2πk/n."""
        path = write_boundary_csv(os.path.join(temp_dir, "b.csv"), _circle(8))
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert tuple(rows[0]) == BOUNDARY_HEADER
        assert len(rows) == 9
        assert float(rows[3][0]) == pytest.approx(2 * math.pi * 2 / 8)
        assert float(rows[3][1]) == pytest.approx(0.0, abs=1e-15)
        assert float(rows[3][2]) == pytest.approx(1.0)

    def test_full_precision(self, temp_dir):
        """Values round-trip through 17 significant digits."""
        points = np.array([1.0 / 3.0 + 2.0j / 7.0, 0.1, -0.2j])
        path = write_boundary_csv(os.path.join(temp_dir, "p.csv"), points)
        with open(path, newline="") as f:
            rows = list(csv.reader(f))[1:]
        assert float(rows[0][1]) == 1.0 / 3.0
        assert float(rows[0][2]) == 2.0 / 7.0

    def test_unix_line_endings(self, temp_dir):
        """Rows end in a bare newline."""
        path = write_boundary_csv(os.path.join(temp_dir, "n.csv"), _circle(4))
        with open(path, "rb") as f:
            content = f.read()
        assert b"\r\n" not in content
        assert content.startswith(b"phi,re_z,im_z\n")


class TestParameterTable:
    """Tests for the parameter table."""

    def test_columns(self, temp_dir):
        """alpha,beta,x0,mu_over_alpha in order."""
        rows = [{"alpha": 1.0, "beta": 2.0, "x0": 4 / math.pi, "mu_over_alpha": 8 / (3 * math.pi)}]
        path = write_parameter_table(os.path.join(temp_dir, "t.csv"), rows)
        with open(path, newline="") as f:
            lines = list(csv.reader(f))
        assert tuple(lines[0]) == PARAMETER_TABLE_HEADER
        assert float(lines[1][2]) == 4 / math.pi


class TestSvg:
    """Tests for the SVG overlay."""

    def test_one_path_per_item(self, sample_report):
        """Failed items keep an empty path."""
        root = build_svg(sample_report)
        paths = root.find("g[@id='curves']").findall("path")
        assert [p.get("id") for p in paths] == ["item-0", "item-1"]
        assert paths[0].get("d").startswith("M")
        assert paths[0].get("d").endswith("Z")
        assert paths[1].get("d") == ""

    def test_item_titles(self, sample_report):
        """Paths are labelled by the sweep value."""
        root = build_svg(sample_report)
        titles = [p.find("title").text for p in root.find("g[@id='curves']").findall("path")]
        assert titles == ["A=4", "A=1"]

    def test_non_univalent_dashed(self, sample_report):
        """Non-univalent boundaries are dashed."""
        sample_report.items[0].univalent = False
        path = build_svg(sample_report).find("g[@id='curves']").find("path")
        assert "stroke-dasharray" in path.get("style")

    def test_markers(self, sample_report):
        """Each distinct marker is a circle classed by kind."""
        circles = build_svg(sample_report).find("g[@id='markers']").findall("circle")
        assert sorted(c.get("class") for c in circles) == ["charge", "dipole"]

    def test_y_axis_flipped(self):
        """The upper half plane is drawn above the real axis."""
        item = ItemResult(index=0, parameters={}, boundary=np.array([0j, 1 + 0j, 1j]))
        report = RunReport(scenario="tri", solver="example1", verified=False, items=[item])
        d = build_svg(report).find("g[@id='curves']").find("path").get("d")
        assert "0,-1" in d

    def test_view_box_contains_curve(self, sample_report):
        """The view box covers the circle with a margin."""
        x, y, width, height = map(float, build_svg(sample_report).get("viewBox").split())
        assert x < -1 and y < -1
        assert x + width > 1 and y + height > 1

    def test_empty_report_has_default_view(self):
        """No curves and no markers still give a valid document."""
        report = RunReport(scenario="empty", solver="example1", verified=False, items=[])
        assert build_svg(report).get("viewBox") == "-1 -1 2 2"

    def test_deterministic(self, sample_report, temp_dir):
        """The same report writes the same bytes."""
        first = write_svg(os.path.join(temp_dir, "a.svg"), sample_report)
        second = write_svg(os.path.join(temp_dir, "b.svg"), sample_report)
        with open(first, "rb") as f1, open(second, "rb") as f2:
            assert f1.read() == f2.read()

    def test_parses_as_svg(self, sample_report, temp_dir):
        """Written files are well-formed SVG."""
        path = write_svg(os.path.join(temp_dir, "c.svg"), sample_report)
        root = ET.parse(path).getroot()
        assert root.tag == f"{SVG_NS}svg"
        assert root.get("width") == str(get_config().output.svg_size)


class TestEmitReport:
    """Tests for the file set of a report."""

    def test_files(self, sample_report, temp_dir):
        """A CSV per boundary and one SVG."""
        out = os.path.join(temp_dir, "out")
        written = emit_report(sample_report, _scenario(out))
        assert [os.path.basename(p) for p in written] == ["demo_0.csv", "demo.svg"]
        assert all(os.path.exists(p) for p in written)

    def test_parameter_table_file(self, sample_report, temp_dir):
        """A parameter table is written next to the boundaries."""
        sample_report.parameter_table = [{"alpha": 1.0, "beta": 2.5, "x0": 1.5, "mu_over_alpha": 0.7}]
        written = emit_report(sample_report, _scenario(temp_dir))
        assert os.path.basename(written[1]) == "demoa_parameters.csv"

    def test_no_svg(self, sample_report, temp_dir):
        """svg: false skips the overlay."""
        written = emit_report(sample_report, _scenario(temp_dir, svg=False))
        assert not any(p.endswith(".svg") for p in written)

    def test_no_csv(self, sample_report, temp_dir):
        """csv: false skips boundary files."""
        written = emit_report(sample_report, _scenario(temp_dir, csv=False))
        assert [os.path.basename(p) for p in written] == ["demo.svg"]

    def test_rejects_traversal(self, sample_report):
        """Output directories with traversal patterns are refused."""
        with pytest.raises(InputValidationError):
            emit_report(sample_report, _scenario("../../etc"))
