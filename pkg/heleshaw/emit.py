"""
Boundary CSV, parameter table and SVG overlay writers.

Everything here runs on the main thread after a RunReport is complete.
Output is deterministic: the same report always produces the same bytes.
"""

from __future__ import annotations

import csv
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np

from .config import get_config
from .logging_config import get_logger
from .runner import ItemResult, Marker, RunReport
from .scenario import ScenarioConfig
from .validation import validate_output_dir

logger = get_logger(__name__)

BOUNDARY_HEADER = ("phi", "re_z", "im_z")
PARAMETER_TABLE_HEADER = ("alpha", "beta", "x0", "mu_over_alpha")

CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

MARKER_STYLES: Dict[str, str] = {
    "charge": "fill:#000000;stroke:none",
    "source_sink": "fill:#ffffff;stroke:#000000;stroke-width:1.5",
    "dipole": "fill:#d62728;stroke:none",
    "quadrupole": "fill:#2ca02c;stroke:none",
}


def _fmt(x: float) -> str:
    digits = get_config().output.csv_significant_digits
    return format(float(x), f".{digits}g")


# =============================================================================
# CSV
# =============================================================================

def write_boundary_csv(path: Path, points: np.ndarray) -> Path:
    """Write phi,re_z,im_z rows for boundary samples at φ_k = 2πk/n."""
    points = np.asarray(points, dtype=complex)
    phi = 2.0 * math.pi * np.arange(points.size) / points.size
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(BOUNDARY_HEADER)
        for angle, z in zip(phi, points):
            w.writerow([_fmt(angle), _fmt(z.real), _fmt(z.imag)])
    return path


def write_parameter_table(path: Path, rows: Iterable[Dict[str, float]]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PARAMETER_TABLE_HEADER)
        for row in rows:
            w.writerow([_fmt(row[key]) for key in PARAMETER_TABLE_HEADER])
    return path


# =============================================================================
# SVG
# =============================================================================

def _view_box(curves: Sequence[np.ndarray], markers: Sequence[Marker], margin: float) -> List[float]:
    xs: List[float] = []
    ys: List[float] = []
    for points in curves:
        xs.extend((float(points.real.min()), float(points.real.max())))
        ys.extend((float(-points.imag.max()), float(-points.imag.min())))
    for marker in markers:
        xs.append(marker.position.real)
        ys.append(-marker.position.imag)
    if not xs:
        return [-1.0, -1.0, 2.0, 2.0]

    width = max(max(xs) - min(xs), 1e-12)
    height = max(max(ys) - min(ys), 1e-12)
    pad = margin * max(width, height)
    return [min(xs) - pad, min(ys) - pad, width + 2 * pad, height + 2 * pad]


def _path_data(points: np.ndarray) -> str:
    # SVG y grows downward
    coords = [f"{z.real:.9g},{-z.imag:.9g}" for z in points]
    return "M" + " L".join(coords) + " Z"


def build_svg(report: RunReport) -> ET.Element:
    """
    SVG overlay of every sweep item's boundary and the distinct markers.

    Items without a boundary (failed, or no sinking disk) still get an
    empty path so paths and items correspond one to one.
    """
    config = get_config().output
    curves = [item.boundary for item in report.items if item.boundary is not None]
    markers = report.markers()
    x, y, width, height = _view_box(curves, markers, config.svg_margin)
    stroke_width = 0.004 * max(width, height)
    radius = 0.012 * max(width, height)

    size = config.svg_size
    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(size),
        "height": str(round(size * height / width)),
        "viewBox": f"{x:.9g} {y:.9g} {width:.9g} {height:.9g}",
    })
    ET.SubElement(root, "title").text = report.scenario

    curves_group = ET.SubElement(root, "g", {"id": "curves"})
    for item in report.items:
        color = CURVE_COLORS[item.index % len(CURVE_COLORS)]
        style = f"fill:none;stroke:{color};stroke-width:{stroke_width:.6g}"
        if item.univalent is False:
            style += f";stroke-dasharray:{4 * stroke_width:.6g},{3 * stroke_width:.6g}"
        attributes = {"id": f"item-{item.index}", "style": style, "d": ""}
        if item.boundary is not None:
            attributes["d"] = _path_data(item.boundary)
        path = ET.SubElement(curves_group, "path", attributes)
        ET.SubElement(path, "title").text = _item_label(report, item)

    markers_group = ET.SubElement(root, "g", {"id": "markers"})
    for marker in markers:
        ET.SubElement(markers_group, "circle", {
            "cx": f"{marker.position.real:.9g}",
            "cy": f"{-marker.position.imag:.9g}",
            "r": f"{radius:.6g}",
            "class": marker.kind,
            "style": MARKER_STYLES.get(marker.kind, MARKER_STYLES["charge"]),
        })
    return root


def _item_label(report: RunReport, item: ItemResult) -> str:
    if report.sweep_parameter is None:
        return report.scenario
    return f"{report.sweep_parameter}={item.parameters[report.sweep_parameter]:g}"


def write_svg(path: Path, report: RunReport) -> Path:
    tree = ET.ElementTree(build_svg(report))
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)
    return path


# =============================================================================
# Report emission
# =============================================================================

def emit_report(report: RunReport, scenario: ScenarioConfig) -> List[str]:
    """
    Write every output file the scenario asks for.

    Returns:
        Paths written, in order.
    """
    directory = Path(validate_output_dir(scenario.output.directory))
    written: List[Path] = []

    if scenario.output.csv:
        for item in report.items:
            if item.boundary is not None:
                written.append(write_boundary_csv(directory / f"{scenario.name}_{item.index}.csv", item.boundary))
        if report.parameter_table is not None:
            written.append(write_parameter_table(directory / f"{scenario.name}a_parameters.csv", report.parameter_table))

    if scenario.output.svg:
        written.append(write_svg(directory / f"{scenario.name}.svg", report))

    logger.info("Wrote %d file(s) to %s", len(written), directory)
    return [str(p) for p in written]
