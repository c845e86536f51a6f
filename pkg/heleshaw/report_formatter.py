"""
TOON, JSON and rich-text renderings of a RunReport.

TOON is a compact table, one row per sweep item; JSON is the full
machine-readable report; rich adds thresholds, verification details and
per-item errors for reading at a terminal.
"""

import json
from typing import Any, Dict, List

from .config import get_config
from .logging_config import get_logger
from .runner import ItemResult, RunReport

logger = get_logger(__name__)

FORMATS = ("toon", "json", "rich")


def fit_cell(value, width: int) -> str:
    """
    Render a TOON cell in at most width characters.

    Numbers drop significant digits until they fit, so a cell never shows
    a cut-off mantissa; text is cut and ends in '...'.
    """
    if value is None:
        return ""
    if isinstance(value, float):
        for digits in range(6, 0, -1):
            text = f"{value:.{digits}g}"
            if len(text) <= width:
                return text
        value = text
    value = str(value)
    if len(value) <= width:
        return value
    if width <= 3:
        return value[:width]
    return value[:width - 3] + "..."


def _flag(x) -> str:
    return "" if x is None else ("yes" if x else "no")


def _row(report: RunReport, item: ItemResult) -> Dict[str, Any]:
    parameter = report.sweep_parameter or ""
    value = item.parameters.get(parameter) if parameter else None
    return {
        "item": str(item.index),
        "parameter": parameter,
        "value": None if value is None else float(value),
        "univalent": _flag(item.univalent),
        "max_residual": item.max_residual,
        "area": item.area,
        "status": item.status,
    }


def format_report_toon(report: RunReport) -> str:
    """
    Compact table of the run, one row per item.

    Columns come from config.output.columns as (key, header, max_width).
    """
    header = f"{report.scenario} [{report.solver}]"
    if not report.items:
        return f"{header}\n  (empty)"

    toon_config = get_config().output
    columns = toon_config.columns

    rows = []
    for item in report.items:
        data = _row(report, item)
        rows.append([fit_cell(data.get(key), max_width) for key, _, max_width in columns])

    col_widths = []
    for i, (_, title, _) in enumerate(columns):
        data_max = max((len(row[i]) for row in rows), default=0)
        col_widths.append(max(len(title), data_max))

    row_indent = toon_config.row_indent
    col_sep = toon_config.column_separator

    lines = [header]
    lines.append(row_indent + col_sep.join(columns[i][1].ljust(col_widths[i]) for i in range(len(columns))))
    for row in rows:
        lines.append(row_indent + col_sep.join(row[i].ljust(col_widths[i]) for i in range(len(columns))))
    return "\n".join(lines)


def format_report_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), indent=2, default=str)


def _threshold_line(item: ItemResult) -> str:
    t = item.threshold
    side = "univalent side" if t["univalent"] else "non-univalent side"
    return f"{t['name']} = {t['value']:.6g}, actual {t['actual']:.6g} ({side})"


def format_report_rich(report: RunReport) -> str:
    """Readable per-item summary with thresholds, verification and errors."""
    lines: List[str] = []
    ok = len(report.items) - len(report.failed)
    lines.append(f"SCENARIO: {report.scenario} ({report.solver})")
    lines.append(f"ITEMS: {ok} ok, {len(report.failed)} failed, {report.elapsed_seconds:.2f}s")
    lines.append("")

    for item in report.items:
        params = ", ".join(f"{k}={v:g}" for k, v in item.parameters.items())
        lines.append(f"[{item.index}] {params}")
        if not item.ok:
            lines.append(f"  FAILED: {item.error}")
            if item.feasibility is not None:
                lines.append(f"  feasibility: {item.feasibility:.6g}")
            continue

        verdict = _flag(item.univalent) or "n/a"
        if item.predicted_univalent is not None:
            verdict += f" (predicted {_flag(item.predicted_univalent)})"
        lines.append(f"  univalent: {verdict}")
        if item.area is not None:
            lines.append(f"  area: {item.area:.10g}")
        if item.threshold is not None:
            lines.append(f"  threshold: {_threshold_line(item)}")
        if item.max_residual is not None:
            lines.append(
                f"  residual: {item.max_residual:.3e} (relative {item.relative_residual:.3e}), "
                f"equilibrium {_flag(item.equilibrium)}"
            )
        if item.residuals:
            lines.append("  residual table:")
            for label, value in item.residuals:
                lines.append(f"    {label}: {value.real:+.3e} {value.imag:+.3e}i")
        if item.feasibility is not None:
            lines.append(f"  feasibility: {item.feasibility:.10g}")
        if item.rationality_defect is not None:
            lines.append(f"  rationality defect: {item.rationality_defect:.3e}")
        for message in item.warnings:
            lines.append(f"  warning: {message}")

    if report.parameter_table:
        lines.append("")
        lines.append("PARAMETERS:")
        lines.append("  alpha | beta | x0 | mu/alpha")
        for row in report.parameter_table:
            lines.append(
                f"  {row['alpha']:.6g} | {row['beta']:.6g} | {row['x0']:.10g} | {row['mu_over_alpha']:.10g}"
            )
    return "\n".join(lines)


def format_report(report: RunReport, format: str = "toon") -> str:
    """
    Render a RunReport.

    Args:
        report: Finished run.
        format: "toon", "json", or "rich".
    """
    logger.debug("Formatting report %s in '%s' format", report.scenario, format)

    if format == "toon":
        return format_report_toon(report)
    if format == "json":
        return format_report_json(report)
    if format == "rich":
        return format_report_rich(report)
    logger.error("Unknown format requested: %s", format)
    raise ValueError(f"Unknown format: {format}. Use 'toon', 'json', or 'rich'.")
