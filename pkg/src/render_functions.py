from __future__ import annotations

import io
import json
import math
import sys
from typing import Any, Dict, List, TextIO

import matplotlib  # type: ignore

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # type: ignore  # noqa: E402
import numpy as np  # type: ignore  # noqa: E402

import color  # noqa: E402
import consts  # noqa: E402
import exceptions  # noqa: E402
from engine import ScanResult  # noqa: E402
from phase_types import OutputFormat  # noqa: E402


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{consts.CSV_DIGITS}g")
    return str(value)


def _python_value(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def render_csv(result: ScanResult, config_hash: str) -> str:
    lines = [f"# spinlab v{consts.VERSION} config={config_hash}"]
    for name, fit in result.fits.items():
        lines.append(
            f"# fit {name} slope={format_value(fit.slope)} intercept={format_value(fit.intercept)} "
            f"max_abs_residual={format_value(fit.max_abs_residual)}"
        )
    lines.append("# units " + ",".join(result.units))
    lines.append(",".join(result.names))
    for row in result.rows:
        lines.append(",".join(format_value(value) for value in row))
    return "\n".join(lines) + "\n"


def render_json(result: ScanResult, config_hash: str) -> str:
    document: Dict[str, Any] = {
        "tool": f"spinlab v{consts.VERSION}",
        "config": config_hash,
        "columns": [{"name": name, "unit": unit} for name, unit, _ in result.columns],
        "rows": [
            {name: _python_value(row[name]) for name in result.names} for row in result.rows
        ],
        "fits": {name: fit.as_dict() for name, fit in result.fits.items()},
        "verdicts": [verdict.as_dict() for verdict in result.verdicts],
        # wall time stays out so that reruns are byte-identical
        "metadata": {
            key: _python_value(value) for key, value in result.metadata.items() if key != "wall_time"
        },
    }
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def _line_chart(ax, result: ScanResult) -> None:
    chart = result.chart
    rows = result.rows
    groups = [None] if chart.group is None else sorted(set(rows[chart.group].tolist()))
    for i, group in enumerate(groups):
        subset = rows if group is None else rows[rows[chart.group] == group]
        subset = np.sort(subset, order=chart.x)
        label = None if group is None else f"{chart.group}={format_value(group)}"
        ax.plot(
            subset[chart.x], subset[chart.y], marker="o", markersize=3,
            color=color.to_hex(color.series[i % len(color.series)]), label=label,
        )
    if chart.fit in result.fits:
        xs = np.unique(rows[chart.x])
        law_x = np.log2(xs) if chart.log_x else xs
        ax.plot(
            xs, result.fits[chart.fit].predict(law_x), linestyle="--",
            color=color.to_hex(color.law_line), label=f"fit {chart.fit}",
        )
    if chart.log_x:
        ax.set_xscale("log", base=2)
    if len(groups) > 1 or chart.fit in result.fits:
        ax.legend(fontsize="small")


def _heatmap(fig, ax, result: ScanResult) -> None:
    chart = result.chart
    rows = result.rows
    xs = np.unique(rows[chart.x])
    ys = np.unique(rows[chart.y])
    grid = np.full((ys.size, xs.size), np.nan)
    for row in rows:
        grid[np.searchsorted(ys, row[chart.y]), np.searchsorted(xs, row[chart.x])] = row[chart.z]
    mesh = ax.pcolormesh(xs, ys, grid, cmap=color.heatmap, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=chart.z)


def render_svg(result: ScanResult, config_hash: str) -> str:
    if result.chart is None:
        raise exceptions.ConfigError("this command has no chart, use csv or json")
    chart = result.chart
    with plt.rc_context({"svg.hashsalt": consts.SVG_HASHSALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        try:
            if chart.kind == "heatmap":
                _heatmap(fig, ax, result)
            else:
                _line_chart(ax, result)
            ax.set_xlabel(chart.x)
            ax.set_ylabel(chart.y)
            ax.set_title(f"{chart.title} [{config_hash}]".strip())
            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()


RENDERERS = {
    OutputFormat.CSV: render_csv,
    OutputFormat.JSON: render_json,
    OutputFormat.SVG: render_svg,
}


def write_result(result: ScanResult, fmt: OutputFormat, config_hash: str, out: str = None, stream: TextIO = None) -> None:
    """Write to `out`, or to `stream` (stdout by default) when no path is given."""
    text = RENDERERS[fmt](result, config_hash)
    if out is None:
        (stream or sys.stdout).write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise exceptions.OutputError(f"cannot write {out}: {exc}") from exc


def read_csv_columns(path: str) -> np.ndarray:
    """Rows of a spinlab CSV (or any headed CSV) as a structured array."""
    try:
        with open(path, encoding="utf-8") as f:
            lines: List[str] = [line for line in f if line.strip() and not line.startswith("#")]
    except OSError as exc:
        raise exceptions.OutputError(f"cannot read {path}: {exc}") from exc
    if len(lines) < 2:
        raise exceptions.ConfigError(f"{path} has no data rows")
    table = np.genfromtxt(lines, delimiter=",", names=True, dtype=None, encoding="utf-8")
    return np.atleast_1d(table)
