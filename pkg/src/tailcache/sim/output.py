"""CSV, JSON and SVG writers for replay and comparison results."""

from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure
from pydantic import BaseModel

from tailcache.models import ComparisonTable, MetricsReport, RequestRecord

logger = logging.getLogger(__name__)

CHART_AXIS_LABEL = "modeled TTFT (linear alpha model), ms"
CHART_PANELS = (("p50", "P50"), ("p90", "P90"), ("p95", "P95"), ("p99", "P99"))


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def write_json(model: BaseModel, path: Path | str) -> Path:
    """Pretty-printed JSON dump of any result model."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n")
    return path


def write_records_csv(records: Sequence[RequestRecord], path: Path | str) -> Path:
    """One row per served request."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["event_index", "conversation_id", "timestamp", "uncached_blocks",
             "cached_blocks_used", "ttft_ms"]
        )
        for r in records:
            writer.writerow(
                [r.event_index, r.conversation_id, repr(r.timestamp), r.uncached_blocks,
                 r.cached_blocks_used, _fmt(r.ttft_ms)]
            )
    return path


def report_row(report: MetricsReport) -> list[str]:
    row = [
        str(report.count),
        _fmt(report.tel_blocks),
        _fmt(report.tel_ms),
        _fmt(report.p50),
        _fmt(report.p90),
        _fmt(report.p95),
        _fmt(report.p99),
        _fmt(report.mean_ttft_ms),
        _fmt(report.max_ttft_ms),
    ]
    for result in report.slo:
        row.extend([str(result.count), _fmt(result.rate)])
    row.append(report.latency_source)
    return row


def report_header(slo_ms: Sequence[float]) -> list[str]:
    header = ["n", "tel_blocks", "tel_ms", "p50", "p90", "p95", "p99", "mean", "max"]
    for threshold in slo_ms:
        header.extend([f"slo{threshold:g}_count", f"slo{threshold:g}_rate"])
    header.append("latency_source")
    return header


def write_comparison_csv(table: ComparisonTable, path: Path | str) -> Path:
    """One row per (policy, capacity, xi_s) cell, in grid order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    slo_ms = [r.slo_ms for r in table.cells[0].report.slo] if table.cells else []
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["policy", "capacity", "xi_ms", *report_header(slo_ms)])
        for cell in table.cells:
            writer.writerow(
                [cell.policy, cell.capacity, f"{cell.xi_ms:g}", *report_row(cell.report)]
            )
    logger.info(f"Wrote {len(table.cells)} cells to {path}")
    return path


def write_improvements_csv(table: ComparisonTable, path: Path | str) -> Path:
    """Improvement (%) over the baseline, one decimal, one row per non-baseline cell."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metrics: list[str] = []
    for cell in table.improvements:
        for metric in cell.values:
            if metric not in metrics:
                metrics.append(metric)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["policy", "baseline", "capacity", "xi_ms", *metrics])
        for cell in table.improvements:
            values = [f"{cell.values[m]:.1f}" if m in cell.values else "" for m in metrics]
            writer.writerow(
                [cell.policy, table.baseline, cell.capacity, f"{cell.xi_ms:g}", *values]
            )
    return path


def plot_comparison(table: ComparisonTable, directory: Path | str) -> list[Path]:
    """One SVG per threshold: tail percentiles against capacity, one line per policy."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    policies = list(dict.fromkeys(c.policy for c in table.cells))
    capacities = sorted({c.capacity for c in table.cells})
    written: list[Path] = []

    for xi_ms in sorted({c.xi_ms for c in table.cells}):
        figure = Figure(figsize=(4 * len(CHART_PANELS), 3.5))
        axes = figure.subplots(1, len(CHART_PANELS), sharex=True)
        for ax, (attribute, title) in zip(axes, CHART_PANELS):
            for policy in policies:
                points = [
                    (capacity, getattr(report, attribute))
                    for capacity in capacities
                    if (report := table.report(policy, capacity, xi_ms)) is not None
                ]
                ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=policy)
            ax.set_title(f"{title}, xi_s = {xi_ms:g} ms")
            ax.set_xlabel("cache capacity (blocks)")
            ax.set_ylabel(CHART_AXIS_LABEL)
        axes[0].legend(loc="upper right")
        figure.tight_layout()

        path = directory / f"latency_vs_capacity_xi{xi_ms:g}.svg"
        with matplotlib.rc_context({"svg.hashsalt": "tailcache"}):
            figure.savefig(path, format="svg", metadata={"Date": None})
        written.append(path)
    logger.info(f"Wrote {len(written)} charts to {directory}")
    return written
