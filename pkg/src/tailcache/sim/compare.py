"""Policy x capacity x threshold comparison grid."""

from __future__ import annotations

import logging
import math

from tailcache.exceptions import CellFailureError
from tailcache.metrics import relative_improvement
from tailcache.models import (
    ComparisonCell,
    ComparisonTable,
    ImprovementCell,
    MetricsReport,
    RunConfig,
    Trace,
)
from tailcache.sim.replay import replay
from tailcache.workload import generate_synthetic, load_conversations

logger = logging.getLogger(__name__)


def load_trace(config: RunConfig) -> Trace:
    """Trace named by the run: loaded from disk or generated."""
    if config.trace_path is not None:
        return load_conversations(
            config.trace_path, config.latency.block_size, max_turns=config.max_turns
        )
    assert config.synthetic is not None
    params = config.synthetic
    if config.seed is not None:
        params = params.model_copy(update={"seed": config.seed})
    return generate_synthetic(params)


def _improvement(base: float, variant: float) -> float | None:
    if base > 0:
        return relative_improvement(base, variant)
    return 0.0 if math.isclose(variant, base) else None


def improvement_values(baseline: MetricsReport, report: MetricsReport) -> dict[str, float]:
    """Relative improvement (%) of `report` over `baseline` per metric.

    Metrics where the baseline is zero and the variant is not are omitted.
    """
    pairs: dict[str, tuple[float, float]] = {
        "tel_ms": (baseline.tel_ms, report.tel_ms),
        "p50": (baseline.p50, report.p50),
        "p90": (baseline.p90, report.p90),
        "p95": (baseline.p95, report.p95),
        "p99": (baseline.p99, report.p99),
        "mean": (baseline.mean_ttft_ms, report.mean_ttft_ms),
    }
    for result in report.slo:
        base_slo = baseline.slo_for(result.slo_ms)
        if base_slo is not None:
            pairs[f"slo{result.slo_ms:g}_count"] = (float(base_slo.count), float(result.count))

    values: dict[str, float] = {}
    for metric, (base, variant) in pairs.items():
        value = _improvement(base, variant)
        if value is not None:
            values[metric] = value
    return values


def compare(config: RunConfig, trace: Trace | None = None) -> ComparisonTable:
    """Replay every (policy, capacity, xi_s) cell on one trace.

    Cells run in key order (policy order of the config, then capacity, then
    threshold) so the output is reproducible.

    Raises:
        CellFailureError: If any cell fails, with its coordinates

    Example:
        >>> table = compare(load_run_config("run.json"))
        >>> table.improvement("TLRU", 1000, 200.0)["p90"]
        12.5
    """
    trace = trace if trace is not None else load_trace(config)
    model = config.latency
    cells: list[ComparisonCell] = []

    for policy in config.policies:
        for capacity in config.capacities:
            for xi_ms in config.xi_ms:
                cell_policy = policy.model_copy(update={"xi_blocks": model.xi_blocks(xi_ms)})
                try:
                    result = replay(
                        trace, cell_policy, capacity, model, xi_ms=xi_ms, slo_ms=config.slo_ms
                    )
                except Exception as e:
                    logger.error(f"cell {policy.name} C={capacity} xi={xi_ms} failed: {e}")
                    raise CellFailureError(policy.name, capacity, xi_ms, original_error=e) from e
                cells.append(
                    ComparisonCell(
                        policy=policy.name, capacity=capacity, xi_ms=xi_ms, report=result.report
                    )
                )
                logger.info(
                    f"{policy.name} C={capacity} xi={xi_ms:g}ms: "
                    f"p90={result.report.p90:g} tel={result.report.tel_ms:g}"
                )

    baseline = config.baseline_name
    table = ComparisonTable(baseline=baseline, cells=cells)
    for cell in cells:
        if cell.policy == baseline:
            continue
        base_report = table.report(baseline, cell.capacity, cell.xi_ms)
        assert base_report is not None
        table.improvements.append(
            ImprovementCell(
                policy=cell.policy,
                capacity=cell.capacity,
                xi_ms=cell.xi_ms,
                values=improvement_values(base_report, cell.report),
            )
        )
    return table
