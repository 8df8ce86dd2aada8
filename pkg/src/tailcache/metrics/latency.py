"""TTFT, Tail Excess Latency, percentiles and SLO attainment."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

from tailcache.exceptions import InvalidArgumentError
from tailcache.models import LatencyModel, MetricsReport, RequestRecord, SloResult
from tailcache.models.run import DEFAULT_SLO_MS

REPORTED_PERCENTILES = (50, 90, 95, 99)


def ttft(uncached_blocks: int, model: LatencyModel) -> float:
    """Modeled time to first token: alpha * uncached blocks.

    Example:
        >>> ttft(200, LatencyModel(alpha_ms_per_block=1.0))
        200.0
    """
    if uncached_blocks < 0:
        raise InvalidArgumentError(
            "uncached block count must be non-negative", "uncached_blocks", uncached_blocks
        )
    return model.ttft_ms(uncached_blocks)


def tel(records: Iterable[RequestRecord], xi_ms: float) -> float:
    """Tail Excess Latency: sum of max(TTFT - xi_s, 0)."""
    return sum(max(r.ttft_ms - xi_ms, 0.0) for r in records)


def percentile(values: Sequence[float], p: float) -> float:
    """Nearest-rank percentile (no interpolation).

    Example:
        >>> percentile(list(range(1, 11)), 90)
        9
    """
    if not values:
        raise InvalidArgumentError("percentile of an empty list", "values", [])
    if not 0 < p <= 100:
        raise InvalidArgumentError("percentile must lie in (0, 100]", "p", p)
    ordered = sorted(values)
    rank = max(math.ceil(p * len(ordered) / 100), 1)
    return ordered[rank - 1]


def slo_violations(records: Sequence[RequestRecord], slo_ms: float) -> tuple[int, float]:
    """Count and rate of requests whose TTFT strictly exceeds `slo_ms`."""
    if not records:
        return 0, 0.0
    count = sum(1 for r in records if r.ttft_ms > slo_ms)
    return count, count / len(records)


def relative_improvement(base: float, variant: float) -> float:
    """(base - variant) / base in percent; regressions come out negative.

    Raises:
        InvalidArgumentError: If base is not positive
    """
    if base <= 0:
        raise InvalidArgumentError("improvement base must be positive", "base", base)
    return (base - variant) / base * 100.0


def summarize(
    records: Sequence[RequestRecord],
    xi_ms: float,
    model: LatencyModel,
    slo_ms: Iterable[float] = (DEFAULT_SLO_MS,),
) -> MetricsReport:
    """Aggregate per-request records into a MetricsReport."""
    ttfts = [r.ttft_ms for r in records]
    tel_ms = tel(records, xi_ms)
    slo = []
    for threshold in slo_ms:
        count, rate = slo_violations(records, threshold)
        slo.append(SloResult(slo_ms=threshold, count=count, rate=rate))

    tails = {f"p{p}": percentile(ttfts, p) if ttfts else 0.0 for p in REPORTED_PERCENTILES}
    return MetricsReport(
        count=len(records),
        xi_ms=xi_ms,
        tel_ms=tel_ms,
        tel_blocks=tel_ms / model.alpha_ms_per_block,
        mean_ttft_ms=sum(ttfts) / len(ttfts) if ttfts else 0.0,
        max_ttft_ms=max(ttfts, default=0.0),
        slo=slo,
        **tails,
    )
