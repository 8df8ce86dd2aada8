"""Fitting alpha from measured prefill times."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from tailcache.exceptions import InvalidArgumentError
from tailcache.models import LatencyModel

logger = logging.getLogger(__name__)


def fit_alpha(uncached_blocks: Sequence[float], ttft_ms: Sequence[float]) -> float:
    """Least-squares slope through the origin of TTFT against uncached blocks.

    Example:
        >>> fit_alpha([100, 200, 400], [50.0, 100.0, 200.0])
        0.5
    """
    if len(uncached_blocks) != len(ttft_ms):
        raise InvalidArgumentError(
            "need one TTFT per uncached-block count", "ttft_ms", len(ttft_ms)
        )
    x = np.asarray(uncached_blocks, dtype=np.float64).reshape(-1, 1)
    y = np.asarray(ttft_ms, dtype=np.float64)
    if x.size == 0 or not np.any(x):
        raise InvalidArgumentError(
            "calibration needs a non-zero block count", "uncached_blocks", list(x.ravel())
        )
    slope = float(np.linalg.lstsq(x, y, rcond=None)[0][0])
    if slope <= 0:
        raise InvalidArgumentError("fitted alpha is not positive", "ttft_ms", slope)
    logger.info(f"Fitted alpha = {slope:.6g} ms/block over {x.size} measurements")
    return slope


def calibrated_model(
    uncached_blocks: Sequence[float],
    ttft_ms: Sequence[float],
    block_size: int = 1,
) -> LatencyModel:
    """LatencyModel whose alpha comes from `fit_alpha`."""
    return LatencyModel(
        alpha_ms_per_block=fit_alpha(uncached_blocks, ttft_ms), block_size=block_size
    )
