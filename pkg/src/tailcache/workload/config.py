"""JSON configuration loading for workloads and comparison runs."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from tailcache.exceptions import ConfigurationError
from tailcache.models import PolicyConfig, PromptLengthDistribution, RunConfig, SyntheticParams
from tailcache.workload.ingest import load_conversations

logger = logging.getLogger(__name__)

_DISTRIBUTION_FIELDS = {
    "prompt_length_dist": "prompt",
    "response_length_dist": "response",
    "prompt_dist": "prompt",
}


def _read_json(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file {path} not found", str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e.msg}", str(path)) from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must hold a JSON object", str(path))
    return data


def resolve_distribution(raw: Any, base: Path, side: str = "prompt") -> Any:
    """Turn `{values, probs}` or `{empirical_from}` into a distribution.

    Anything else (e.g. an already serialised `support`) is passed through
    for pydantic to validate.
    """
    if not isinstance(raw, dict):
        return raw
    if "empirical_from" in raw:
        source = Path(raw["empirical_from"])
        if not source.is_absolute():
            source = base / source
        trace = load_conversations(source, block_size=int(raw.get("block_size", 1)))
        if side == "response":
            samples = [e.response_blocks for e in trace.events]
        else:
            samples = [e.prompt_blocks for e in trace.events]
        if not samples:
            raise ConfigurationError(f"{source} holds no turns to fit", "empirical_from")
        return PromptLengthDistribution.from_samples(samples)
    if "values" in raw and "probs" in raw:
        try:
            return PromptLengthDistribution.from_values(raw["values"], raw["probs"])
        except (ValueError, ValidationError) as e:
            raise ConfigurationError(f"invalid {side} distribution: {e}", f"{side}_dist") from e
    return raw


def _resolve_all(data: dict[str, Any], base: Path) -> dict[str, Any]:
    resolved = dict(data)
    for key, side in _DISTRIBUTION_FIELDS.items():
        if key in resolved:
            resolved[key] = resolve_distribution(resolved[key], base, side)
    return resolved


def load_synthetic_params(path: Path | str) -> SyntheticParams:
    """Load SyntheticParams from JSON.

    Example:
        >>> params = load_synthetic_params("workload.json")
        >>> params.seed
        7
    """
    path = Path(path)
    data = _resolve_all(_read_json(path), path.parent)
    try:
        return SyntheticParams.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid synthetic workload in {path}: {e}", "synthetic") from e


def load_run_config(path: Path | str) -> RunConfig:
    """Load a RunConfig; relative paths resolve against the file's directory."""
    path = Path(path)
    base = path.parent
    data = _read_json(path)

    for key in ("trace_path", "output_dir"):
        if data.get(key) and not Path(data[key]).is_absolute():
            data[key] = str(base / data[key])
    if isinstance(data.get("synthetic"), dict):
        data["synthetic"] = _resolve_all(data["synthetic"], base)
    if isinstance(data.get("policies"), list):
        data["policies"] = [
            _resolve_all(p, base) if isinstance(p, dict) else p for p in data["policies"]
        ]

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid run configuration in {path}: {e}", "run") from e
    logger.info(
        f"Loaded run config {path.name}: {len(config.policies)} policies, "
        f"{len(config.capacities)} capacities, {len(config.xi_ms)} thresholds"
    )
    return config


def load_policy_config(path: Path | str) -> PolicyConfig:
    """Load one PolicyConfig; `prompt_dist` accepts the same shorthands as workloads."""
    path = Path(path)
    data = _resolve_all(_read_json(path), path.parent)
    try:
        return PolicyConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid policy in {path}: {e}", "policy") from e
