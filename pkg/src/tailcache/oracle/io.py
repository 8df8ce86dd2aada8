"""JSON persistence of oracle instances and solutions."""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import ValidationError

from tailcache.exceptions import ConfigurationError
from tailcache.models import HindsightInstance, HindsightSolution


def load_instance(path: Path | str) -> HindsightInstance:
    """Read a HindsightInstance from JSON."""
    path = Path(path)
    try:
        return HindsightInstance.model_validate(json.loads(path.read_text()))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigurationError(f"cannot load oracle instance {path}: {e}", "instance") from e


def save_solution(solution: HindsightSolution, path: Path | str) -> Path:
    """Write the solution, full schedule included, for audit."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(solution.model_dump(mode="json"), indent=2) + "\n")
    return path
