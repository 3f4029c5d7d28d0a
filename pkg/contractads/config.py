"""
Contractads Config - Resource bounds and defaults, loaded from YAML and the environment.
"""

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

from .errors import BoundExceededError, ContractadError


DEFAULT_CONFIG_NAME = "contractads.yaml"
ENV_BOUND = "CONTRACTADS_BOUND"
ENV_MAX_VERTICES = "CONTRACTADS_MAX_VERTICES"


@dataclass(frozen=True)
class Settings:
    """Resource bounds for enumeration and completion."""
    max_vertices: int = 8
    max_weight: int = 7
    lattice_bound: int = 8
    default_bound: Tuple[int, int] = (5, 4)
    property_samples: int = 10000
    seed: int = 0

    @staticmethod
    def load(path: Optional[Union[str, Path]] = None) -> "Settings":
        """Defaults, then the YAML file, then environment overrides."""
        settings = Settings()

        if path is None and Path(DEFAULT_CONFIG_NAME).exists():
            path = DEFAULT_CONFIG_NAME
        if path is not None:
            path = Path(path)
            if not path.exists():
                raise FileNotFoundError(f"Settings file not found: {path}")
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            if not isinstance(data, dict):
                raise ContractadError(f"{path}: settings file must contain a mapping")
            settings = settings.merge(data)

        env: Dict[str, Any] = {}
        if os.environ.get(ENV_BOUND):
            env["default_bound"] = os.environ[ENV_BOUND]
        if os.environ.get(ENV_MAX_VERTICES):
            env["max_vertices"] = os.environ[ENV_MAX_VERTICES]
        return settings.merge(env) if env else settings

    def merge(self, data: Dict[str, Any]) -> "Settings":
        """Return a copy with the given keys overridden."""
        known = {f.name for f in fields(self)}
        changes: Dict[str, Any] = {}
        for key, value in data.items():
            if key not in known:
                raise ContractadError(f"unknown settings key '{key}'")
            if key == "default_bound":
                changes[key] = parse_bound(value)
            else:
                try:
                    changes[key] = int(value)
                except (TypeError, ValueError):
                    raise ContractadError(f"settings key '{key}' must be an integer, got {value!r}")
                if changes[key] < 0:
                    raise ContractadError(f"settings key '{key}' must be non-negative")
        return replace(self, **changes)

    def check_vertices(self, n: int) -> None:
        if n > self.max_vertices:
            raise BoundExceededError("vertex count", n, self.max_vertices)

    def check_weight(self, w: int) -> None:
        if w > self.max_weight:
            raise BoundExceededError("weight", w, self.max_weight)


def parse_bound(value: Any) -> Tuple[int, int]:
    """Parse a "V,W" bound, or a two-element list."""
    if isinstance(value, str):
        parts = value.replace(" ", "").split(",")
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = []
    if len(parts) != 2:
        raise ContractadError(f"bound must have the form V,W, got {value!r}")
    try:
        vertices, weight = int(parts[0]), int(parts[1])
    except (TypeError, ValueError):
        raise ContractadError(f"bound must have the form V,W, got {value!r}")
    if vertices < 1 or weight < 0:
        raise ContractadError(f"bound {value!r} must have V >= 1 and W >= 0")
    return vertices, weight


_active = Settings()


def get_settings() -> Settings:
    """Settings used by library calls that are not handed explicit bounds."""
    return _active


def set_settings(settings: Settings) -> None:
    global _active
    _active = settings
