"""Engine configuration: explicit values, config files and environment overrides."""

import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from loguru import logger

from paillier_accel.errors import ConfigError, EngineConfigError

ENV_PREFIX = "PAILLIER_ENGINE_"
DEFAULT_BATCH_SIZE = 1024


@dataclass
class EngineConfig:
    """Worker pool, batch and ring sizing."""
    workers: int = 1
    batch_size: int = DEFAULT_BATCH_SIZE
    ring_slots: int = 2
    seed: Optional[int] = None  # None = fresh from secrets when the engine starts
    fast_generator_power: bool = False

    def __post_init__(self):
        """Validate engine settings."""
        if self.workers < 1:
            raise EngineConfigError(f"workers must be at least 1, got {self.workers}")
        if self.batch_size < 1:
            raise EngineConfigError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.ring_slots < 2:
            raise EngineConfigError(f"ring_slots must be at least 2, got {self.ring_slots}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_env(self, environ: Optional[Mapping[str, str]] = None) -> "EngineConfig":
        """Copy with PAILLIER_ENGINE_* variables applied on top."""
        environ = os.environ if environ is None else environ
        overrides: Dict[str, int] = {}
        for name in ("workers", "batch_size", "ring_slots", "seed"):
            raw = environ.get(f"{ENV_PREFIX}{name.upper()}")
            if raw is None or raw == "":
                continue
            try:
                overrides[name] = int(raw)
            except ValueError as e:
                raise EngineConfigError(f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}") from e
        if overrides:
            logger.info(f"Engine environment overrides: {overrides}")
        return replace(self, **overrides)

    @classmethod
    def from_env(cls, base: Optional["EngineConfig"] = None,
                 environ: Optional[Mapping[str, str]] = None) -> "EngineConfig":
        return (base or cls()).with_env(environ)


def engine_config_from_dict(config_data: Dict[str, Any]) -> EngineConfig:
    if "engine" in config_data and isinstance(config_data["engine"], dict):
        config_data = config_data["engine"]
    known = {"workers", "batch_size", "ring_slots", "seed", "fast_generator_power"}
    unknown = set(config_data) - known
    if unknown:
        raise ConfigError(f"Unknown engine settings: {sorted(unknown)}")
    try:
        return EngineConfig(**config_data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid engine configuration: {e}") from e


def load_engine_config(config_path: Union[str, Path]) -> EngineConfig:
    """Load and validate engine settings from JSON or YAML file."""
    config_path = Path(config_path)

    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            if config_path.suffix.lower() in [".yaml", ".yml"]:
                config_data = yaml.safe_load(f)
            elif config_path.suffix.lower() == ".json":
                config_data = json.load(f)
            else:
                raise ConfigError(f"Unsupported file format: {config_path.suffix}")
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot parse {config_path}: {e}") from e

    config = engine_config_from_dict(config_data or {})
    logger.info(f"Loaded engine config: {config.workers} workers, batch {config.batch_size}, {config.ring_slots} slots")
    return config
