"""Hardware model configuration: core parameters, chip budget, reference designs."""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from loguru import logger

from paillier_accel.errors import ConfigError
from paillier_accel.hardware.pipeline_model import CoreConfig, simulate_schedule
from paillier_accel.hardware.resources import (
    DEFAULT_LUT_PER_CORE,
    DEFAULT_REFERENCE_DESIGNS,
    ReferenceDesign,
    ResourceBudget,
)


@dataclass
class OperatingPoint:
    """Measured ModMult latency, given either in cycles or in microseconds."""
    execution_us: Optional[float] = None
    cycles: Optional[int] = None

    def __post_init__(self):
        """Validate that exactly one positive measure is present."""
        if (self.execution_us is None) == (self.cycles is None):
            raise ValueError("Operating point needs exactly one of execution_us or cycles")
        if self.execution_us is not None and self.execution_us <= 0:
            raise ValueError(f"execution_us must be positive, got {self.execution_us}")
        if self.cycles is not None and self.cycles <= 0:
            raise ValueError(f"cycles must be positive, got {self.cycles}")

    def resolve_cycles(self, clock_hz: float) -> int:
        if self.cycles is not None:
            return self.cycles
        return round(self.execution_us * 1e-6 * clock_hz)


@dataclass
class HardwareConfig:
    """Complete model-report configuration."""
    core: CoreConfig = field(default_factory=CoreConfig)
    budget: ResourceBudget = field(default_factory=ResourceBudget)
    lut_per_core: float = DEFAULT_LUT_PER_CORE
    operating_point: Optional[OperatingPoint] = None
    reference_designs: List[ReferenceDesign] = field(default_factory=lambda: list(DEFAULT_REFERENCE_DESIGNS))
    key_bits: int = 1024

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.lut_per_core <= 0:
            raise ValueError(f"lut_per_core must be positive, got {self.lut_per_core}")
        if self.key_bits < 16:
            raise ValueError(f"key_bits must be at least 16, got {self.key_bits}")

    def cycles_per_op(self) -> Tuple[int, str]:
        """ModMult cycles and where they came from ("operating_point" or "simulated")."""
        if self.operating_point is not None:
            return self.operating_point.resolve_cycles(self.core.clock_hz), "operating_point"
        return simulate_schedule(self.core).simulated_cycles, "simulated"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "key_bits": self.key_bits,
            "core": asdict(self.core),
            "budget": asdict(self.budget),
            "lut_per_core": self.lut_per_core,
            "operating_point": asdict(self.operating_point) if self.operating_point else None,
            "reference_designs": [asdict(d) for d in self.reference_designs],
        }


def hardware_config_from_dict(config_data: Dict[str, Any]) -> HardwareConfig:
    """Build a validated HardwareConfig from a plain dictionary."""
    if not isinstance(config_data, dict):
        raise ConfigError("Hardware configuration must be a mapping")
    if "hardware" in config_data and isinstance(config_data["hardware"], dict):
        config_data = config_data["hardware"]
    try:
        core = CoreConfig(**(config_data.get("core") or {}))
        budget = ResourceBudget(**(config_data.get("budget") or {}))
        point_data = config_data.get("operating_point")
        operating_point = OperatingPoint(**point_data) if point_data else None
        designs_data = config_data.get("reference_designs")
        designs = ([ReferenceDesign(**d) for d in designs_data]
                   if designs_data is not None else list(DEFAULT_REFERENCE_DESIGNS))
        return HardwareConfig(
            core=core,
            budget=budget,
            lut_per_core=config_data.get("lut_per_core", DEFAULT_LUT_PER_CORE),
            operating_point=operating_point,
            reference_designs=designs,
            key_bits=config_data.get("key_bits", 1024),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid hardware configuration: {e}") from e


def load_hardware_config(config_path: Union[str, Path]) -> HardwareConfig:
    """Load and validate a hardware configuration from JSON or YAML file."""
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

    config = hardware_config_from_dict(config_data or {})
    logger.info(f"Loaded hardware config: l={config.core.l}, k={config.core.k}, "
                f"{config.budget.total_dsp} DSP budget")
    return config


def create_sample_hardware_config(output_path: Union[str, Path]) -> Path:
    """Create a sample hardware configuration file."""
    sample_config = HardwareConfig(operating_point=OperatingPoint(execution_us=8.81)).to_dict()
    output_path = Path(output_path)

    if output_path.suffix.lower() in [".yaml", ".yml"]:
        with open(output_path, "w", encoding="utf-8") as f:
            yaml.dump(sample_config, f, default_flow_style=False, indent=2, sort_keys=False)
    else:
        if not output_path.suffix:
            output_path = output_path.with_suffix(".json")
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(sample_config, f, indent=2)

    logger.info(f"Sample hardware configuration created: {output_path}")
    return output_path
