"""Cycle schedule, resource and throughput model of the ModMult core."""

from .hardware_config import (
    HardwareConfig,
    OperatingPoint,
    create_sample_hardware_config,
    hardware_config_from_dict,
    load_hardware_config,
)
from .pipeline_model import (
    CoreConfig,
    PipelineSimulator,
    ScheduleReport,
    cycle_table,
    ideal_cycles,
    simulate_schedule,
)
from .report import build_model_report, render_model_report
from .resources import (
    DEFAULT_REFERENCE_DESIGNS,
    PaillierOpEstimate,
    ReferenceDesign,
    ResourceBudget,
    ResourceModel,
    ThroughputReport,
    chip_throughput,
    core_resources,
    dsp_count,
    modeled_acceleration,
    paillier_op_model,
    reference_design_rows,
)

__all__ = [
    "HardwareConfig",
    "OperatingPoint",
    "create_sample_hardware_config",
    "hardware_config_from_dict",
    "load_hardware_config",
    "CoreConfig",
    "PipelineSimulator",
    "ScheduleReport",
    "cycle_table",
    "ideal_cycles",
    "simulate_schedule",
    "build_model_report",
    "render_model_report",
    "DEFAULT_REFERENCE_DESIGNS",
    "PaillierOpEstimate",
    "ReferenceDesign",
    "ResourceBudget",
    "ResourceModel",
    "ThroughputReport",
    "chip_throughput",
    "core_resources",
    "dsp_count",
    "modeled_acceleration",
    "paillier_op_model",
    "reference_design_rows",
]
