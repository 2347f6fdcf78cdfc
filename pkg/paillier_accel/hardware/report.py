"""Model report: schedule, resources and throughput in one JSON-ready document."""

from dataclasses import replace
from typing import Any, Dict, List

import pandas as pd

from paillier_accel.hardware.hardware_config import HardwareConfig
from paillier_accel.hardware.pipeline_model import cycle_table, simulate_schedule
from paillier_accel.hardware.resources import (
    chip_throughput,
    core_resources,
    paillier_op_model,
    reference_design_rows,
)


def build_model_report(hw: HardwareConfig) -> Dict[str, Any]:
    """Everything ``model-report`` prints, as plain data."""
    schedule = simulate_schedule(hw.core)
    model = core_resources(hw.core, hw.budget, hw.lut_per_core)
    cycles, source = hw.cycles_per_op()
    throughput = chip_throughput(model, hw.core, cycles)
    simulated = chip_throughput(model, hw.core, schedule.simulated_cycles)
    estimate = paillier_op_model(hw.key_bits, hw.core)

    return {
        "config": hw.to_dict(),
        "schedule": schedule.model_dump(),
        "resources": model.model_dump(),
        "throughput": {**throughput.model_dump(), "cycles_source": source},
        "simulated_throughput": simulated.model_dump(),
        "paillier": {
            **estimate.model_dump(),
            "chip_encrypt_ops_per_second": throughput.cores / estimate.encrypt_seconds,
            "chip_decrypt_ops_per_second": throughput.cores / estimate.decrypt_seconds,
        },
        "reference_designs": reference_design_rows(cycles, hw.core, model, hw.reference_designs),
        "cycle_table": cycle_table(k=hw.core.k, base=replace(hw.core, strict=False)),
    }


def _frame(rows: List[Dict[str, Any]]) -> str:
    return pd.DataFrame(rows).to_string(index=False)


def render_model_report(report: Dict[str, Any]) -> str:
    """Human-readable tables for standard output."""
    schedule = report["schedule"]
    resources = report["resources"]
    throughput = report["throughput"]
    paillier = report["paillier"]
    summary = [
        {"metric": "operand bits (l)", "value": schedule["l"]},
        {"metric": "radix bits (k)", "value": schedule["k"]},
        {"metric": "ideal cycles", "value": schedule["ideal_cycles"]},
        {"metric": "simulated cycles", "value": schedule["simulated_cycles"]},
        {"metric": "overhead ratio", "value": round(schedule["overhead_ratio"], 4)},
        {"metric": "DSP per core", "value": resources["dsp_per_core"]},
        {"metric": "area per core (slices)", "value": resources["lut_per_core"]},
        {"metric": f"cycles per ModMult ({throughput['cycles_source']})", "value": throughput["cycles_per_op"]},
        {"metric": "cores on chip", "value": f"{throughput['cores']} ({throughput['binding_constraint']}-bound)"},
        {"metric": "chip ModMult op/s", "value": round(throughput["ops_per_second"], 1)},
        {"metric": "throughput per DSP (op/s)", "value": round(throughput["throughput_per_dsp"], 1)},
        {"metric": f"chip encryptions/s ({paillier['key_bits']}-bit key)",
         "value": round(paillier["chip_encrypt_ops_per_second"], 1)},
        {"metric": "chip decryptions/s", "value": round(paillier["chip_decrypt_ops_per_second"], 1)},
    ]
    sections = [
        "ModMult core model",
        _frame(summary),
        "",
        "Comparison with reference ModMult cores",
        _frame(report["reference_designs"]),
        "",
        "Cycles per operand size",
        _frame(report["cycle_table"]),
    ]
    return "\n".join(sections)
