"""DSP/area accounting and chip-level throughput of replicated ModMult cores."""

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional

from loguru import logger
from pydantic import BaseModel

from paillier_accel.arith.bigint import BigUint
from paillier_accel.arith.montgomery import mod_exp_count
from paillier_accel.errors import ResourceBudgetError
from paillier_accel.hardware.pipeline_model import CoreConfig, simulate_schedule

INNER_LOOP_MULTIPLIERS = 2
Q_PATH_MULTIPLIERS = 1
DEFAULT_LUT_PER_CORE = 483
# Xilinx VU9P: DSP slices and CLB slices (the area unit of lut_per_core)
DEFAULT_TOTAL_DSP = 6840
DEFAULT_TOTAL_LUT = 147780
DOMAIN_CONVERSIONS_PER_MOD_MUL = 4


@dataclass
class ResourceBudget:
    """Chip resources available for replicated cores."""
    total_dsp: int = DEFAULT_TOTAL_DSP
    total_lut: int = DEFAULT_TOTAL_LUT

    def __post_init__(self):
        """Validate resource counts."""
        if self.total_dsp < 0 or self.total_lut < 0:
            raise ResourceBudgetError(f"Resource counts must be non-negative (dsp={self.total_dsp}, lut={self.total_lut})")


class ResourceModel(BaseModel):
    """Per-core resource usage plus the chip budget it is replicated into."""
    dsp_per_multiplier: int
    multipliers_per_pe: int
    q_path_multipliers: int
    dsp_per_core: int
    lut_per_core: float
    total_dsp: int
    total_lut: int


class ThroughputReport(BaseModel):
    """Chip throughput for a given per-operation cycle count."""
    cores: int
    binding_constraint: str
    clock_hz: float
    cycles_per_op: float
    latency_us: float
    ops_per_second: float
    throughput_per_dsp: Optional[float]


class PaillierOpEstimate(BaseModel):
    """ModMult counts and modeled time of one Paillier operation on one core."""
    key_bits: int
    modulus_bits: int
    cycles_per_mod_mul_n2: int
    cycles_per_mod_mul_n: int
    encrypt_mod_muls: int
    decrypt_mod_muls_n2: int
    decrypt_mod_muls_n: int
    encrypt_cycles: int
    decrypt_cycles: int
    encrypt_seconds: float
    decrypt_seconds: float
    exact: bool

    @property
    def encrypt_ops_per_second(self) -> float:
        return 1.0 / self.encrypt_seconds if self.encrypt_seconds > 0 else 0.0

    @property
    def decrypt_ops_per_second(self) -> float:
        return 1.0 / self.decrypt_seconds if self.decrypt_seconds > 0 else 0.0


@dataclass
class ReferenceDesign:
    """Published ModMult core used as a comparison point."""
    name: str
    dsp: int
    execution_us: float
    clock_mhz: float
    area_slices: Optional[int] = None

    @property
    def throughput_per_dsp(self) -> Optional[float]:
        if self.dsp <= 0:
            return None
        return 1.0 / (self.execution_us * 1e-6 * self.dsp)


DEFAULT_REFERENCE_DESIGNS = [
    ReferenceDesign(name="rtl-13dsp", dsp=13, execution_us=8.64, clock_mhz=490.0),
    ReferenceDesign(name="single-dsp", dsp=1, execution_us=135.4, clock_mhz=447.0),
    ReferenceDesign(name="lut-only", dsp=0, execution_us=18.70, clock_mhz=129.0),
]


def _is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def dsp_count(mult_bits: int, dsp_native_bits: int = 16) -> int:
    """DSP blocks for a mult_bits-wide multiplier built by Karatsuba from native blocks."""
    if not (_is_power_of_two(mult_bits) and _is_power_of_two(dsp_native_bits)):
        raise ValueError(f"Multiplier widths must be powers of two (got {mult_bits}, {dsp_native_bits})")
    if mult_bits < dsp_native_bits:
        raise ValueError(f"Multiplier width {mult_bits} is below the native DSP width {dsp_native_bits}")
    depth = int(math.log2(mult_bits // dsp_native_bits))
    return 3 ** depth


def core_resources(cfg: CoreConfig, budget: Optional[ResourceBudget] = None,
                   lut_per_core: float = DEFAULT_LUT_PER_CORE) -> ResourceModel:
    """Two inner-loop multipliers plus one q-path multiplier, each k bits wide.

    The single PE is reused by every inner iteration, so the unroll factor does
    not change the count.
    """
    budget = budget or ResourceBudget()
    per_multiplier = dsp_count(max(cfg.k, cfg.dsp_native_bits), cfg.dsp_native_bits)
    per_core = (INNER_LOOP_MULTIPLIERS + Q_PATH_MULTIPLIERS) * per_multiplier * cfg.pe_count
    return ResourceModel(
        dsp_per_multiplier=per_multiplier,
        multipliers_per_pe=INNER_LOOP_MULTIPLIERS,
        q_path_multipliers=Q_PATH_MULTIPLIERS,
        dsp_per_core=per_core,
        lut_per_core=lut_per_core,
        total_dsp=budget.total_dsp,
        total_lut=budget.total_lut,
    )


def chip_throughput(model: ResourceModel, cfg: CoreConfig, cycles_per_op: float) -> ThroughputReport:
    """Cores fitting the budget times per-core rate; also throughput per DSP."""
    if cycles_per_op <= 0:
        raise ValueError(f"cycles_per_op must be positive, got {cycles_per_op}")
    if model.total_dsp <= 0 or model.total_lut <= 0:
        raise ResourceBudgetError(f"Zero resource budget (dsp={model.total_dsp}, lut={model.total_lut})")
    if model.dsp_per_core <= 0 or model.lut_per_core <= 0:
        raise ResourceBudgetError("Per-core resource usage must be positive")

    by_dsp = model.total_dsp / model.dsp_per_core
    by_lut = model.total_lut / model.lut_per_core
    cores = math.floor(min(by_dsp, by_lut))
    if cores < 1:
        raise ResourceBudgetError(f"Budget fits no core (dsp allows {by_dsp:.2f}, lut allows {by_lut:.2f})")

    clock_hz = cfg.clock_hz
    report = ThroughputReport(
        cores=cores,
        binding_constraint="dsp" if by_dsp <= by_lut else "lut",
        clock_hz=clock_hz,
        cycles_per_op=cycles_per_op,
        latency_us=cycles_per_op / clock_hz * 1e6,
        ops_per_second=cores * clock_hz / cycles_per_op,
        throughput_per_dsp=clock_hz / (cycles_per_op * model.dsp_per_core),
    )
    logger.debug(f"{cores} cores ({report.binding_constraint}-bound), {report.ops_per_second:.1f} op/s")
    return report


def _expected_count(bits: int) -> int:
    # half the exponent bits set on average
    return bits + bits // 2 + 2


def paillier_op_model(key_bits: int, cfg: Optional[CoreConfig] = None, *,
                      message: Optional[BigUint] = None,
                      public_n: Optional[BigUint] = None,
                      lam: Optional[BigUint] = None,
                      fast_generator_power: bool = False) -> PaillierOpEstimate:
    """Cycles of one encryption and one decryption on a single core.

    With concrete exponents the ModMult counts are exact (they equal the
    Montgomery counters of the software path); otherwise expected counts for
    random ``key_bits``-bit exponents are used.
    """
    if key_bits <= 0:
        raise ValueError(f"key_bits must be positive, got {key_bits}")
    cfg = cfg or CoreConfig()
    k = cfg.k
    n2_bits = math.ceil(2 * key_bits / k) * k
    n_bits = math.ceil(key_bits / k) * k
    cycles_n2 = simulate_schedule(replace(cfg, l=n2_bits, strict=False)).simulated_cycles
    cycles_n = simulate_schedule(replace(cfg, l=n_bits, strict=False)).simulated_cycles

    exact = public_n is not None and lam is not None and (fast_generator_power or message is not None)
    n_count = mod_exp_count(public_n) if public_n is not None else _expected_count(key_bits)
    if fast_generator_power:
        m_count = 0
    elif message is not None:
        m_count = mod_exp_count(message)
    else:
        m_count = _expected_count(key_bits)
    encrypt_mm = m_count + n_count + DOMAIN_CONVERSIONS_PER_MOD_MUL
    decrypt_n2 = mod_exp_count(lam) if lam is not None else _expected_count(key_bits)
    decrypt_n = DOMAIN_CONVERSIONS_PER_MOD_MUL

    encrypt_cycles = encrypt_mm * cycles_n2
    decrypt_cycles = decrypt_n2 * cycles_n2 + decrypt_n * cycles_n
    return PaillierOpEstimate(
        key_bits=key_bits,
        modulus_bits=n2_bits,
        cycles_per_mod_mul_n2=cycles_n2,
        cycles_per_mod_mul_n=cycles_n,
        encrypt_mod_muls=encrypt_mm,
        decrypt_mod_muls_n2=decrypt_n2,
        decrypt_mod_muls_n=decrypt_n,
        encrypt_cycles=encrypt_cycles,
        decrypt_cycles=decrypt_cycles,
        encrypt_seconds=encrypt_cycles / cfg.clock_hz,
        decrypt_seconds=decrypt_cycles / cfg.clock_hz,
        exact=exact,
    )


def reference_design_rows(own_cycles: float, cfg: CoreConfig, model: ResourceModel,
                          designs: Optional[List[ReferenceDesign]] = None) -> List[Dict[str, object]]:
    """Comparison rows: this core at ``own_cycles`` followed by the reference designs."""
    designs = designs if designs is not None else DEFAULT_REFERENCE_DESIGNS
    own_us = own_cycles / cfg.clock_hz * 1e6
    rows: List[Dict[str, object]] = [{
        "design": "this-core",
        "dsp": model.dsp_per_core,
        "area_slices": model.lut_per_core,
        "clock_mhz": cfg.clock_mhz,
        "execution_us": round(own_us, 4),
        "throughput_per_dsp": round(cfg.clock_hz / (own_cycles * model.dsp_per_core), 1),
    }]
    for design in designs:
        per_dsp = design.throughput_per_dsp
        rows.append({
            "design": design.name,
            "dsp": design.dsp,
            "area_slices": design.area_slices,
            "clock_mhz": design.clock_mhz,
            "execution_us": design.execution_us,
            "throughput_per_dsp": round(per_dsp, 1) if per_dsp is not None else "NA",
        })
    return rows


def modeled_acceleration(software_ops_per_second: float, modeled_ops_per_second: float) -> float:
    """Ratio of modeled accelerator throughput to measured software throughput."""
    if software_ops_per_second <= 0:
        raise ValueError(f"Software throughput must be positive, got {software_ops_per_second}")
    return modeled_ops_per_second / software_ops_per_second
