"""DSP accounting, chip throughput and the Paillier operation model."""

import json

import pytest
import yaml

from config.default_config import DEFAULT_CONFIG
from paillier_accel.arith.bigint import from_int
from paillier_accel.arith.montgomery import mod_exp_count
from paillier_accel.errors import ConfigError, ResourceBudgetError
from paillier_accel.hardware.hardware_config import (
    HardwareConfig,
    OperatingPoint,
    create_sample_hardware_config,
    hardware_config_from_dict,
    load_hardware_config,
)
from paillier_accel.hardware.pipeline_model import CoreConfig
from paillier_accel.hardware.report import build_model_report, render_model_report
from paillier_accel.hardware.resources import (
    DEFAULT_REFERENCE_DESIGNS,
    ResourceBudget,
    chip_throughput,
    core_resources,
    dsp_count,
    modeled_acceleration,
    paillier_op_model,
    reference_design_rows,
)

OPERATING_POINT_CYCLES = 4405


class TestDspCount:

    @pytest.mark.parametrize("bits,native,expected", [
        (16, 16, 1),
        (32, 16, 3),
        (64, 16, 9),
        (128, 16, 27),
        (64, 32, 3),
    ])
    def test_karatsuba_blocks(self, bits, native, expected):
        assert dsp_count(bits, native) == expected

    def test_invalid_widths(self):
        with pytest.raises(ValueError):
            dsp_count(24, 16)
        with pytest.raises(ValueError):
            dsp_count(8, 16)

    def test_default_core_uses_nine(self):
        model = core_resources(CoreConfig())
        assert model.dsp_per_multiplier == 3
        assert model.dsp_per_core == 9

    def test_narrow_radix_still_one_block(self):
        assert core_resources(CoreConfig(l=2048, k=16)).dsp_per_core == 3

    def test_unroll_factor_does_not_change_dsp(self):
        assert core_resources(CoreConfig(unroll_factor=4)).dsp_per_core == 9


class TestChipThroughput:

    def test_operating_point_per_dsp(self):
        cfg = CoreConfig()
        report = chip_throughput(core_resources(cfg), cfg, OPERATING_POINT_CYCLES)
        assert report.throughput_per_dsp == pytest.approx(12612, abs=1)
        assert report.throughput_per_dsp == pytest.approx(12626, rel=0.02)
        assert report.latency_us == pytest.approx(8.81)

    def test_default_budget_is_area_bound(self):
        cfg = CoreConfig()
        report = chip_throughput(core_resources(cfg), cfg, OPERATING_POINT_CYCLES)
        assert report.cores == 305
        assert report.binding_constraint == "lut"

    def test_per_dsp_independent_of_core_count(self):
        cfg = CoreConfig()
        small = chip_throughput(core_resources(cfg, ResourceBudget(total_dsp=90)), cfg, 4405)
        large = chip_throughput(core_resources(cfg), cfg, 4405)
        assert small.cores != large.cores
        assert small.throughput_per_dsp == pytest.approx(large.throughput_per_dsp)

    def test_linear_in_dsp_budget(self):
        cfg = CoreConfig()
        one = chip_throughput(core_resources(cfg, ResourceBudget(total_dsp=900)), cfg, 4405)
        two = chip_throughput(core_resources(cfg, ResourceBudget(total_dsp=1800)), cfg, 4405)
        assert one.binding_constraint == two.binding_constraint == "dsp"
        assert (one.cores, two.cores) == (100, 200)
        assert two.ops_per_second == pytest.approx(2 * one.ops_per_second)

    @pytest.mark.parametrize("budget", [ResourceBudget(total_dsp=0), ResourceBudget(total_lut=0)])
    def test_zero_budget(self, budget):
        cfg = CoreConfig()
        with pytest.raises(ResourceBudgetError):
            chip_throughput(core_resources(cfg, budget), cfg, 4405)

    def test_budget_smaller_than_one_core(self):
        cfg = CoreConfig()
        with pytest.raises(ResourceBudgetError):
            chip_throughput(core_resources(cfg, ResourceBudget(total_dsp=8)), cfg, 4405)

    def test_negative_budget(self):
        with pytest.raises(ResourceBudgetError):
            ResourceBudget(total_dsp=-1)

    def test_cycles_must_be_positive(self):
        cfg = CoreConfig()
        with pytest.raises(ValueError):
            chip_throughput(core_resources(cfg), cfg, 0)


class TestReferenceDesigns:

    def test_rows(self):
        cfg = CoreConfig()
        rows = reference_design_rows(4405, cfg, core_resources(cfg))
        by_name = {row["design"]: row for row in rows}
        assert by_name["this-core"]["throughput_per_dsp"] == pytest.approx(12612, abs=1)
        assert by_name["rtl-13dsp"]["throughput_per_dsp"] == pytest.approx(8903, abs=1)
        assert by_name["single-dsp"]["throughput_per_dsp"] == pytest.approx(7385, abs=1)
        assert by_name["lut-only"]["throughput_per_dsp"] == "NA"

    def test_defaults_listed(self):
        assert [d.name for d in DEFAULT_REFERENCE_DESIGNS] == ["rtl-13dsp", "single-dsp", "lut-only"]


class TestPaillierOpModel:

    def test_exact_counts_match_montgomery(self, small_keypair):
        pk, sk = small_keypair
        message = from_int(12345)
        estimate = paillier_op_model(64, CoreConfig(), public_n=pk.n, lam=sk.lam, message=message)
        assert estimate.exact
        assert estimate.encrypt_mod_muls == mod_exp_count(message) + mod_exp_count(pk.n) + 4
        assert estimate.decrypt_mod_muls_n2 == mod_exp_count(sk.lam)
        assert estimate.modulus_bits == 128

    def test_fast_generator_power_drops_the_first_exponentiation(self, small_keypair):
        pk, sk = small_keypair
        fast = paillier_op_model(64, public_n=pk.n, lam=sk.lam, fast_generator_power=True)
        assert fast.exact
        assert fast.encrypt_mod_muls == mod_exp_count(pk.n) + 4

    def test_expected_counts(self):
        estimate = paillier_op_model(1024)
        assert not estimate.exact
        assert estimate.encrypt_mod_muls == 2 * (1024 + 512 + 2) + 4
        assert estimate.cycles_per_mod_mul_n2 == 4166
        assert estimate.encrypt_ops_per_second == pytest.approx(1 / estimate.encrypt_seconds)

    def test_acceleration_ratio(self):
        assert modeled_acceleration(10.0, 250.0) == pytest.approx(25.0)
        with pytest.raises(ValueError):
            modeled_acceleration(0.0, 1.0)


class TestHardwareConfig:

    def test_default_document_resolves_operating_point(self):
        hw = hardware_config_from_dict(DEFAULT_CONFIG["hardware"])
        assert hw.cycles_per_op() == (4405, "operating_point")

    def test_simulated_when_no_operating_point(self):
        assert HardwareConfig().cycles_per_op() == (4166, "simulated")

    def test_operating_point_needs_one_measure(self):
        with pytest.raises(ValueError):
            OperatingPoint()
        with pytest.raises(ValueError):
            OperatingPoint(execution_us=1.0, cycles=500)
        assert OperatingPoint(cycles=900).resolve_cycles(500e6) == 900

    def test_invalid_documents(self):
        with pytest.raises(ConfigError):
            hardware_config_from_dict({"core": {"l": 100}})
        with pytest.raises(ConfigError):
            hardware_config_from_dict({"core": {"bogus": 1}})
        with pytest.raises(ConfigError):
            hardware_config_from_dict([1, 2])

    @pytest.mark.parametrize("suffix", [".yaml", ".json"])
    def test_sample_file_round_trip(self, tmp_path, suffix):
        path = create_sample_hardware_config(tmp_path / f"hw{suffix}")
        with open(path, encoding="utf-8") as f:
            raw = yaml.safe_load(f) if suffix == ".yaml" else json.load(f)
        assert raw["core"]["k"] == 32
        hw = load_hardware_config(path)
        assert hw.cycles_per_op() == (4405, "operating_point")

    def test_unsupported_file(self, tmp_path):
        path = tmp_path / "hw.toml"
        path.write_text("x = 1")
        with pytest.raises(ConfigError):
            load_hardware_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_hardware_config(tmp_path / "absent.yaml")


class TestModelReport:

    def test_default_report(self):
        report = build_model_report(hardware_config_from_dict(DEFAULT_CONFIG["hardware"]))
        assert report["resources"]["dsp_per_core"] == 9
        assert report["throughput"]["cycles_source"] == "operating_point"
        assert report["throughput"]["throughput_per_dsp"] == pytest.approx(12626, rel=0.02)
        assert report["schedule"]["ideal_cycles"] == 4160
        assert len(report["cycle_table"]) == 4
        json.dumps(report)
        text = render_model_report(report)
        assert "throughput per DSP" in text
        assert "lut-only" in text
