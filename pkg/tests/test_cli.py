"""Command-line surface: exit codes, reports and file round trips."""

import json

import pytest

from config.default_config import DEFAULT_CONFIG
from paillier_accel.arith import bigint
from main import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, build_parser, engine_config, main

# Report fields that depend on wall-clock time.
TIMING_KEYS = {"seconds", "ops_per_second", "encrypt_ops_per_second", "decrypt_ops_per_second",
               "modeled_acceleration"}


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def _without_timing(value):
    if isinstance(value, dict):
        return {k: _without_timing(v) for k, v in value.items() if k not in TIMING_KEYS}
    if isinstance(value, list):
        return [_without_timing(v) for v in value]
    return value


class TestParsing:

    def test_missing_command(self):
        assert main([]) == EXIT_VALIDATION

    def test_unknown_option(self):
        assert main(["keygen", "--bits", "64", "--out", "k.json", "--frobnicate"]) == EXIT_VALIDATION

    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert "Paillier Accelerator Toolkit" in capsys.readouterr().out


class TestKeyCommands:

    def test_keygen_rejects_odd_size(self, tmp_path):
        assert main(["keygen", "--bits", "15", "--out", str(tmp_path / "k.json")]) == EXIT_VALIDATION

    def test_file_round_trip(self, tmp_path):
        key = tmp_path / "keys" / "demo.json"
        report = tmp_path / "keygen.json"
        assert main(["keygen", "--bits", "64", "--out", str(key), "--seed", "4",
                     "--json-out", str(report)]) == EXIT_OK
        assert (tmp_path / "keys" / "demo.pub.json").exists()
        assert _read_json(report)["key_bits"] == 64

        source = tmp_path / "notes.txt"
        source.write_bytes(b"homomorphic \x00\x00 tail bytes\x00")
        sealed = tmp_path / "notes.enc.json"
        restored = tmp_path / "notes.out"
        assert main(["encrypt", "--key", str(tmp_path / "keys" / "demo.pub.json"), "--in", str(source),
                     "--out", str(sealed), "--batch-size", "2", "--workers", "2"]) == EXIT_OK
        metadata = _read_json(sealed)["metadata"]
        assert metadata["length"] == len(source.read_bytes())
        assert metadata["chunk_bytes"] == 7

        assert main(["decrypt", "--key", str(key), "--in", str(sealed), "--out", str(restored)]) == EXIT_OK
        assert restored.read_bytes() == source.read_bytes()

    def test_decrypt_needs_private_key(self, tmp_path):
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "32", "--out", str(key)]) == EXIT_OK
        source = tmp_path / "a.bin"
        source.write_bytes(b"abc")
        sealed = tmp_path / "a.enc.json"
        assert main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(sealed)]) == EXIT_OK
        code = main(["decrypt", "--key", str(tmp_path / "k.pub.json"), "--in", str(sealed),
                     "--out", str(tmp_path / "a.out")])
        assert code == EXIT_VALIDATION

    def test_missing_input_file(self, tmp_path):
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "32", "--out", str(key)]) == EXIT_OK
        code = main(["encrypt", "--key", str(key), "--in", str(tmp_path / "absent"),
                     "--out", str(tmp_path / "x.json")])
        assert code == EXIT_RUNTIME


class TestBenchmarks:

    def test_bench_modmult_report(self, tmp_path):
        out = tmp_path / "modmult.json"
        assert main(["bench-modmult", "--bits", "256", "--word-size", "32", "--iters", "5",
                     "--json-out", str(out)]) == EXIT_OK
        report = _read_json(out)
        assert report["ideal_cycles"] == 72
        assert report["simulated_cycles"] == 78
        assert report["software"]["inner_iterations_per_call"] == 72
        assert [row["l"] for row in report["cycle_table"]] == [256, 512, 1024, 2048]

    def test_bench_modmult_small_radix(self, tmp_path):
        out = tmp_path / "modmult.json"
        assert main(["bench-modmult", "--bits", "64", "--word-size", "8", "--iters", "3",
                     "--json-out", str(out)]) == EXIT_OK
        assert _read_json(out)["software"]["inner_iterations_per_call"] == 8 * 9

    @pytest.mark.parametrize("args", [
        ["--iters", "0"],
        ["--word-size", "12"],
        ["--bits", "100"],
    ])
    def test_bench_modmult_rejects(self, args):
        assert main(["bench-modmult", "--bits", "256", *args]) == EXIT_VALIDATION

    def test_bench_paillier(self, tmp_path):
        out = tmp_path / "paillier.json"
        assert main(["bench-paillier", "--bits", "64", "--items", "4", "--workers", "1,2",
                     "--batch-size", "2", "--json-out", str(out)]) == EXIT_OK
        report = _read_json(out)
        assert report["results_identical_across_workers"] is True
        assert [row["workers"] for row in report["software"]] == [1, 2]
        assert report["model"]["exact"] is False
        assert report["model"]["cores"] == 305
        assert report["modeled_acceleration"]["encrypt"] > 0

    def test_bench_paillier_bad_workers(self):
        assert main(["bench-paillier", "--bits", "64", "--workers", "two"]) == EXIT_VALIDATION


class TestModelReport:

    def test_default(self, tmp_path, capsys):
        out = tmp_path / "model.json"
        assert main(["model-report", "--json-out", str(out)]) == EXIT_OK
        report = _read_json(out)
        assert report["resources"]["dsp_per_core"] == 9
        assert report["throughput"]["throughput_per_dsp"] == pytest.approx(12626, rel=0.02)
        assert "Comparison with reference ModMult cores" in capsys.readouterr().out

    def test_zero_dsp_budget(self):
        assert main(["model-report", "--total-dsp", "0"]) == EXIT_VALIDATION

    def test_dsp_override_changes_core_count(self, tmp_path):
        out = tmp_path / "model.json"
        assert main(["model-report", "--total-dsp", "900", "--json-out", str(out)]) == EXIT_OK
        throughput = _read_json(out)["throughput"]
        assert throughput["cores"] == 100
        assert throughput["binding_constraint"] == "dsp"

    def test_yaml_config(self, tmp_path):
        config = tmp_path / "hw.yaml"
        config.write_text("core:\n  l: 1024\n  k: 32\noperating_point:\n  cycles: 1100\n")
        out = tmp_path / "model.json"
        assert main(["model-report", "--config", str(config), "--json-out", str(out)]) == EXIT_OK
        report = _read_json(out)
        assert report["schedule"]["ideal_cycles"] == 1056
        assert report["throughput"]["cycles_per_op"] == 1100

    def test_bad_config(self, tmp_path):
        config = tmp_path / "hw.yaml"
        config.write_text("core:\n  l: 1000\n  k: 32\n")
        assert main(["model-report", "--config", str(config)]) == EXIT_VALIDATION


class TestTrainDemo:

    def test_missing_dataset(self, tmp_path):
        code = main(["train-demo", "--dataset", str(tmp_path / "absent.csv"), "--iters", "1"])
        assert code != EXIT_OK

    def test_zero_iterations(self, capsys):
        code = main(["train-demo", "--iters", "0", "--key-bits", "64", "--samples", "10", "--features", "2"])
        assert code == EXIT_OK
        lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("{")]
        assert len(lines) == 1
        assert json.loads(lines[0])["iteration"] == 0

    def test_csv_dataset_with_trace_file(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("a,b,y\n1,0,1\n0,1,2\n1,1,3\n2,1,4\n")
        trace = tmp_path / "trace.jsonl"
        out = tmp_path / "train.json"
        code = main(["train-demo", "--dataset", str(data), "--iters", "2", "--key-bits", "64",
                     "--trace-out", str(trace), "--json-out", str(out)])
        assert code == EXIT_OK
        assert len(trace.read_text().splitlines()) == 3
        summary = _read_json(out)
        assert summary["validation"]["is_valid"] is True
        assert summary["losses"][0] is None


class TestSeeding:

    def test_seed_defaults_to_none(self):
        args = build_parser().parse_args(["keygen", "--out", "k.json"])
        assert args.seed is None
        assert args.bits == DEFAULT_CONFIG["paillier"]["key_bits"]

    def test_unseeded_keygen_differs(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["keygen", "--bits", "64", "--out", str(first)]) == EXIT_OK
        assert main(["keygen", "--bits", "64", "--out", str(second)]) == EXIT_OK
        assert _read_json(first)["public"] != _read_json(second)["public"]

    def test_seeded_keygen_repeats(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["keygen", "--bits", "64", "--out", str(first), "--seed", "7"]) == EXIT_OK
        assert main(["keygen", "--bits", "64", "--out", str(second), "--seed", "7"]) == EXIT_OK
        for part in ("public", "private"):
            assert _read_json(first)[part] == _read_json(second)[part]

    def test_unseeded_encrypt_is_randomized(self, tmp_path):
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "64", "--out", str(key), "--seed", "3"]) == EXIT_OK
        source = tmp_path / "same.txt"
        source.write_bytes(b"same plaintext every time")
        sealed = [tmp_path / f"run{index}.enc.json" for index in range(4)]
        for out in sealed[:2]:
            assert main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(out)]) == EXIT_OK
        for out in sealed[2:]:
            assert main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(out),
                         "--seed", "9"]) == EXIT_OK

        assert _read_json(sealed[0])["ciphertexts"] != _read_json(sealed[1])["ciphertexts"]
        assert sealed[2].read_bytes() == sealed[3].read_bytes()
        for out in sealed:
            restored = out.with_suffix(".out")
            assert main(["decrypt", "--key", str(key), "--in", str(out), "--out", str(restored)]) == EXIT_OK
            assert restored.read_bytes() == source.read_bytes()

    @pytest.mark.parametrize("command", [
        ["bench-modmult", "--bits", "256", "--iters", "3"],
        ["bench-paillier", "--bits", "64", "--items", "4", "--workers", "1,2", "--batch-size", "2"],
        ["train-demo", "--iters", "2", "--key-bits", "64", "--samples", "12", "--features", "2"],
    ])
    def test_explicit_seed_reproduces_report(self, tmp_path, command):
        reports = []
        for run in ("first", "second"):
            out = tmp_path / f"{run}.json"
            assert main([*command, "--seed", "7", "--json-out", str(out)]) == EXIT_OK
            reports.append(json.dumps(_without_timing(_read_json(out)), sort_keys=True).encode("utf-8"))
        assert reports[0] == reports[1]

    def test_unseeded_report_records_drawn_seed(self, tmp_path):
        out = tmp_path / "modmult.json"
        assert main(["bench-modmult", "--bits", "64", "--word-size", "8", "--iters", "1",
                     "--json-out", str(out)]) == EXIT_OK
        assert isinstance(_read_json(out)["seed"], int)


class TestEngineSettings:

    def _encrypt_args(self, *extra):
        return build_parser().parse_args(["encrypt", "--key", "k.json", "--in", "a", "--out", "b", *extra])

    def test_built_in_defaults(self):
        config = engine_config(self._encrypt_args())
        assert config.workers == DEFAULT_CONFIG["engine"]["workers"]
        assert config.batch_size == DEFAULT_CONFIG["engine"]["batch_size"]
        assert config.seed is None

    def test_file_then_env_then_flags(self, tmp_path, monkeypatch):
        settings = tmp_path / "engine.yaml"
        settings.write_text("engine:\n  workers: 3\n  batch_size: 64\n  ring_slots: 4\n")

        config = engine_config(self._encrypt_args("--engine-config", str(settings)))
        assert (config.workers, config.batch_size, config.ring_slots) == (3, 64, 4)

        monkeypatch.setenv("PAILLIER_ENGINE_WORKERS", "5")
        monkeypatch.setenv("PAILLIER_ENGINE_RING_SLOTS", "6")
        config = engine_config(self._encrypt_args("--engine-config", str(settings)))
        assert (config.workers, config.batch_size, config.ring_slots) == (5, 64, 6)

        config = engine_config(self._encrypt_args("--engine-config", str(settings), "--workers", "2",
                                                  "--batch-size", "8", "--seed", "11"))
        assert (config.workers, config.batch_size, config.ring_slots, config.seed) == (2, 8, 6, 11)

    def test_env_reaches_encrypt(self, tmp_path, monkeypatch):
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "64", "--out", str(key), "--seed", "3"]) == EXIT_OK
        source = tmp_path / "a.bin"
        source.write_bytes(b"x" * 40)
        monkeypatch.setenv("PAILLIER_ENGINE_BATCH_SIZE", "0")
        code = main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(tmp_path / "a.json")])
        assert code == EXIT_VALIDATION

    def test_unknown_file_setting(self, tmp_path):
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "64", "--out", str(key), "--seed", "3"]) == EXIT_OK
        source = tmp_path / "a.bin"
        source.write_bytes(b"abc")
        settings = tmp_path / "engine.json"
        settings.write_text(json.dumps({"workers": 2, "threads": 8}))
        code = main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(tmp_path / "a.json"),
                     "--engine-config", str(settings)])
        assert code == EXIT_VALIDATION


class TestLogging:

    def test_bare_log_file_goes_to_log_dir(self, tmp_path, monkeypatch):
        monkeypatch.setitem(DEFAULT_CONFIG["logging"], "log_dir", str(tmp_path / "logs"))
        assert main(["model-report", "--log-file", "run.log"]) == EXIT_OK
        assert (tmp_path / "logs" / "run.log").exists()

    def test_log_file_with_directory_is_kept(self, tmp_path):
        target = tmp_path / "elsewhere" / "run.log"
        assert main(["model-report", "--log-file", str(target)]) == EXIT_OK
        assert target.exists()


class TestConfigWiring:

    def test_karatsuba_threshold_from_config(self, monkeypatch):
        monkeypatch.setattr(bigint, "_karatsuba_threshold", bigint.get_karatsuba_threshold())
        monkeypatch.setitem(DEFAULT_CONFIG["arith"], "karatsuba_threshold", 3)
        assert main(["model-report"]) == EXIT_OK
        assert bigint.get_karatsuba_threshold() == 3

    def test_prime_attempt_limit_from_config(self, tmp_path, monkeypatch):
        monkeypatch.setitem(DEFAULT_CONFIG["paillier"], "max_prime_attempts", 1)
        code = main(["keygen", "--bits", "256", "--out", str(tmp_path / "k.json"), "--seed", "3"])
        assert code == EXIT_RUNTIME
        assert not (tmp_path / "k.json").exists()

    def test_fast_generator_power_from_config(self, tmp_path, monkeypatch):
        monkeypatch.setitem(DEFAULT_CONFIG["engine"], "fast_generator_power", True)
        args = build_parser().parse_args(["encrypt", "--key", "k.json", "--in", "a", "--out", "b"])
        assert engine_config(args).fast_generator_power is True
        key = tmp_path / "k.json"
        assert main(["keygen", "--bits", "64", "--out", str(key), "--seed", "3"]) == EXIT_OK
        source = tmp_path / "a.bin"
        source.write_bytes(b"generator shortcut")
        sealed = tmp_path / "a.enc.json"
        restored = tmp_path / "a.out"
        assert main(["encrypt", "--key", str(key), "--in", str(source), "--out", str(sealed)]) == EXIT_OK
        assert main(["decrypt", "--key", str(key), "--in", str(sealed), "--out", str(restored)]) == EXIT_OK
        assert restored.read_bytes() == source.read_bytes()
