"""Paillier Accelerator Toolkit - Main Entry Point."""

import argparse
import json
import random
import secrets
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from loguru import logger

from config.default_config import DEFAULT_CONFIG
from paillier_accel import __version__
from paillier_accel.arith.bigint import SUPPORTED_WORD_BITS, from_bytes, from_int, random_below, set_karatsuba_threshold
from paillier_accel.arith.montgomery import OpCounter, context_new, mont_mul
from paillier_accel.crypto.keyfile import KeyFile, load_ciphertexts, save_ciphertexts
from paillier_accel.crypto.paillier import keygen
from paillier_accel.engine.batch_engine import Engine, OperationKind
from paillier_accel.engine.batch_runner import BatchRunner
from paillier_accel.engine.engine_config import EngineConfig, engine_config_from_dict, load_engine_config
from paillier_accel.hardware.hardware_config import hardware_config_from_dict, load_hardware_config
from paillier_accel.hardware.pipeline_model import CoreConfig, cycle_table, simulate_schedule
from paillier_accel.hardware.report import build_model_report, render_model_report
from paillier_accel.hardware.resources import (
    ResourceBudget,
    chip_throughput,
    core_resources,
    modeled_acceleration,
    paillier_op_model,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class CliArgumentParser(argparse.ArgumentParser):
    """Argument errors exit with the validation code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def setup_logging(level: str, log_file: Optional[str] = None) -> None:
    settings = DEFAULT_CONFIG["logging"]
    logger.remove()
    logger.add(sys.stderr, level=level, format=settings["format"])
    log_file = log_file or settings["log_file"]
    if log_file:
        log_path = Path(log_file)
        if log_path.parent == Path("."):
            log_path = Path(settings["log_dir"]) / log_path
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_path, level=level, format=settings["format"],
                   rotation=settings["rotation"], retention=settings["retention"])


def write_json(document: Dict[str, Any], path: Optional[str]) -> None:
    if not path:
        return
    out = Path(path)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2, sort_keys=True, default=str)
        logger.info(f"Report written: {out}")
    except OSError as e:
        logger.error(f"Failed to write report {out}: {e}")
        raise


def print_table(title: str, rows: List[Dict[str, Any]]) -> None:
    print(title)
    print(pd.DataFrame(rows).to_string(index=False))
    print()


def run_seed(args) -> int:
    """The --seed value, or a fresh one from ``secrets`` when none was given."""
    if args.seed is None:
        args.seed = secrets.randbits(64)
        logger.debug(f"Drew run seed {args.seed}")
    return args.seed


def engine_config(args) -> EngineConfig:
    """Defaults, then --engine-config, then PAILLIER_ENGINE_*, then explicit flags."""
    if args.engine_config:
        base = load_engine_config(args.engine_config)
    else:
        base = engine_config_from_dict(dict(DEFAULT_CONFIG["engine"]))
    flags = {"workers": args.workers, "batch_size": args.batch_size, "seed": args.seed}
    return replace(base.with_env(), **{name: value for name, value in flags.items() if value is not None})


# keygen / encrypt / decrypt

def cmd_keygen(args) -> int:
    settings = DEFAULT_CONFIG["paillier"]
    if args.seed is None:
        rng = secrets.SystemRandom()
    else:
        logger.warning(f"Seeded key generation (--seed {args.seed}) is reproducible; do not use these keys for real data")
        rng = random.Random(args.seed)
    started = time.perf_counter()
    pk, sk = keygen(args.bits, rng, rounds=settings["miller_rabin_rounds"],
                    max_prime_attempts=settings["max_prime_attempts"])
    elapsed = time.perf_counter() - started

    out = Path(args.out)
    KeyFile(out).save(pk, sk)
    public_out = Path(args.public_out) if args.public_out else out.with_name(f"{out.stem}.pub{out.suffix or '.json'}")
    KeyFile(public_out).save(pk)

    print(f"Key: {pk.bit_length}-bit n written to {out} (public part: {public_out})")
    write_json({"key_bits": pk.bit_length, "key_file": str(out), "public_key_file": str(public_out),
                "seconds": elapsed}, args.json_out)
    return EXIT_OK


def _chunk_bytes(pk) -> int:
    """Largest chunk whose value is always below n."""
    return max(1, (pk.n.bit_length() - 1) // 8)


def cmd_encrypt(args) -> int:
    key = KeyFile(args.key).load(validate=False)
    pk = key.public_key
    source = Path(args.input)
    data = source.read_bytes()
    chunk = _chunk_bytes(pk)
    plaintexts = [from_bytes(data[start:start + chunk], pk.n.word_bits) for start in range(0, len(data), chunk)]

    with Engine(pk, None, config=engine_config(args)) as engine:
        ciphertexts = BatchRunner(engine, prefix="file", summary=False).run_sync(OperationKind.ENCRYPT, plaintexts)

    save_ciphertexts(args.out, ciphertexts, metadata={
        "source": source.name,
        "length": len(data),
        "chunk_bytes": chunk,
        "key_bits": pk.bit_length,
    })
    print(f"Encrypted {len(data)} bytes as {len(ciphertexts)} ciphertexts into {args.out}")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = KeyFile(args.key).load(require_private=True)
    ciphertexts, metadata = load_ciphertexts(args.input)
    try:
        length = int(metadata["length"])
        chunk = int(metadata["chunk_bytes"])
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"Ciphertext file {args.input} lacks chunk metadata: {e}") from e
    if len(ciphertexts) != -(-length // chunk):
        raise ValueError(f"Expected {-(-length // chunk)} ciphertexts for {length} bytes, found {len(ciphertexts)}")

    with Engine(key.public_key, key.private_key, config=engine_config(args)) as engine:
        decoded = BatchRunner(engine, prefix="file", summary=False).run_sync(OperationKind.DECRYPT, ciphertexts)

    parts = []
    for index, encoded in enumerate(decoded):
        size = min(chunk, length - index * chunk)
        parts.append(encoded.mantissa.to_bytes(size))
    Path(args.out).write_bytes(b"".join(parts))
    print(f"Decrypted {length} bytes into {args.out}")
    return EXIT_OK


# benchmarks

def cmd_bench_modmult(args) -> int:
    if args.iters < 1:
        raise ValueError(f"--iters must be at least 1, got {args.iters}")
    if args.word_size not in SUPPORTED_WORD_BITS:
        raise ValueError(f"--word-size must be one of {SUPPORTED_WORD_BITS}, got {args.word_size}")
    if args.bits < 2 * args.word_size or args.bits % args.word_size:
        raise ValueError(f"--bits must be a multiple of --word-size of at least two words, got {args.bits}")

    rng = random.Random(run_seed(args))
    modulus = from_int(rng.getrandbits(args.bits) | (1 << (args.bits - 1)) | 1, args.word_size)
    ctx = context_new(modulus, args.word_size)
    x, y = random_below(rng, modulus), random_below(rng, modulus)
    counter = OpCounter()
    started = time.perf_counter()
    for _ in range(args.iters):
        x = mont_mul(ctx, x, y, counter)
    elapsed = time.perf_counter() - started

    words = args.bits // args.word_size
    schedule = simulate_schedule(CoreConfig(l=args.bits, k=args.word_size, strict=False))
    sizes = [s for s in (256, 512, 1024, 2048) if s % args.word_size == 0]
    table = cycle_table(sizes, k=args.word_size, base=CoreConfig(k=args.word_size, strict=False))

    report = {
        "bits": args.bits,
        "word_size": args.word_size,
        "iters": args.iters,
        "seed": args.seed,
        "software": {
            "seconds": elapsed,
            "ops_per_second": args.iters / elapsed if elapsed > 0 else 0.0,
            "inner_iterations_per_call": counter.inner_iterations // args.iters,
            "expected_inner_iterations": words * (words + 1),
        },
        "ideal_cycles": schedule.ideal_cycles,
        "simulated_cycles": schedule.simulated_cycles,
        "overhead_ratio": schedule.overhead_ratio,
        "schedule": schedule.model_dump(exclude={"q_ready_cycles", "q_needed_cycles"}),
        "cycle_table": table,
    }

    print_table(f"ModMult {args.bits}-bit, radix 2^{args.word_size}", [
        {"metric": "software ModMult op/s", "value": round(report["software"]["ops_per_second"], 1)},
        {"metric": "inner iterations per call", "value": report["software"]["inner_iterations_per_call"]},
        {"metric": "ideal cycles", "value": schedule.ideal_cycles},
        {"metric": "simulated cycles", "value": schedule.simulated_cycles},
        {"metric": "overhead ratio", "value": round(schedule.overhead_ratio, 4)},
    ])
    print_table("Cycles per operand size", table)
    write_json(report, args.json_out)
    return EXIT_OK


def _parse_workers(text: str) -> List[int]:
    try:
        workers = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"--workers must be a comma-separated list of integers, got {text!r}") from e
    if not workers or any(w < 1 for w in workers):
        raise ValueError(f"--workers needs positive worker counts, got {text!r}")
    return workers


def cmd_bench_paillier(args) -> int:
    if args.items < 1:
        raise ValueError(f"--items must be at least 1, got {args.items}")
    worker_counts = _parse_workers(args.workers)
    rng = random.Random(run_seed(args))
    pk, sk = keygen(args.bits, rng, rounds=DEFAULT_CONFIG["paillier"]["miller_rabin_rounds"],
                    max_prime_attempts=DEFAULT_CONFIG["paillier"]["max_prime_attempts"])
    engine_defaults = engine_config_from_dict(dict(DEFAULT_CONFIG["engine"])).with_env()
    plaintexts = [random_below(rng, pk.n) for _ in range(args.items)]

    rows = []
    reference = None
    consistent = True
    for workers in worker_counts:
        with Engine(pk, sk, config=replace(engine_defaults, workers=workers, batch_size=args.batch_size,
                                           seed=args.seed)) as engine:
            runner = BatchRunner(engine, prefix="bench", summary=False)
            started = time.perf_counter()
            ciphertexts = runner.run_sync(OperationKind.ENCRYPT, plaintexts)
            encrypt_seconds = time.perf_counter() - started
            started = time.perf_counter()
            decoded = runner.run_sync(OperationKind.DECRYPT, ciphertexts)
            decrypt_seconds = time.perf_counter() - started

        if any(d.mantissa != m for d, m in zip(decoded, plaintexts)):
            raise RuntimeError(f"Decryption mismatch with {workers} workers")
        values = [c.value for c in ciphertexts]
        if reference is None:
            reference = values
        elif values != reference:
            consistent = False
        rows.append({
            "workers": workers,
            "encrypt_ops_per_second": args.items / encrypt_seconds,
            "decrypt_ops_per_second": args.items / decrypt_seconds,
        })

    hw = hardware_config_from_dict(DEFAULT_CONFIG["hardware"])
    core = replace(hw.core, strict=False)
    model = core_resources(core, hw.budget, hw.lut_per_core)
    cycles, _ = hw.cycles_per_op()
    cores = chip_throughput(model, core, cycles).cores
    estimate = paillier_op_model(args.bits, core, public_n=pk.n, lam=sk.lam)
    chip_encrypt = cores / estimate.encrypt_seconds
    chip_decrypt = cores / estimate.decrypt_seconds
    best_encrypt = max(r["encrypt_ops_per_second"] for r in rows)
    best_decrypt = max(r["decrypt_ops_per_second"] for r in rows)

    report = {
        "bits": args.bits,
        "items": args.items,
        "seed": args.seed,
        "software": rows,
        "results_identical_across_workers": consistent,
        "model": {
            **estimate.model_dump(),
            "cores": cores,
            "chip_encrypt_ops_per_second": chip_encrypt,
            "chip_decrypt_ops_per_second": chip_decrypt,
        },
        "modeled_acceleration": {
            "encrypt": modeled_acceleration(best_encrypt, chip_encrypt),
            "decrypt": modeled_acceleration(best_decrypt, chip_decrypt),
        },
    }

    print_table(f"Software Paillier, {args.bits}-bit key, {args.items} items", [
        {k: (round(v, 2) if isinstance(v, float) else v) for k, v in row.items()} for row in rows])
    print_table("Modeled accelerator", [
        {"metric": "cores on chip", "value": cores},
        {"metric": "encryptions/s", "value": round(chip_encrypt, 1)},
        {"metric": "decryptions/s", "value": round(chip_decrypt, 1)},
        {"metric": "encrypt acceleration", "value": round(report["modeled_acceleration"]["encrypt"], 2)},
        {"metric": "decrypt acceleration", "value": round(report["modeled_acceleration"]["decrypt"], 2)},
    ])
    write_json(report, args.json_out)
    return EXIT_OK if consistent else EXIT_RUNTIME


# model report

def cmd_model_report(args) -> int:
    hw = load_hardware_config(args.config) if args.config else hardware_config_from_dict(DEFAULT_CONFIG["hardware"])
    if args.total_dsp is not None or args.total_lut is not None:
        hw = replace(hw, budget=ResourceBudget(
            total_dsp=hw.budget.total_dsp if args.total_dsp is None else args.total_dsp,
            total_lut=hw.budget.total_lut if args.total_lut is None else args.total_lut,
        ))
    report = build_model_report(hw)
    print(render_model_report(report))
    write_json(report, args.json_out)
    return EXIT_OK


# federated demo

def cmd_train_demo(args) -> int:
    from paillier_accel.fedsim import FederatedTrainer, TrainConfig, TrajectoryValidator, load_csv, make_synthetic

    if args.iters < 0:
        raise ValueError(f"--iters must be non-negative, got {args.iters}")
    defaults = DEFAULT_CONFIG["training"]
    engine_cfg = engine_config(args)
    seed = run_seed(args) if engine_cfg.seed is None else engine_cfg.seed
    cfg = TrainConfig(
        model=args.model,
        learning_rate=args.lr if args.lr is not None else defaults["learning_rate"],
        iterations=args.iters,
        key_bits=args.key_bits or defaults["key_bits"],
        precision_exponent=defaults["precision_exponent"],
        parties=args.parties or defaults["parties"],
        seed=seed,
        workers=engine_cfg.workers,
        batch_size=engine_cfg.batch_size,
        ring_slots=engine_cfg.ring_slots,
        fast_generator_power=engine_cfg.fast_generator_power,
    )
    if args.dataset == "synthetic":
        dataset = make_synthetic(samples=args.samples or defaults["samples"],
                                 features=args.features or defaults["features"],
                                 task=args.model, seed=seed)
    else:
        dataset = load_csv(args.dataset)

    with FederatedTrainer(dataset, cfg) as trainer:
        encrypted, reference = trainer.run()
    validation = TrajectoryValidator(tolerance=args.tolerance).validate(encrypted, reference)

    if args.trace_out:
        encrypted.to_jsonl(args.trace_out)
    else:
        for line in encrypted.to_jsonl_lines():
            print(line)
    write_json({
        "config": cfg.to_dict(),
        "dataset": {"name": dataset.name, "samples": dataset.samples, "features": dataset.features},
        "final_weights": encrypted.final_weights.tolist(),
        "reference_weights": reference.final_weights.tolist(),
        "losses": encrypted.losses,
        "validation": {k: v for k, v in validation.items() if k != "details"},
    }, args.json_out)

    if not validation["is_valid"]:
        logger.error(f"Convergence check failed: {validation['error_message']}")
        return EXIT_RUNTIME
    logger.success(f"Encrypted weights match the plaintext reference (max diff {validation['max_abs_diff']:.3e})")
    return EXIT_OK


def build_parser() -> CliArgumentParser:
    common = CliArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_CONFIG["engine"]["seed"],
                        help="Seed for every random choice; reproducible and insecure (default: fresh from secrets)")
    common.add_argument("--log-level", default=DEFAULT_CONFIG["logging"]["level"],
                        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR"],
                        help="Log level for stderr")
    common.add_argument("--log-file", help="Also log to this rotating file")
    common.add_argument("--json-out", help="Write the machine-readable report here")

    engine_args = CliArgumentParser(add_help=False)
    engine_args.add_argument("--engine-config", help="Engine settings file (JSON or YAML)")
    engine_args.add_argument("--workers", type=int,
                             help=f"Engine worker threads (default: {DEFAULT_CONFIG['engine']['workers']})")
    engine_args.add_argument("--batch-size", type=int,
                             help=f"Items per engine batch (default: {DEFAULT_CONFIG['engine']['batch_size']})")

    parser = CliArgumentParser(
        description="Paillier Accelerator Toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py keygen --bits 1024 --out keys/demo.json
  python main.py encrypt --key keys/demo.json --in notes.txt --out notes.enc.json
  python main.py decrypt --key keys/demo.json --in notes.enc.json --out notes.txt
  python main.py bench-modmult --bits 1024 --word-size 32 --iters 200
  python main.py bench-paillier --bits 512 --items 256 --workers 1,2,4
  python main.py model-report --config hardware.yaml --json-out report.json
  python main.py train-demo --model logistic --dataset synthetic --iters 10
        """,
    )
    parser.add_argument("--version", action="version", version=f"Paillier Accelerator Toolkit {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command")

    keygen_parser = subparsers.add_parser("keygen", parents=[common], help="Generate a keypair")
    keygen_parser.add_argument("--bits", type=int, default=DEFAULT_CONFIG["paillier"]["key_bits"],
                               help="Bit length of n (even, >= 16)")
    keygen_parser.add_argument("--out", required=True, help="Keypair file")
    keygen_parser.add_argument("--public-out", help="Public key file (default: <out>.pub.json)")
    keygen_parser.set_defaults(handler=cmd_keygen)

    encrypt_parser = subparsers.add_parser("encrypt", parents=[common, engine_args], help="Encrypt a file")
    encrypt_parser.add_argument("--key", required=True, help="Key file (public part is enough)")
    encrypt_parser.add_argument("--in", dest="input", required=True, help="File to encrypt")
    encrypt_parser.add_argument("--out", required=True, help="Ciphertext file")
    encrypt_parser.set_defaults(handler=cmd_encrypt)

    decrypt_parser = subparsers.add_parser("decrypt", parents=[common, engine_args], help="Decrypt a file")
    decrypt_parser.add_argument("--key", required=True, help="Keypair file")
    decrypt_parser.add_argument("--in", dest="input", required=True, help="Ciphertext file")
    decrypt_parser.add_argument("--out", required=True, help="Recovered file")
    decrypt_parser.set_defaults(handler=cmd_decrypt)

    modmult_parser = subparsers.add_parser("bench-modmult", parents=[common],
                                           help="Software ModMult rate and the cycle model")
    modmult_parser.add_argument("--bits", type=int, default=1024, help="Operand width l")
    modmult_parser.add_argument("--word-size", type=int, default=DEFAULT_CONFIG["arith"]["word_bits"],
                                help="Radix width k")
    modmult_parser.add_argument("--iters", type=int, default=100, help="Timed mont_mul calls")
    modmult_parser.set_defaults(handler=cmd_bench_modmult)

    paillier_parser = subparsers.add_parser("bench-paillier", parents=[common],
                                            help="Software en/decryption rate per worker count")
    paillier_parser.add_argument("--bits", type=int, default=512, help="Key size")
    paillier_parser.add_argument("--items", type=int, default=64, help="Plaintexts per run")
    paillier_parser.add_argument("--workers", default="1,2,4", help="Comma-separated worker counts")
    paillier_parser.add_argument("--batch-size", type=int, default=16, help="Items per engine batch")
    paillier_parser.set_defaults(handler=cmd_bench_paillier)

    report_parser = subparsers.add_parser("model-report", parents=[common],
                                          help="Schedule, resources and throughput of the ModMult core")
    report_parser.add_argument("--config", help="Hardware configuration (JSON or YAML); built-in default if omitted")
    report_parser.add_argument("--total-dsp", type=int, help="Override the DSP budget")
    report_parser.add_argument("--total-lut", type=int, help="Override the area budget")
    report_parser.set_defaults(handler=cmd_model_report)

    train_parser = subparsers.add_parser("train-demo", parents=[common, engine_args],
                                         help="Encrypted vertical federated training")
    train_parser.add_argument("--model", choices=["linear", "logistic"], default=DEFAULT_CONFIG["training"]["model"])
    train_parser.add_argument("--dataset", default="synthetic", help="CSV path or 'synthetic'")
    train_parser.add_argument("--iters", type=int, default=DEFAULT_CONFIG["training"]["iterations"])
    train_parser.add_argument("--lr", type=float, help="Learning rate")
    train_parser.add_argument("--key-bits", type=int, help="Paillier key size")
    train_parser.add_argument("--parties", type=int, help="Number of parties")
    train_parser.add_argument("--samples", type=int, help="Synthetic samples")
    train_parser.add_argument("--features", type=int, help="Synthetic features")
    train_parser.add_argument("--tolerance", type=float, default=1e-6,
                              help="Max weight difference from the plaintext reference")
    train_parser.add_argument("--trace-out", help="Write the JSON-lines trace here instead of stdout")
    train_parser.set_defaults(handler=cmd_train_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION

    setup_logging(args.log_level, args.log_file)
    set_karatsuba_threshold(DEFAULT_CONFIG["arith"]["karatsuba_threshold"])
    try:
        return args.handler(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return 130
    except ValueError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
