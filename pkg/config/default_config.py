"""Default configuration for the Paillier accelerator toolkit"""

from typing import Dict, Any

DEFAULT_CONFIG: Dict[str, Any] = {
    # Big-integer arithmetic
    "arith": {
        "word_bits": 32,
        "karatsuba_threshold": 1,  # words
    },

    # Cryptosystem
    "paillier": {
        "key_bits": 1024,
        "miller_rabin_rounds": 40,
        "max_prime_attempts": None,  # None = 100 * prime bits
    },

    # Batched engine (PAILLIER_ENGINE_* environment variables override)
    "engine": {
        "workers": 1,
        "batch_size": 1024,
        "ring_slots": 2,
        "seed": None,  # None = drawn from secrets per run
        "fast_generator_power": False,
    },

    # ModMult core and chip model
    "hardware": {
        "key_bits": 1024,
        "core": {
            "l": 2048,
            "k": 32,
            "mult_latency": 4,
            "q_latency": None,
            "io_mode": "streamed",
            "io_overhead_cycles": None,
            "clock_mhz": 500.0,
            "dsp_native_bits": 16,
        },
        "budget": {
            "total_dsp": 6840,
            "total_lut": 147780,  # slices
        },
        "lut_per_core": 483,
        # measured ModMult latency; overrides the simulated cycle count when set
        "operating_point": {"execution_us": 8.81},
        "reference_designs": [
            {"name": "rtl-13dsp", "dsp": 13, "execution_us": 8.64, "clock_mhz": 490.0},
            {"name": "single-dsp", "dsp": 1, "execution_us": 135.4, "clock_mhz": 447.0},
            {"name": "lut-only", "dsp": 0, "execution_us": 18.70, "clock_mhz": 129.0},
        ],
    },

    # Federated training demo
    "training": {
        "model": "linear",
        "learning_rate": 0.1,
        "iterations": 10,
        "key_bits": 256,
        "precision_exponent": -8,
        "parties": 2,
        "samples": 200,
        "features": 8,
    },

    # Logging settings
    "logging": {
        "level": "INFO",
        "log_dir": "logs",  # parent of bare --log-file names
        "log_file": None,  # set to enable the rotating file sink
        "rotation": "10 MB",
        "retention": "7 days",
        "format": "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}",
    },
}
