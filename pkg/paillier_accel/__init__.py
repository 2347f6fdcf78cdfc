"""
Paillier Accelerator Toolkit

Word-level Montgomery arithmetic, a Paillier library, a cycle and resource
model of a pipelined ModMult core, a batched engine and a federated
training demo built on top.
"""

__version__ = "0.1.0"

from .arith import BigUint, MontgomeryContext, OpCounter, context_new, mod_exp, mont_mul
from .crypto import (
    Ciphertext,
    EncodedNumber,
    KeyFile,
    PrivateKey,
    PublicKey,
    add_cipher,
    decode,
    decrypt,
    encode,
    encrypt,
    keygen,
    keypair_from_primes,
    rerandomize,
    scalar_mul,
)
from .engine import BatchRequest, BatchRunner, Engine, EngineConfig, OperationKind, QueueStats
from .hardware import CoreConfig, HardwareConfig, chip_throughput, core_resources, simulate_schedule

__all__ = [
    "BigUint",
    "MontgomeryContext",
    "OpCounter",
    "context_new",
    "mod_exp",
    "mont_mul",
    "Ciphertext",
    "EncodedNumber",
    "KeyFile",
    "PrivateKey",
    "PublicKey",
    "add_cipher",
    "decode",
    "decrypt",
    "encode",
    "encrypt",
    "keygen",
    "keypair_from_primes",
    "rerandomize",
    "scalar_mul",
    "BatchRequest",
    "BatchRunner",
    "Engine",
    "EngineConfig",
    "OperationKind",
    "QueueStats",
    "CoreConfig",
    "HardwareConfig",
    "chip_throughput",
    "core_resources",
    "simulate_schedule",
]

# Federated training needs numpy
try:
    from .fedsim import FederatedTrainer, TrainConfig, TrainingTrace, plaintext_reference, train

    __all__ += ["FederatedTrainer", "TrainConfig", "TrainingTrace", "plaintext_reference", "train"]
except ImportError:
    pass
