"""Shared fixtures: deterministic RNGs and small Paillier keys."""

import random

import pytest
from loguru import logger

from paillier_accel.arith.bigint import from_int
from paillier_accel.crypto.paillier import keygen, keypair_from_primes


@pytest.fixture(autouse=True)
def quiet_logs():
    """Route loguru into a null sink; CLI tests may replace it via setup_logging."""
    logger.remove()
    logger.add(lambda message: None, level="WARNING")
    yield
    logger.remove()


@pytest.fixture(autouse=True)
def clean_engine_env(monkeypatch):
    """Engines and the CLI read PAILLIER_ENGINE_*; start every test without them."""
    for name in ("WORKERS", "BATCH_SIZE", "RING_SLOTS", "SEED"):
        monkeypatch.delenv(f"PAILLIER_ENGINE_{name}", raising=False)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def toy_keypair():
    """p = 5, q = 7: n = 35, n² = 1225, λ = 12."""
    return keypair_from_primes(from_int(5), from_int(7))


@pytest.fixture(scope="session")
def small_keypair():
    return keygen(64, random.Random(7))


@pytest.fixture(scope="session")
def medium_keypair():
    return keygen(128, random.Random(11))
