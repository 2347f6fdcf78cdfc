"""Encrypted vertical federated training and its plaintext reference."""

import json
import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel

from paillier_accel.crypto.paillier import keygen
from paillier_accel.engine.batch_engine import Engine
from paillier_accel.errors import EncodingOverflowError
from paillier_accel.fedsim.coordinator import Coordinator
from paillier_accel.fedsim.datasets import Dataset, split_vertical
from paillier_accel.fedsim.gradients import MODELS, loss_from_residual, residual
from paillier_accel.fedsim.party import Party

PHASES = ("encrypt", "aggregate", "decrypt", "local")


@dataclass
class TrainConfig:
    """Training run settings."""
    model: str = "linear"
    learning_rate: float = 0.1
    iterations: int = 10
    key_bits: int = 256
    precision_exponent: int = -8
    parties: int = 2
    seed: int = 0
    workers: int = 1
    batch_size: int = 1024
    ring_slots: int = 2
    fast_generator_power: bool = False

    def __post_init__(self):
        """Validate training settings."""
        if self.model not in MODELS:
            raise ValueError(f"Unknown model {self.model!r}; expected one of {MODELS}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.iterations < 0:
            raise ValueError(f"iterations must be non-negative, got {self.iterations}")
        if self.parties < 1:
            raise ValueError(f"parties must be at least 1, got {self.parties}")
        if self.key_bits < 16 or self.key_bits % 2:
            raise ValueError(f"key_bits must be an even number >= 16, got {self.key_bits}")

    def to_dict(self) -> Dict:
        return asdict(self)


class IterationRecord(BaseModel):
    """State after one iteration; iteration 0 is the initial model."""
    iteration: int
    loss: Optional[float] = None
    weights: List[float]
    timings_ms: Dict[str, float] = {}
    total_ms: float = 0.0

    @property
    def encrypt_share(self) -> float:
        """Fraction of the iteration spent encrypting."""
        return self.timings_ms.get("encrypt", 0.0) / self.total_ms if self.total_ms > 0 else 0.0

    @property
    def segment_sum_ms(self) -> float:
        return sum(self.timings_ms.values())


@dataclass
class TrainingTrace:
    model: str
    encrypted: bool
    records: List[IterationRecord] = field(default_factory=list)

    @property
    def final_weights(self) -> np.ndarray:
        return np.array(self.records[-1].weights) if self.records else np.array([])

    @property
    def losses(self) -> List[Optional[float]]:
        return [r.loss for r in self.records]

    def to_jsonl_lines(self) -> List[str]:
        lines = []
        for record in self.records:
            doc = record.model_dump()
            doc["encrypt_share"] = record.encrypt_share
            lines.append(json.dumps(doc))
        return lines

    def to_jsonl(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            with open(path, "w", encoding="utf-8") as f:
                for line in self.to_jsonl_lines():
                    f.write(line + "\n")
        except OSError as e:
            logger.error(f"Failed to write training trace {path}: {e}")
            raise
        logger.info(f"Training trace written: {path}")
        return path


def _all_weights(parties: Sequence[Party]) -> List[float]:
    return [float(v) for p in parties for v in p.weights]


def _check_partitions(parties: Sequence[Party]) -> Party:
    if not parties:
        raise ValueError("Training needs at least one party")
    sample_counts = {p.samples for p in parties}
    if len(sample_counts) != 1:
        raise ValueError(f"Parties disagree on sample count: {sorted(sample_counts)}")
    holders = [p for p in parties if p.is_label_holder]
    if len(holders) != 1:
        raise ValueError(f"Exactly one party must hold the labels, found {len(holders)}")
    models = {p.model for p in parties}
    if len(models) != 1:
        raise ValueError(f"Parties disagree on the model: {sorted(models)}")
    return holders[0]


def train(parties: Sequence[Party], coordinator: Coordinator, cfg: TrainConfig) -> TrainingTrace:
    """Run encrypted gradient descent; every iteration goes party → coordinator → party."""
    label_holder = _check_partitions(parties)
    trace = TrainingTrace(model=cfg.model, encrypted=True)
    trace.records.append(IterationRecord(iteration=0, weights=_all_weights(parties)))

    for iteration in range(1, cfg.iterations + 1):
        timings = dict.fromkeys(PHASES, 0.0)
        iteration_start = time.perf_counter()
        try:
            updates = []
            for party in parties:
                t0 = time.perf_counter()
                contribution = party.local_contribution()
                t1 = time.perf_counter()
                updates.append(party.encrypt_contribution(contribution, iteration))
                t2 = time.perf_counter()
                timings["local"] += t1 - t0
                timings["encrypt"] += t2 - t1

            t0 = time.perf_counter()
            aggregate = coordinator.aggregate(updates)
            timings["aggregate"] += time.perf_counter() - t0

            loss = None
            for party in parties:
                t0 = time.perf_counter()
                d = party.decrypt_aggregate(aggregate)
                t1 = time.perf_counter()
                if party is label_holder:
                    loss = party.loss(d)
                party.apply_gradient(d, cfg.learning_rate)
                timings["decrypt"] += t1 - t0
                timings["local"] += time.perf_counter() - t1
        except EncodingOverflowError as e:
            logger.error(f"Encoding overflow at iteration {iteration}: {e}. "
                         f"Use a larger key or a coarser precision exponent than {cfg.precision_exponent}")
            raise
        total = time.perf_counter() - iteration_start

        record = IterationRecord(
            iteration=iteration,
            loss=loss,
            weights=_all_weights(parties),
            timings_ms={phase: seconds * 1000.0 for phase, seconds in timings.items()},
            total_ms=total * 1000.0,
        )
        trace.records.append(record)
        logger.info(f"Iteration {iteration}: loss {loss:.6f}, encryption share {record.encrypt_share:.1%}")

    if cfg.iterations:
        logger.success(f"Encrypted {cfg.model} training finished after {cfg.iterations} iterations")
    return trace


def plaintext_reference(X: np.ndarray, y: np.ndarray, cfg: TrainConfig,
                        initial_weights: Optional[np.ndarray] = None) -> TrainingTrace:
    """Same update rule as ``train`` on the merged data, without encryption."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.zeros(X.shape[1]) if initial_weights is None else np.array(initial_weights, dtype=float)
    trace = TrainingTrace(model=cfg.model, encrypted=False)
    trace.records.append(IterationRecord(iteration=0, weights=[float(v) for v in w]))
    for iteration in range(1, cfg.iterations + 1):
        start = time.perf_counter()
        d = residual(X, y, w, cfg.model)
        loss = loss_from_residual(d, y, cfg.model)
        w = w - cfg.learning_rate * (X.T @ d) / X.shape[0]
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        trace.records.append(IterationRecord(
            iteration=iteration, loss=loss, weights=[float(v) for v in w],
            timings_ms={"local": elapsed_ms}, total_ms=elapsed_ms,
        ))
    return trace


class FederatedTrainer:
    """Builds keys, engines, parties and coordinator for one dataset and runs both trainers."""

    def __init__(self, dataset: Dataset, cfg: TrainConfig):
        self.dataset = dataset
        self.cfg = cfg
        rng = random.Random(cfg.seed)
        self.public_key, self.private_key = keygen(cfg.key_bits, rng)
        engine_args = dict(workers=cfg.workers, batch_size=cfg.batch_size, ring_slots=cfg.ring_slots, seed=cfg.seed,
                           fast_generator_power=cfg.fast_generator_power)
        self.party_engine = Engine(self.public_key, self.private_key, **engine_args)
        self.coordinator_engine = Engine(self.public_key, None, **engine_args)
        self.blocks = split_vertical(dataset, cfg.parties)
        self.parties = [
            Party(party_id=index, features=dataset.X[:, block], public_key=self.public_key,
                  engine=self.party_engine, model=cfg.model,
                  labels=dataset.y if index == 0 else None,
                  precision_exponent=cfg.precision_exponent)
            for index, block in enumerate(self.blocks)
        ]
        self.coordinator = Coordinator(self.public_key, self.coordinator_engine)
        for party in self.parties:
            self.coordinator.register(party.party_id)

    def run(self) -> Tuple[TrainingTrace, TrainingTrace]:
        """(encrypted trace, plaintext reference trace)."""
        encrypted = train(self.parties, self.coordinator, self.cfg)
        order = np.concatenate(self.blocks)
        reference = plaintext_reference(self.dataset.X[:, order], self.dataset.y, self.cfg)
        return encrypted, reference

    def close(self) -> None:
        self.party_engine.shutdown()
        self.coordinator_engine.shutdown()

    def __enter__(self) -> "FederatedTrainer":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()
