"""Data-holding parties and the messages they exchange with the coordinator."""

from typing import List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from paillier_accel.crypto.encoding import decode, encode
from paillier_accel.crypto.paillier import Ciphertext, PublicKey
from paillier_accel.engine.batch_engine import Engine, OperationKind
from paillier_accel.engine.batch_runner import BatchRunner
from paillier_accel.fedsim.gradients import RESIDUAL_OFFSET, RESIDUAL_SCALE, loss_from_residual


class EncryptedUpdate(BaseModel):
    """One party's encrypted per-sample contributions for an iteration."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    party_id: int
    iteration: int
    ciphertexts: List[Ciphertext]


class AggregateMessage(BaseModel):
    """Coordinator's homomorphic sum of every party's update."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    iteration: int
    contributors: List[int]
    ciphertexts: List[Ciphertext]


class Party:
    """Holds a vertical slice of the features; party 0 also holds the labels."""

    def __init__(self, party_id: int, features: np.ndarray, public_key: PublicKey, engine: Engine,
                 model: str = "linear", labels: Optional[np.ndarray] = None,
                 weights: Optional[np.ndarray] = None, precision_exponent: int = -8):
        self.party_id = party_id
        self.features = np.asarray(features, dtype=float)
        if self.features.ndim != 2:
            raise ValueError(f"Party {party_id} features must be 2-D, got shape {self.features.shape}")
        self.public_key = public_key
        self.engine = engine
        self.model = model
        self.labels = None if labels is None else np.asarray(labels, dtype=float)
        if self.labels is not None and self.labels.shape != (self.samples,):
            raise ValueError(f"Party {party_id} labels do not match {self.samples} samples")
        self.weights = (np.zeros(self.features.shape[1]) if weights is None
                        else np.array(weights, dtype=float))
        if self.weights.shape != (self.features.shape[1],):
            raise ValueError(f"Party {party_id} weights do not match {self.features.shape[1]} features")
        self.precision_exponent = precision_exponent

        logger.info(f"Initialized party {party_id}: {self.features.shape[1]} features"
                    f"{' + labels' if self.is_label_holder else ''}")

    @property
    def samples(self) -> int:
        return self.features.shape[0]

    @property
    def is_label_holder(self) -> bool:
        return self.labels is not None

    def _runner(self, tag: str, iteration: int) -> BatchRunner:
        return BatchRunner(self.engine, prefix=f"party{self.party_id}-{tag}-it{iteration}", summary=False)

    def local_contribution(self) -> np.ndarray:
        """SCALE·X_p w_p, plus (OFFSET - y) on the label holder."""
        part = RESIDUAL_SCALE[self.model] * (self.features @ self.weights)
        if self.is_label_holder:
            part = part + RESIDUAL_OFFSET[self.model] - self.labels
        return part

    def encrypt_contribution(self, contribution: np.ndarray, iteration: int) -> EncryptedUpdate:
        encoded = [encode(float(v), self.public_key, exponent=self.precision_exponent) for v in contribution]
        ciphertexts = self._runner("enc", iteration).run_sync(OperationKind.ENCRYPT, encoded)
        return EncryptedUpdate(party_id=self.party_id, iteration=iteration, ciphertexts=ciphertexts)

    def decrypt_aggregate(self, message: AggregateMessage) -> np.ndarray:
        """Per-sample residual d from the coordinator's aggregate."""
        if len(message.ciphertexts) != self.samples:
            raise ValueError(f"Aggregate has {len(message.ciphertexts)} entries, party {self.party_id} "
                             f"has {self.samples} samples")
        decoded = self._runner("dec", message.iteration).run_sync(OperationKind.DECRYPT, message.ciphertexts)
        return np.array([decode(e, self.public_key) for e in decoded])

    def local_gradient(self, d: np.ndarray) -> np.ndarray:
        return self.features.T @ d / self.samples

    def apply_gradient(self, d: np.ndarray, learning_rate: float) -> None:
        self.weights = self.weights - learning_rate * self.local_gradient(d)

    def loss(self, d: np.ndarray) -> float:
        if not self.is_label_holder:
            raise RuntimeError(f"Party {self.party_id} holds no labels")
        return loss_from_residual(d, self.labels, self.model)
