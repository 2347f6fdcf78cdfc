"""Vertical federated training over Paillier-encrypted gradients."""

from .coordinator import Coordinator
from .datasets import Dataset, load_csv, make_synthetic, split_vertical
from .gradients import (
    approx_logistic_loss,
    approx_sigmoid,
    linear_gradient,
    linear_loss,
    logistic_gradient,
    logistic_loss,
    loss_from_residual,
    model_gradient,
    residual,
    sigmoid,
)
from .party import AggregateMessage, EncryptedUpdate, Party
from .trace_validator import TrajectoryValidator
from .trainer import (
    FederatedTrainer,
    IterationRecord,
    TrainConfig,
    TrainingTrace,
    plaintext_reference,
    train,
)

__all__ = [
    "Coordinator",
    "Dataset",
    "load_csv",
    "make_synthetic",
    "split_vertical",
    "approx_logistic_loss",
    "approx_sigmoid",
    "linear_gradient",
    "linear_loss",
    "logistic_gradient",
    "logistic_loss",
    "loss_from_residual",
    "model_gradient",
    "residual",
    "sigmoid",
    "AggregateMessage",
    "EncryptedUpdate",
    "Party",
    "TrajectoryValidator",
    "FederatedTrainer",
    "IterationRecord",
    "TrainConfig",
    "TrainingTrace",
    "plaintext_reference",
    "train",
]
