"""Training data: synthetic generator, CSV ingestion and vertical partitioning."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from loguru import logger

from paillier_accel.errors import DatasetError

TASKS = ("linear", "logistic")


@dataclass
class Dataset:
    """Feature matrix X (samples × features) with labels y."""
    X: np.ndarray
    y: np.ndarray
    feature_names: List[str] = field(default_factory=list)
    true_weights: Optional[np.ndarray] = None
    name: str = "dataset"

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2:
            raise DatasetError(f"Feature matrix must be 2-D, got shape {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise DatasetError(f"Labels of shape {self.y.shape} do not match {self.X.shape[0]} samples")
        if self.X.shape[0] == 0 or self.X.shape[1] == 0:
            raise DatasetError(f"Dataset {self.name} is empty")
        if not self.feature_names:
            self.feature_names = [f"x{j}" for j in range(self.X.shape[1])]

    @property
    def samples(self) -> int:
        return self.X.shape[0]

    @property
    def features(self) -> int:
        return self.X.shape[1]


def make_synthetic(samples: int = 200, features: int = 8, task: str = "linear",
                   seed: int = 0, noise: float = 0.1) -> Dataset:
    """Gaussian features and known weights; logistic labels are thresholded at 0."""
    if task not in TASKS:
        raise ValueError(f"Unknown task {task!r}; expected one of {TASKS}")
    if samples < 1 or features < 1:
        raise ValueError(f"Need at least one sample and feature, got {samples}x{features}")
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(samples, features))
    weights = rng.uniform(-1.0, 1.0, size=features)
    signal = X @ weights + noise * rng.normal(size=samples)
    y = signal if task == "linear" else (signal > 0).astype(float)
    logger.debug(f"Synthetic {task} dataset: {samples} samples, {features} features")
    return Dataset(X=X, y=y, true_weights=weights, name=f"synthetic-{task}")


def load_csv(path: Union[str, Path], label_column: Optional[str] = None) -> Dataset:
    """Header row, float columns; labels are the last column unless named."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"Dataset file not found: {path}")
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetError(f"Cannot parse {path}: {e}") from e

    if frame.shape[1] < 2:
        raise DatasetError(f"{path} needs at least one feature column and a label column")
    label = label_column or frame.columns[-1]
    if label not in frame.columns:
        raise DatasetError(f"Label column {label!r} not in {path}")
    try:
        features = frame.drop(columns=[label]).astype(float)
        labels = frame[label].astype(float)
    except ValueError as e:
        raise DatasetError(f"{path} contains non-numeric values: {e}") from e
    if features.isna().any().any() or labels.isna().any():
        raise DatasetError(f"{path} contains missing values")

    logger.info(f"Loaded {path}: {len(frame)} samples, {features.shape[1]} features")
    return Dataset(X=features.to_numpy(), y=labels.to_numpy(),
                   feature_names=list(features.columns), name=path.stem)


def split_vertical(dataset: Dataset, parties: int) -> List[np.ndarray]:
    """Disjoint, contiguous column index blocks, one per party, in column order."""
    if parties < 1:
        raise ValueError(f"Need at least one party, got {parties}")
    if parties > dataset.features:
        raise DatasetError(f"Cannot split {dataset.features} features across {parties} parties")
    return [np.asarray(block, dtype=int) for block in np.array_split(np.arange(dataset.features), parties)]
