"""Losses and gradients of the two linear models.

Under encryption the logistic model uses the first-order sigmoid
0.5 + z/4, which keeps every party's contribution linear in its weights.
"""

from typing import Tuple

import numpy as np

MODELS = ("linear", "logistic")

# residual d = SCALE·Xw + OFFSET - y, gradient = Xᵀd / m
RESIDUAL_SCALE = {"linear": 1.0, "logistic": 0.25}
RESIDUAL_OFFSET = {"linear": 0.0, "logistic": 0.5}


def _check_shapes(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y of shape {y.shape} does not match X of shape {X.shape}")
    if w.shape != (X.shape[1],):
        raise ValueError(f"w of shape {w.shape} does not match X of shape {X.shape}")
    return X, y, w


def _check_model(model: str) -> None:
    if model not in MODELS:
        raise ValueError(f"Unknown model {model!r}; expected one of {MODELS}")


def sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def approx_sigmoid(z):
    return 0.5 + 0.25 * np.asarray(z, dtype=float)


def linear_loss(X, y, w) -> float:
    X, y, w = _check_shapes(X, y, w)
    r = X @ w - y
    return float(r @ r) / (2 * X.shape[0])


def linear_gradient(X, y, w) -> np.ndarray:
    X, y, w = _check_shapes(X, y, w)
    return X.T @ (X @ w - y) / X.shape[0]


def logistic_loss(X, y, w) -> float:
    """Mean log-loss with labels in {0, 1}."""
    X, y, w = _check_shapes(X, y, w)
    z = X @ w
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def approx_logistic_loss(X, y, w) -> float:
    """Second-order expansion of the log-loss at z = 0; its gradient uses approx_sigmoid."""
    X, y, w = _check_shapes(X, y, w)
    z = X @ w
    return float(np.mean(np.log(2.0) + z / 2 + z * z / 8 - y * z))


def logistic_gradient(X, y, w, approximate: bool = True) -> np.ndarray:
    X, y, w = _check_shapes(X, y, w)
    z = X @ w
    p = approx_sigmoid(z) if approximate else sigmoid(z)
    return X.T @ (p - y) / X.shape[0]


def residual(X, y, w, model: str) -> np.ndarray:
    """Per-sample gradient multiplier d."""
    _check_model(model)
    X, y, w = _check_shapes(X, y, w)
    return RESIDUAL_SCALE[model] * (X @ w) + RESIDUAL_OFFSET[model] - y


def loss_from_residual(d: np.ndarray, y: np.ndarray, model: str) -> float:
    """Loss recovered by the label holder from d and its own labels."""
    _check_model(model)
    d = np.asarray(d, dtype=float)
    y = np.asarray(y, dtype=float)
    if d.shape != y.shape:
        raise ValueError(f"Residual of shape {d.shape} does not match labels {y.shape}")
    if model == "linear":
        return float(d @ d) / (2 * d.shape[0])
    z = (d - RESIDUAL_OFFSET[model] + y) / RESIDUAL_SCALE[model]
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def model_gradient(X, y, w, model: str) -> np.ndarray:
    """Gradient used by training: exact for linear, first-order sigmoid for logistic."""
    _check_model(model)
    if model == "linear":
        return linear_gradient(X, y, w)
    return logistic_gradient(X, y, w, approximate=True)
