"""Single-hidden-layer feedforward network with analytic gradients.

The hidden layer uses the tansig activation and the output layer is linear.
All training losses are summed squared error over samples and outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Sample, features_matrix, targets_vector
from .schema import classify_warning


def hidden_layer_size(n_inputs: int, n_outputs: int, adjustment: int = 1) -> int:
    """Rule-of-thumb hidden neuron count: floor((inputs + outputs) / 2) + adjustment.

    ``adjustment`` must be an integer in [1, 10].
    """
    if n_inputs < 1 or n_outputs < 1:
        raise ValueError("layer sizes must be at least 1")
    if not (1 <= int(adjustment) <= 10):
        raise ValueError(f"adjustment must lie in [1, 10], got {adjustment}")
    return (int(n_inputs) + int(n_outputs)) // 2 + int(adjustment)


@dataclass(frozen=True)
class NetworkShape:
    """Layer sizes of the network; defaults describe the 19-indicator model."""

    n_inputs: int = 19
    n_hidden: int = 11
    n_outputs: int = 1
    size_adjustment: int = 1

    def __post_init__(self) -> None:
        for field_name in ("n_inputs", "n_hidden", "n_outputs"):
            if getattr(self, field_name) < 1:
                raise ValueError(f"{field_name} must be at least 1")
        if not (1 <= self.size_adjustment <= 10):
            raise ValueError(
                f"size_adjustment must lie in [1, 10], got {self.size_adjustment}"
            )

    @classmethod
    def sized(cls, n_inputs: int, n_outputs: int, adjustment: int = 1) -> "NetworkShape":
        """Build a shape with the hidden layer chosen by the sizing rule."""
        return cls(n_inputs, hidden_layer_size(n_inputs, n_outputs, adjustment),
                   n_outputs, adjustment)


@dataclass(frozen=True)
class NetworkParams:
    """Connection weights and biases.

    ``input_weights`` has one row per hidden neuron, ``output_weights`` one
    row per output neuron. The same container doubles as the holder of
    per-parameter partial derivatives returned by :func:`gradient`.
    """

    input_weights: np.ndarray   # (n_hidden, n_inputs)
    hidden_bias: np.ndarray     # (n_hidden,)
    output_weights: np.ndarray  # (n_outputs, n_hidden)
    output_bias: np.ndarray     # (n_outputs,)

    def __post_init__(self) -> None:
        w = np.asarray(self.input_weights, dtype=np.float64)
        g = np.asarray(self.hidden_bias, dtype=np.float64)
        v = np.asarray(self.output_weights, dtype=np.float64)
        h = np.asarray(self.output_bias, dtype=np.float64)
        if w.ndim != 2 or v.ndim != 2 or g.ndim != 1 or h.ndim != 1:
            raise ValueError("weights must be matrices and biases flat vectors")
        q, n = w.shape
        m = v.shape[0]
        if g.shape != (q,) or v.shape != (m, q) or h.shape != (m,):
            raise ValueError(
                f"inconsistent parameter shapes: input_weights {w.shape}, "
                f"hidden_bias {g.shape}, output_weights {v.shape}, output_bias {h.shape}"
            )
        object.__setattr__(self, "input_weights", w)
        object.__setattr__(self, "hidden_bias", g)
        object.__setattr__(self, "output_weights", v)
        object.__setattr__(self, "output_bias", h)

    @property
    def shape(self) -> NetworkShape:
        q, n = self.input_weights.shape
        return NetworkShape(n, q, self.output_weights.shape[0])

    @classmethod
    def zeros(cls, shape: NetworkShape) -> "NetworkParams":
        n, q, m = shape.n_inputs, shape.n_hidden, shape.n_outputs
        return cls(np.zeros((q, n)), np.zeros(q), np.zeros((m, q)), np.zeros(m))


def tansig(z: np.ndarray) -> np.ndarray:
    """Hyperbolic tangent sigmoid, 2 / (1 + exp(-2z)) - 1.

    Computed as tanh(z), which is the same function with stable behaviour for
    large arguments. The output always lies in the open interval (-1, 1).
    """
    return np.tanh(z)


def tansig_prime(activation: np.ndarray) -> np.ndarray:
    """Derivative of tansig expressed through its own output: 1 - a**2."""
    return 1.0 - activation * activation


def _forward_batch(params: NetworkParams, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hidden activations and outputs for a feature matrix (one row per sample)."""
    hidden = tansig(X @ params.input_weights.T + params.hidden_bias)
    outputs = hidden @ params.output_weights.T + params.output_bias
    return hidden, outputs


def forward(params: NetworkParams, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the network on one feature vector.

    Returns:
        (hidden, output): hidden activations of shape (n_hidden,) and the
        linear output of shape (n_outputs,).
    """
    x = np.asarray(features, dtype=np.float64)
    if x.shape != (params.input_weights.shape[1],):
        raise ValueError(
            f"expected {params.input_weights.shape[1]} features, got shape {x.shape}"
        )
    hidden, outputs = _forward_batch(params, x[None, :])
    return hidden[0], outputs[0]


def predict_scores(params: NetworkParams, X: np.ndarray) -> np.ndarray:
    """Network outputs for a feature matrix, shape (n_samples, n_outputs)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.input_weights.shape[1]:
        raise ValueError(
            f"expected a matrix with {params.input_weights.shape[1]} columns, "
            f"got shape {X.shape}"
        )
    return _forward_batch(params, X)[1]


def _residuals(params: NetworkParams, samples: Sequence[Sample]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hidden activations, residual matrix and feature matrix for ``samples``.

    Targets are scalar per sample; for multi-output shapes the same target
    applies to every output, keeping the loss well defined for any shape.
    """
    X = features_matrix(samples)
    y = targets_vector(samples)
    if X.shape[1] != params.input_weights.shape[1]:
        raise ValueError(
            f"samples have {X.shape[1]} features but the network expects "
            f"{params.input_weights.shape[1]}"
        )
    hidden, outputs = _forward_batch(params, X)
    residuals = outputs - y[:, None]
    return hidden, residuals, X


def sse_loss(params: NetworkParams, samples: Sequence[Sample]) -> float:
    """Summed squared error over all samples and outputs."""
    _, residuals, _ = _residuals(params, samples)
    return float(np.sum(residuals * residuals))


def mse_from_sse(sse: float, n_samples: int, n_outputs: int) -> float:
    return sse / (n_samples * n_outputs)


def gradient(params: NetworkParams, samples: Sequence[Sample]) -> NetworkParams:
    """Partial derivatives of the summed squared error, shaped like the params."""
    hidden, residuals, X = _residuals(params, samples)
    d_output_bias = 2.0 * residuals.sum(axis=0)
    d_output_weights = 2.0 * residuals.T @ hidden
    d_hidden = (2.0 * residuals) @ params.output_weights * tansig_prime(hidden)
    d_hidden_bias = d_hidden.sum(axis=0)
    d_input_weights = d_hidden.T @ X
    return NetworkParams(d_input_weights, d_hidden_bias, d_output_weights, d_output_bias)


@dataclass(frozen=True)
class EvalMetrics:
    """Fit quality on one dataset."""

    mse: float
    per_sample_abs_error: tuple[float, ...]
    level_accuracy: float


def evaluate(params: NetworkParams, samples: Sequence[Sample]) -> EvalMetrics:
    """Mean squared error, per-sample absolute errors, and warning-level accuracy.

    Level accuracy is the fraction of predictions whose warning level matches
    the level of the true score.
    """
    if not samples:
        raise ValueError("cannot evaluate on an empty sample list")
    _, residuals, _ = _residuals(params, samples)
    mse = float(np.mean(residuals * residuals))
    abs_errors = tuple(float(v) for v in np.mean(np.abs(residuals), axis=1))
    outputs = residuals + targets_vector(samples)[:, None]
    matches = 0
    for out_row, sample in zip(outputs, samples):
        for value in out_row:
            if classify_warning(value) == classify_warning(sample.target):
                matches += 1
    level_accuracy = matches / outputs.size
    return EvalMetrics(mse, abs_errors, level_accuracy)
