"""Gradient-based refinement of the network parameters.

Two trainers are provided: damped Gauss-Newton least squares (the default,
selected as "lm") and plain full-batch gradient descent ("gd"). Both record
an error curve starting at iteration 0, the untouched starting point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import Sample, features_matrix, targets_vector
from .errors import TrainingError
from .genome import chromosome_length, decode, encode
from .network import (NetworkParams, mse_from_sse, sse_loss, tansig_prime,
                      _forward_batch)

TRAINERS = ("lm", "gd")

_DAMPING_CEILING = 1e100
_DAMPING_FLOOR = 1e-20


@dataclass
class TrainConfig:
    """Settings shared by both trainers.

    ``goal_mse`` is the performance target on mean squared error. The
    ``lm_*`` fields only matter for the damped least-squares trainer.
    """

    learning_rate: float = 0.001
    goal_mse: float = 1e-5
    max_iterations: int = 1000
    lm_damping_init: float = 1e-3
    lm_damping_factor: float = 10.0
    lm_max_retries: int = 30

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.goal_mse <= 0:
            raise ValueError("goal_mse must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.lm_damping_init <= 0:
            raise ValueError("lm_damping_init must be positive")
        if self.lm_damping_factor <= 1:
            raise ValueError("lm_damping_factor must exceed 1")
        if self.lm_max_retries < 1:
            raise ValueError("lm_max_retries must be at least 1")


@dataclass(frozen=True)
class CurvePoint:
    iteration: int
    sse: float
    mse: float


ErrorCurve = list[CurvePoint]


@dataclass
class TrainResult:
    params: NetworkParams
    curve: ErrorCurve = field(default_factory=list)
    stop_reason: str = "max_iter"


def curve_to_csv(curve: ErrorCurve) -> str:
    lines = ["iteration,sse,mse"]
    for point in curve:
        lines.append(f"{point.iteration},{point.sse!r},{point.mse!r}")
    return "\n".join(lines) + "\n"


def _loss_state(params: NetworkParams, data: Sequence[Sample]) -> tuple[float, float]:
    sse = sse_loss(params, data)
    return sse, mse_from_sse(sse, len(data), params.shape.n_outputs)


def train_gd(params: NetworkParams, data: Sequence[Sample],
             cfg: TrainConfig) -> TrainResult:
    """Full-batch gradient descent on the summed squared error.

    Iterates until the mean squared error reaches ``goal_mse`` or the
    iteration cap is hit, whichever comes first.
    """
    if not data:
        raise ValueError("cannot train on an empty sample list")
    from .network import gradient  # local import keeps module load order simple

    shape = params.shape
    theta = encode(params)
    sse, mse = _loss_state(params, data)
    curve = [CurvePoint(0, sse, mse)]
    if mse <= cfg.goal_mse:
        return TrainResult(params, curve, "goal")
    for iteration in range(1, cfg.max_iterations + 1):
        theta = theta - cfg.learning_rate * encode(gradient(params, data))
        params = decode(theta, shape)
        sse, mse = _loss_state(params, data)
        if not np.isfinite(sse):
            raise TrainingError(f"non-finite loss at iteration {iteration}")
        curve.append(CurvePoint(iteration, sse, mse))
        if mse <= cfg.goal_mse:
            return TrainResult(params, curve, "goal")
    return TrainResult(params, curve, "max_iter")


def residual_jacobian(params: NetworkParams,
                      data: Sequence[Sample]) -> tuple[np.ndarray, np.ndarray]:
    """Residual vector and its Jacobian with respect to the genes.

    Residual rows are ordered sample-major (all outputs of sample 0, then
    sample 1, ...). Jacobian columns follow the gene flattening order, so
    ``J.T @ r`` equals half the backprop gradient.
    """
    X = features_matrix(data)
    y = targets_vector(data)
    hidden, outputs = _forward_batch(params, X)
    residuals = (outputs - y[:, None])

    s, q = hidden.shape
    m = params.output_weights.shape[0]
    n = X.shape[1]
    slope = tansig_prime(hidden)                              # (s, q)
    # d residual[s, k] / d input_weights[j, i] = V[k, j] * slope[s, j] * x[s, i]
    j_w = (params.output_weights[None, :, :, None]
           * slope[:, None, :, None]
           * X[:, None, None, :])                             # (s, m, q, n)
    j_gamma = params.output_weights[None, :, :] * slope[:, None, :]  # (s, m, q)
    j_v = np.zeros((s, m, m, q))
    for k in range(m):
        j_v[:, k, k, :] = hidden
    j_h = np.broadcast_to(np.eye(m), (s, m, m))
    jacobian = np.concatenate([
        j_w.reshape(s, m, q * n),
        j_gamma,
        j_v.reshape(s, m, m * q),
        j_h.reshape(s, m, m),
    ], axis=2).reshape(s * m, chromosome_length(params.shape))
    return jacobian, residuals.reshape(-1)


def train_lm(params: NetworkParams, data: Sequence[Sample],
             cfg: TrainConfig) -> TrainResult:
    """Damped Gauss-Newton least squares on the residuals.

    Each iteration solves (J'J + mu*I) delta = -J'r and only accepts steps
    that lower the summed squared error; acceptance shrinks the damping by
    ``lm_damping_factor``, rejection grows it and retries. Training stops at
    the MSE goal, the iteration cap, or when damping overflows its ceiling.
    """
    if not data:
        raise ValueError("cannot train on an empty sample list")
    shape = params.shape
    n_genes = chromosome_length(shape)
    theta = encode(params)
    sse, mse = _loss_state(params, data)
    curve = [CurvePoint(0, sse, mse)]
    if mse <= cfg.goal_mse:
        return TrainResult(params, curve, "goal")

    damping = cfg.lm_damping_init
    identity = np.eye(n_genes)
    for iteration in range(1, cfg.max_iterations + 1):
        jacobian, residuals = residual_jacobian(params, data)
        if not (np.all(np.isfinite(jacobian)) and np.all(np.isfinite(residuals))):
            raise TrainingError(f"non-finite residuals at iteration {iteration}")
        hessian = jacobian.T @ jacobian
        grad_half = jacobian.T @ residuals
        accepted = False
        solver_failures = 0
        for _ in range(cfg.lm_max_retries + 1):
            try:
                delta = np.linalg.solve(hessian + damping * identity, -grad_half)
            except np.linalg.LinAlgError:
                delta = None
            if delta is not None and np.all(np.isfinite(delta)):
                candidate = decode(theta + delta, shape)
                new_sse, new_mse = _loss_state(candidate, data)
                if np.isfinite(new_sse) and new_sse < sse:
                    theta = theta + delta
                    params = candidate
                    sse, mse = new_sse, new_mse
                    damping = max(damping / cfg.lm_damping_factor, _DAMPING_FLOOR)
                    accepted = True
                    break
            else:
                solver_failures += 1
            damping *= cfg.lm_damping_factor
            if damping > _DAMPING_CEILING:
                return TrainResult(params, curve, "mu_overflow")
        if not accepted:
            if solver_failures > cfg.lm_max_retries:
                raise TrainingError(
                    f"normal equations stayed singular through {cfg.lm_max_retries} "
                    f"damping retries at iteration {iteration}"
                )
            return TrainResult(params, curve, "mu_overflow")
        curve.append(CurvePoint(iteration, sse, mse))
        if mse <= cfg.goal_mse:
            return TrainResult(params, curve, "goal")
    return TrainResult(params, curve, "max_iter")


def train_network(params: NetworkParams, data: Sequence[Sample], cfg: TrainConfig,
                  trainer: str = "lm") -> TrainResult:
    """Dispatch to the selected trainer ("lm" or "gd")."""
    if trainer == "lm":
        return train_lm(params, data, cfg)
    if trainer == "gd":
        return train_gd(params, data, cfg)
    raise ValueError(f"unknown trainer {trainer!r}, expected one of {TRAINERS}")
