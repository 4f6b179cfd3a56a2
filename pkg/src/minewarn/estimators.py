"""Estimator-style wrappers around the training engine.

These follow the usual fit/transform/predict conventions so the model can sit
inside pipelines and grid searches next to other estimators. The functional
core lives in the sibling modules; the classes here only adapt array-shaped
inputs, validate them, and hold fitted state.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import NormStats, Sample, _apply_matrix
from .evolution import GAConfig, evolve
from .genome import chromosome_length, decode
from .network import NetworkShape, hidden_layer_size, predict_scores
from .schema import classify_warning
from .seeding import named_rng
from .training import TrainConfig, train_network


class IndicatorNormalizer(TransformerMixin, BaseEstimator):
    """Min-max scaler with per-column benefit/cost orientation.

    Benefit columns map the fitted minimum to 0 and the maximum to 1; cost
    columns map the other way around, so that after transformation larger
    always means safer. Degenerate columns transform to a neutral 0.5.
    """

    def __init__(self, orientations=None):
        self.orientations = orientations

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        n_cols = X.shape[1]
        if self.orientations is None:
            resolved = ("benefit",) * n_cols
        else:
            resolved = tuple(self.orientations)
            if len(resolved) != n_cols:
                raise ValueError(
                    f"orientations lists {len(resolved)} entries for "
                    f"{n_cols} columns"
                )
        self.n_features_in_ = n_cols
        self.stats_ = NormStats(X.min(axis=0), X.max(axis=0), resolved)
        return self

    def transform(self, X):
        check_is_fitted(self, "stats_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but this normalizer was fitted "
                f"with {self.n_features_in_}"
            )
        return _apply_matrix(self.stats_, X)


def _as_samples(X, y) -> list[Sample]:
    return [Sample(row, float(target)) for row, target in zip(X, y)]


class _NetworkRegressor(RegressorMixin, BaseEstimator):
    """Shared fitted-state behaviour of the two training variants."""

    def _resolve_shape(self, n_inputs: int) -> NetworkShape:
        if self.hidden_size is not None:
            return NetworkShape(n_inputs, int(self.hidden_size), 1,
                                self.size_adjustment)
        return NetworkShape.sized(n_inputs, 1, self.size_adjustment)

    def _train_cfg(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            goal_mse=self.goal_mse,
            max_iterations=self.max_iterations,
            lm_damping_init=self.lm_damping_init,
            lm_damping_factor=self.lm_damping_factor,
        )

    def _check_fit_inputs(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        if y.ndim != 1:
            raise ValueError("y must be a flat vector of safety scores")
        if np.any((y < 0.0) | (y > 1.0)):
            raise ValueError("targets must lie in [0, 1]")
        return X, y

    def predict(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=np.float64)
        return predict_scores(self.params_, X)[:, 0]

    def predict_level(self, X):
        """Warning-level labels for each row of X."""
        return np.array([classify_warning(s).label for s in self.predict(X)])


class BPRegressor(_NetworkRegressor):
    """Gradient-trained network starting from a seeded random initialization."""

    def __init__(self, hidden_size=None, size_adjustment=1, trainer="lm",
                 learning_rate=0.001, goal_mse=1e-5, max_iterations=1000,
                 lm_damping_init=1e-3, lm_damping_factor=10.0,
                 gene_low=-1.0, gene_high=1.0, random_state=0):
        self.hidden_size = hidden_size
        self.size_adjustment = size_adjustment
        self.trainer = trainer
        self.learning_rate = learning_rate
        self.goal_mse = goal_mse
        self.max_iterations = max_iterations
        self.lm_damping_init = lm_damping_init
        self.lm_damping_factor = lm_damping_factor
        self.gene_low = gene_low
        self.gene_high = gene_high
        self.random_state = random_state

    def fit(self, X, y):
        X, y = self._check_fit_inputs(X, y)
        shape = self._resolve_shape(X.shape[1])
        rng = named_rng(self.random_state, "bp-init")
        genes = rng.uniform(self.gene_low, self.gene_high,
                            size=chromosome_length(shape))
        result = train_network(decode(genes, shape), _as_samples(X, y),
                               self._train_cfg(), self.trainer)
        self.n_features_in_ = X.shape[1]
        self.shape_ = shape
        self.params_ = result.params
        self.curve_ = result.curve
        self.stop_reason_ = result.stop_reason
        return self


class GABPRegressor(_NetworkRegressor):
    """Network whose starting weights are found by genetic search first."""

    def __init__(self, hidden_size=None, size_adjustment=1, trainer="lm",
                 learning_rate=0.001, goal_mse=1e-5, max_iterations=1000,
                 lm_damping_init=1e-3, lm_damping_factor=10.0,
                 population_size=60, crossover_prob=0.7, mutation_prob=0.05,
                 max_generations=50, gene_low=-1.0, gene_high=1.0,
                 selection_coeff=1.0, random_state=0):
        self.hidden_size = hidden_size
        self.size_adjustment = size_adjustment
        self.trainer = trainer
        self.learning_rate = learning_rate
        self.goal_mse = goal_mse
        self.max_iterations = max_iterations
        self.lm_damping_init = lm_damping_init
        self.lm_damping_factor = lm_damping_factor
        self.population_size = population_size
        self.crossover_prob = crossover_prob
        self.mutation_prob = mutation_prob
        self.max_generations = max_generations
        self.gene_low = gene_low
        self.gene_high = gene_high
        self.selection_coeff = selection_coeff
        self.random_state = random_state

    def fit(self, X, y):
        X, y = self._check_fit_inputs(X, y)
        shape = self._resolve_shape(X.shape[1])
        samples = _as_samples(X, y)
        ga_cfg = GAConfig(
            population_size=self.population_size,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            max_generations=self.max_generations,
            gene_low=self.gene_low,
            gene_high=self.gene_high,
            selection_coeff=self.selection_coeff,
            seed=self.random_state,
        )
        evo = evolve(samples, shape, ga_cfg)
        result = train_network(decode(evo.best_genes, shape), samples,
                               self._train_cfg(), self.trainer)
        self.n_features_in_ = X.shape[1]
        self.shape_ = shape
        self.params_ = result.params
        self.curve_ = result.curve
        self.stop_reason_ = result.stop_reason
        self.trace_ = evo.trace
        return self
