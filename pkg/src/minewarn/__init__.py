"""Genetic-algorithm warm-started backpropagation network for mine-safety
early warning."""

__version__ = "0.1.0"

from .data import (NormStats, Sample, apply_normalization, fit_normalization,
                   load_samples, normalize_samples, save_samples)
from .estimators import BPRegressor, GABPRegressor, IndicatorNormalizer
from .evolution import (EvolutionTrace, EvolveResult, GAConfig, Individual,
                        crossover, evolve, fitness, mutate, roulette_select,
                        selection_probabilities)
from .genome import chromosome_length, decode, encode, gene_layout
from .model_io import LoadedModel, load_model, save_model
from .network import (EvalMetrics, NetworkParams, NetworkShape, evaluate,
                      forward, gradient, hidden_layer_size, predict_scores,
                      sse_loss, tansig)
from .pipeline import (ComparisonReport, RunReport, SynthData, compare,
                       run_bp, run_gabp, run_seed_pair, synth_dataset)
from .schema import (Indicator, IndicatorSchema, WarningLevel,
                     classify_warning, default_schema)
from .training import (ErrorCurve, TrainConfig, TrainResult, train_gd,
                       train_lm, train_network)

__all__ = [
    "BPRegressor", "ComparisonReport", "ErrorCurve", "EvalMetrics",
    "EvolutionTrace", "EvolveResult", "GABPRegressor", "GAConfig",
    "Indicator", "IndicatorSchema", "Individual", "IndicatorNormalizer",
    "LoadedModel", "NetworkParams", "NetworkShape", "NormStats", "RunReport",
    "Sample", "SynthData", "TrainConfig", "TrainResult", "WarningLevel",
    "apply_normalization", "chromosome_length", "classify_warning", "compare",
    "crossover", "decode", "default_schema", "encode", "evaluate", "evolve",
    "fit_normalization", "fitness", "forward", "gene_layout", "gradient",
    "hidden_layer_size", "load_model", "load_samples", "mutate",
    "normalize_samples", "predict_scores", "roulette_select", "run_bp",
    "run_gabp", "run_seed_pair", "save_model", "save_samples",
    "selection_probabilities", "sse_loss", "synth_dataset", "tansig",
    "train_gd", "train_lm", "train_network",
]
