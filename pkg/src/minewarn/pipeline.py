"""End-to-end runs: warm-started training, the plain baseline, and comparisons.

A "gabp" run evolves initial parameters genetically and then refines them
with a gradient trainer; a "bp" run starts the same trainer from a random
draw on the gene bounds. Paired runs share one master seed so their data and
their comparison stay reproducible.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Sample, features_matrix, targets_vector
from .errors import SplitMismatchError
from .evolution import EvolutionTrace, GAConfig, evolve
from .genome import chromosome_length, decode
from .network import (EvalMetrics, NetworkParams, NetworkShape, evaluate,
                      predict_scores)
from .schema import classify_warning
from .seeding import named_rng
from .training import ErrorCurve, TrainConfig, train_network

VARIANTS = ("gabp", "bp")


def data_digest(train: Sequence[Sample], test: Sequence[Sample]) -> str:
    """Fingerprint of the exact bytes of both splits, targets included."""
    digest = hashlib.sha256()
    for part in (train, test):
        digest.update(str(len(part)).encode())
        if part:
            digest.update(features_matrix(part).tobytes())
            digest.update(targets_vector(part).tobytes())
    return digest.hexdigest()


@dataclass
class RunReport:
    """Everything a single training run produced."""

    variant: str
    seed: int
    params: NetworkParams
    stop_reason: str
    curve: ErrorCurve
    trace: EvolutionTrace | None
    train_metrics: EvalMetrics
    test_metrics: EvalMetrics | None
    test_predictions: tuple[float, ...]
    test_targets: tuple[float, ...]
    duration_s: float
    digest: str


def _finish_report(variant: str, seed: int, params0: NetworkParams,
                   train: Sequence[Sample], test: Sequence[Sample],
                   train_cfg: TrainConfig, trainer: str,
                   trace: EvolutionTrace | None, started: float) -> RunReport:
    result = train_network(params0, train, train_cfg, trainer)
    train_metrics = evaluate(result.params, train)
    if test:
        test_metrics = evaluate(result.params, test)
        predictions = tuple(
            float(v) for v in predict_scores(result.params,
                                             features_matrix(test))[:, 0]
        )
        targets = tuple(float(v) for v in targets_vector(test))
    else:
        test_metrics = None
        predictions = ()
        targets = ()
    return RunReport(
        variant=variant,
        seed=seed,
        params=result.params,
        stop_reason=result.stop_reason,
        curve=result.curve,
        trace=trace,
        train_metrics=train_metrics,
        test_metrics=test_metrics,
        test_predictions=predictions,
        test_targets=targets,
        duration_s=time.perf_counter() - started,
        digest=data_digest(train, test),
    )


def run_gabp(train: Sequence[Sample], test: Sequence[Sample], shape: NetworkShape,
             ga_cfg: GAConfig, train_cfg: TrainConfig,
             trainer: str = "lm") -> RunReport:
    """Evolve initial parameters, then refine them with the chosen trainer.

    The training curve's iteration 0 is evaluated on exactly the decoded best
    chromosome, so it matches the final best error of the evolution trace.
    """
    started = time.perf_counter()
    evo = evolve(train, shape, ga_cfg)
    params0 = decode(evo.best_genes, shape)
    return _finish_report("gabp", ga_cfg.seed, params0, train, test, train_cfg,
                          trainer, evo.trace, started)


def run_bp(train: Sequence[Sample], test: Sequence[Sample], shape: NetworkShape,
           train_cfg: TrainConfig, seed: int, gene_low: float = -1.0,
           gene_high: float = 1.0, trainer: str = "lm") -> RunReport:
    """Train from a seeded uniform random initialization on the gene bounds."""
    started = time.perf_counter()
    rng = named_rng(seed, "bp-init")
    genes = rng.uniform(gene_low, gene_high, size=chromosome_length(shape))
    params0 = decode(genes, shape)
    return _finish_report("bp", seed, params0, train, test, train_cfg,
                          trainer, None, started)


@dataclass(frozen=True)
class TestErrorRow:
    index: int
    target: float
    gabp_prediction: float
    bp_prediction: float
    gabp_abs_error: float
    bp_abs_error: float
    target_level: str
    gabp_level: str
    bp_level: str


@dataclass
class ComparisonReport:
    gabp: RunReport
    bp: RunReport
    rows: list[TestErrorRow]
    relative_error_reduction: float


def _relative_reduction(mse_bp: float, mse_gabp: float) -> float:
    """Relative test-error reduction of the warm-started run over the baseline."""
    if mse_bp == mse_gabp:
        return 0.0
    if mse_bp == 0.0:
        return -np.inf
    return (mse_bp - mse_gabp) / mse_bp


def compare(gabp: RunReport, bp: RunReport) -> ComparisonReport:
    """Pair two runs into a side-by-side report.

    Both runs must come from the same variant pairing and must have seen
    byte-identical train/test splits; anything else is a split mismatch.
    """
    if gabp.variant != "gabp" or bp.variant != "bp":
        raise ValueError(
            f"expected a (gabp, bp) pair, got ({gabp.variant!r}, {bp.variant!r})"
        )
    if gabp.digest != bp.digest:
        raise SplitMismatchError(
            "the two runs saw different data: digests "
            f"{gabp.digest[:12]} vs {bp.digest[:12]}"
        )
    if gabp.test_metrics is None or bp.test_metrics is None:
        raise ValueError("comparison needs runs evaluated on a test split")
    rows = []
    for i, (target, pred_a, pred_b) in enumerate(
            zip(gabp.test_targets, gabp.test_predictions, bp.test_predictions)):
        rows.append(TestErrorRow(
            index=i,
            target=target,
            gabp_prediction=pred_a,
            bp_prediction=pred_b,
            gabp_abs_error=abs(pred_a - target),
            bp_abs_error=abs(pred_b - target),
            target_level=classify_warning(target).label,
            gabp_level=classify_warning(pred_a).label,
            bp_level=classify_warning(pred_b).label,
        ))
    reduction = _relative_reduction(bp.test_metrics.mse, gabp.test_metrics.mse)
    return ComparisonReport(gabp, bp, rows, reduction)


def comparison_table_csv(report: ComparisonReport) -> str:
    lines = ["index,target,gabp_prediction,bp_prediction,gabp_abs_error,"
             "bp_abs_error,target_level,gabp_level,bp_level"]
    for row in report.rows:
        lines.append(
            f"{row.index},{row.target!r},{row.gabp_prediction!r},"
            f"{row.bp_prediction!r},{row.gabp_abs_error!r},{row.bp_abs_error!r},"
            f"{row.target_level},{row.gabp_level},{row.bp_level}"
        )
    return "\n".join(lines) + "\n"


@dataclass
class SynthData:
    """A generated dataset plus the network that produced its targets."""

    train: list[Sample]
    test: list[Sample]
    truth: NetworkParams


def _rescale_outputs(params: NetworkParams, X: np.ndarray) -> NetworkParams:
    """Affinely rescale the output layer so raw outputs span [0.05, 0.95].

    Uniformly drawn parameters produce outputs far outside the unit interval,
    which would make clamped targets unreachable for any network. Because the
    output layer is linear, scaling its weights and shifting its bias maps
    the outputs through the same affine map, so targets stay exactly
    reproducible by the returned parameters.
    """
    raw = predict_scores(params, X)
    lows = raw.min(axis=0)
    highs = raw.max(axis=0)
    spans = highs - lows
    scale = np.where(spans < 1e-9, 0.0, 0.9 / np.where(spans == 0, 1.0, spans))
    shift = np.where(spans < 1e-9, 0.5, 0.05 - scale * lows)
    return NetworkParams(
        params.input_weights,
        params.hidden_bias,
        params.output_weights * scale[:, None],
        params.output_bias * scale + shift,
    )


def synth_dataset(n_samples: int, shape: NetworkShape, noise_sd: float,
                  seed: int, gene_low: float = -1.0,
                  gene_high: float = 1.0) -> SynthData:
    """Generate a dataset from a hidden ground-truth network.

    Hidden parameters are drawn uniformly on the gene bounds (the output
    layer is then rescaled so noiseless targets lie strictly inside [0, 1]),
    inputs are uniform on the unit cube, and targets are the network outputs
    plus Gaussian noise, clamped to [0, 1]. The split keeps roughly 10/13 of
    the samples for training, the remainder for testing.
    """
    if n_samples < 4:
        raise ValueError("n_samples must be at least 4 to leave a test split")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    rng = named_rng(seed, "data-gen")
    genes = rng.uniform(gene_low, gene_high, size=chromosome_length(shape))
    X = rng.uniform(0.0, 1.0, size=(n_samples, shape.n_inputs))
    truth = _rescale_outputs(decode(genes, shape), X)
    targets = predict_scores(truth, X)[:, 0]
    if noise_sd > 0:
        targets = targets + rng.normal(0.0, noise_sd, size=n_samples)
    targets = np.clip(targets, 0.0, 1.0)

    n_test = max(1, round(n_samples * 3 / 13))
    n_train = n_samples - n_test
    samples = [Sample(X[i], float(targets[i])) for i in range(n_samples)]
    return SynthData(samples[:n_train], samples[n_train:], truth)


@dataclass
class PairSummary:
    """One row of a multi-seed comparison."""

    seed: int
    gabp_train_mse: float
    bp_train_mse: float
    gabp_test_mse: float
    bp_test_mse: float
    gabp_initial_sse: float
    bp_initial_sse: float
    relative_error_reduction: float


def run_seed_pair(train: Sequence[Sample], test: Sequence[Sample],
                  shape: NetworkShape, ga_cfg: GAConfig, train_cfg: TrainConfig,
                  trainer: str = "lm") -> ComparisonReport:
    """Run both variants with the same master seed and pair the results."""
    gabp = run_gabp(train, test, shape, ga_cfg, train_cfg, trainer)
    bp = run_bp(train, test, shape, train_cfg, ga_cfg.seed,
                ga_cfg.gene_low, ga_cfg.gene_high, trainer)
    return compare(gabp, bp)


def pair_summary(report: ComparisonReport) -> PairSummary:
    return PairSummary(
        seed=report.gabp.seed,
        gabp_train_mse=report.gabp.train_metrics.mse,
        bp_train_mse=report.bp.train_metrics.mse,
        gabp_test_mse=report.gabp.test_metrics.mse,
        bp_test_mse=report.bp.test_metrics.mse,
        gabp_initial_sse=report.gabp.curve[0].sse,
        bp_initial_sse=report.bp.curve[0].sse,
        relative_error_reduction=report.relative_error_reduction,
    )


def summary_table_csv(summaries: Sequence[PairSummary]) -> str:
    """Per-seed comparison rows plus a median row when there are several."""
    lines = ["seed,gabp_train_mse,bp_train_mse,gabp_test_mse,bp_test_mse,"
             "gabp_initial_sse,bp_initial_sse,relative_error_reduction"]
    for s in summaries:
        lines.append(
            f"{s.seed},{s.gabp_train_mse!r},{s.bp_train_mse!r},"
            f"{s.gabp_test_mse!r},{s.bp_test_mse!r},{s.gabp_initial_sse!r},"
            f"{s.bp_initial_sse!r},{s.relative_error_reduction!r}"
        )
    if len(summaries) > 1:
        med = summary_medians(summaries)
        lines.append(
            "median,"
            f"{med['gabp_train_mse']!r},{med['bp_train_mse']!r},"
            f"{med['gabp_test_mse']!r},{med['bp_test_mse']!r},"
            f"{med['gabp_initial_sse']!r},{med['bp_initial_sse']!r},"
            f"{med['relative_error_reduction']!r}"
        )
    return "\n".join(lines) + "\n"


def summary_medians(summaries: Sequence[PairSummary]) -> dict[str, float]:
    fields = ("gabp_train_mse", "bp_train_mse", "gabp_test_mse", "bp_test_mse",
              "gabp_initial_sse", "bp_initial_sse", "relative_error_reduction")
    return {name: float(np.median([getattr(s, name) for s in summaries]))
            for name in fields}
