"""Command-line interface.

Commands: gen-data, train, predict, evaluate, compare. Settings resolve in
three layers: built-in defaults, then an INI-style config file, then flags.
Every run is reproducible from its flag set because all randomness flows from
the single --seed value, and commands either write all their output files or
none of them.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from . import __version__
from .charts import line_chart
from .data import (fit_normalization, load_samples, normalize_samples,
                   samples_to_csv)
from .errors import DataFormatError, SplitMismatchError, TrainingError
from .evolution import GAConfig, trace_to_csv
from .model_io import LoadedModel, load_model, model_to_text
from .network import NetworkShape, evaluate, predict_scores
from .pipeline import (ComparisonReport, RunReport, comparison_table_csv,
                       compare, pair_summary, run_bp, run_gabp, run_seed_pair,
                       summary_medians, summary_table_csv, synth_dataset)
from .schema import classify_warning, default_schema
from .data import features_matrix
from .training import TrainConfig, curve_to_csv


@dataclass
class CliConfig:
    """Fully resolved settings for one command invocation."""

    seed: int = 0
    out: str = "out"
    variant: str = "gabp"
    svg: bool = False
    seeds: int = 1
    hidden_size: int | None = None
    size_adjustment: int = 1
    population_size: int = 60
    crossover_prob: float = 0.7
    mutation_prob: float = 0.05
    max_generations: int = 50
    gene_low: float = -1.0
    gene_high: float = 1.0
    selection_coeff: float = 1.0
    trainer: str = "lm"
    learning_rate: float = 0.001
    goal_mse: float = 1e-5
    max_iterations: int = 1000
    lm_damping_init: float = 1e-3
    lm_damping_factor: float = 10.0
    samples: int = 13
    noise_sd: float = 0.02

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def network_shape(self, n_inputs: int) -> NetworkShape:
        if self.hidden_size is not None:
            return NetworkShape(n_inputs, self.hidden_size, 1,
                                self.size_adjustment)
        return NetworkShape.sized(n_inputs, 1, self.size_adjustment)

    def ga_config(self, seed: int | None = None) -> GAConfig:
        return GAConfig(
            population_size=self.population_size,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            max_generations=self.max_generations,
            gene_low=self.gene_low,
            gene_high=self.gene_high,
            selection_coeff=self.selection_coeff,
            seed=self.seed if seed is None else seed,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            goal_mse=self.goal_mse,
            max_iterations=self.max_iterations,
            lm_damping_init=self.lm_damping_init,
            lm_damping_factor=self.lm_damping_factor,
        )


# (section, key) -> parser; sections mirror the module names.
_CONFIG_LAYOUT = {
    ("run", "seed"): int,
    ("run", "out"): str,
    ("run", "variant"): str,
    ("run", "svg"): None,  # boolean, handled specially
    ("run", "seeds"): int,
    ("network", "hidden_size"): int,
    ("network", "size_adjustment"): int,
    ("evolution", "population_size"): int,
    ("evolution", "crossover_prob"): float,
    ("evolution", "mutation_prob"): float,
    ("evolution", "max_generations"): int,
    ("evolution", "gene_low"): float,
    ("evolution", "gene_high"): float,
    ("evolution", "selection_coeff"): float,
    ("training", "trainer"): str,
    ("training", "learning_rate"): float,
    ("training", "goal_mse"): float,
    ("training", "max_iterations"): int,
    ("training", "lm_damping_init"): float,
    ("training", "lm_damping_factor"): float,
    ("data", "samples"): int,
    ("data", "noise_sd"): float,
}

_BOOL_VALUES = {"true": True, "false": False, "yes": True, "no": False,
                "1": True, "0": False}


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except FileNotFoundError:
        raise DataFormatError(f"config file not found: {path}") from None
    except configparser.Error as exc:
        raise DataFormatError(f"config file {path}: {exc}") from None

    values: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            spec = _CONFIG_LAYOUT.get((section, key))
            if (section, key) not in _CONFIG_LAYOUT:
                raise DataFormatError(
                    f"config file {path}: unknown setting [{section}] {key}"
                )
            if spec is None:
                lowered = raw.strip().lower()
                if lowered not in _BOOL_VALUES:
                    raise DataFormatError(
                        f"config file {path}: [{section}] {key} must be a "
                        f"boolean, got {raw!r}"
                    )
                values[key] = _BOOL_VALUES[lowered]
                continue
            try:
                values[key] = spec(raw)
            except ValueError:
                raise DataFormatError(
                    f"config file {path}: [{section}] {key} has invalid value "
                    f"{raw!r}"
                ) from None
    return values


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Merge defaults, config-file values, and flags (flags win)."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config))
    for name in ("seed", "out", "variant", "svg", "seeds", "trainer",
                 "samples", "noise_sd"):
        flag_value = getattr(args, name.replace("-", "_"), None)
        if flag_value is not None:
            values[name] = flag_value
    cfg = CliConfig(**values)
    if cfg.variant not in ("gabp", "bp"):
        raise ValueError(f"variant must be gabp or bp, got {cfg.variant!r}")
    if cfg.trainer not in ("lm", "gd"):
        raise ValueError(f"trainer must be lm or gd, got {cfg.trainer!r}")
    if cfg.seeds < 1:
        raise ValueError("seeds must be at least 1")
    return cfg


def _write_outputs(out_dir: str | Path, outputs: dict[str, str]) -> list[Path]:
    """Write every file or none: on failure, remove whatever was written."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, content in outputs.items():
            path = directory / name
            path.write_text(content, encoding="utf-8")
            written.append(path)
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def _json_report(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _metrics_dict(metrics) -> dict:
    return {
        "mse": metrics.mse,
        "level_accuracy": metrics.level_accuracy,
        "per_sample_abs_error": list(metrics.per_sample_abs_error),
    }


def _report_header(command: str, cfg: CliConfig) -> dict:
    return {
        "artifact": {"name": "minewarn", "version": __version__},
        "command": command,
        "config": cfg.to_dict(),
    }


def cmd_gen_data(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    schema = default_schema()
    shape = cfg.network_shape(len(schema))
    generated = synth_dataset(cfg.samples, shape, cfg.noise_sd, cfg.seed,
                              cfg.gene_low, cfg.gene_high)
    outputs = {
        "train.csv": samples_to_csv(generated.train, schema, include_target=True),
        "test.csv": samples_to_csv(generated.test, schema, include_target=True),
    }
    _write_outputs(cfg.out, outputs)
    print(f"wrote {len(generated.train)} training and {len(generated.test)} "
          f"test samples to {cfg.out}")
    return 0


def _run_report_json(command: str, cfg: CliConfig, report: RunReport) -> dict:
    payload = _report_header(command, cfg)
    payload.update({
        "variant": report.variant,
        "seed": report.seed,
        "stop_reason": report.stop_reason,
        "iterations": report.curve[-1].iteration,
        "initial_sse": report.curve[0].sse,
        "final_sse": report.curve[-1].sse,
        "train_metrics": _metrics_dict(report.train_metrics),
        "test_metrics": (_metrics_dict(report.test_metrics)
                         if report.test_metrics is not None else None),
        "data_digest": report.digest,
    })
    if report.trace is not None:
        payload["evolution"] = {
            "generations": len(report.trace.generations),
            "initial_best_sse": report.trace.generations[0].best_sse,
            "final_best_sse": report.trace.generations[-1].best_sse,
        }
    return payload


def cmd_train(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    started = time.perf_counter()
    schema = default_schema()
    train = load_samples(args.train, schema, has_target=True)
    if not train:
        raise DataFormatError(f"training file {args.train} holds no samples")
    test = load_samples(args.test, schema, has_target=True) if args.test else []
    stats = fit_normalization(train, schema)
    train_n = normalize_samples(stats, train)
    test_n = normalize_samples(stats, test)
    shape = cfg.network_shape(len(schema))

    if cfg.variant == "gabp":
        report = run_gabp(train_n, test_n, shape, cfg.ga_config(),
                          cfg.train_config(), cfg.trainer)
    else:
        report = run_bp(train_n, test_n, shape, cfg.train_config(), cfg.seed,
                        cfg.gene_low, cfg.gene_high, cfg.trainer)

    outputs = {
        "model.json": model_to_text(report.params, stats, schema, __version__),
        "report.json": _json_report(_run_report_json("train", cfg, report)),
        "error_curve.csv": curve_to_csv(report.curve),
    }
    if report.trace is not None:
        outputs["trace.csv"] = trace_to_csv(report.trace)
    if cfg.svg:
        iterations = [p.iteration for p in report.curve]
        outputs["error_curve.svg"] = line_chart(
            "Training error", "iteration", "summed squared error",
            [(report.variant, iterations, [p.sse for p in report.curve])],
            log_y=True,
        )
    _write_outputs(cfg.out, outputs)
    print(f"trained {report.variant} model in "
          f"{time.perf_counter() - started:.2f}s "
          f"(stop: {report.stop_reason}, train mse {report.train_metrics.mse:.3g}); "
          f"outputs in {cfg.out}")
    return 0


def _load_model_and_rows(model_path: str, data_path: str,
                         has_target: bool) -> tuple[LoadedModel, list]:
    model = load_model(model_path)
    rows = load_samples(data_path, model.schema, has_target=has_target)
    return model, normalize_samples(model.stats, rows)


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model, rows = _load_model_and_rows(args.model, args.input, has_target=False)
    lines = ["row,score,level"]
    if rows:
        scores = predict_scores(model.params, features_matrix(rows))[:, 0]
        for i, score in enumerate(scores, start=1):
            lines.append(f"{i},{float(score)!r},{classify_warning(score).label}")
    payload = _report_header("predict", cfg)
    payload.update({"model": args.model, "input": args.input, "rows": len(rows)})
    outputs = {
        "predictions.csv": "\n".join(lines) + "\n",
        "report.json": _json_report(payload),
    }
    _write_outputs(cfg.out, outputs)
    print(f"scored {len(rows)} rows; outputs in {cfg.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model, rows = _load_model_and_rows(args.model, args.data, has_target=True)
    if not rows:
        raise DataFormatError(f"data file {args.data} holds no samples")
    metrics = evaluate(model.params, rows)
    scores = predict_scores(model.params, features_matrix(rows))[:, 0]
    table = ["row,target,prediction,abs_error,target_level,predicted_level,level_match"]
    for i, (sample, score) in enumerate(zip(rows, scores), start=1):
        target_level = classify_warning(sample.target)
        predicted_level = classify_warning(score)
        table.append(
            f"{i},{sample.target!r},{float(score)!r},"
            f"{abs(float(score) - sample.target)!r},{target_level.label},"
            f"{predicted_level.label},{int(target_level == predicted_level)}"
        )
    payload = _report_header("evaluate", cfg)
    payload.update({
        "model": args.model,
        "data": args.data,
        "metrics": _metrics_dict(metrics),
    })
    outputs = {
        "evaluation.json": _json_report(payload),
        "per_sample_errors.csv": "\n".join(table) + "\n",
    }
    _write_outputs(cfg.out, outputs)
    print(f"evaluated {len(rows)} rows: mse {metrics.mse:.3g}, "
          f"level accuracy {metrics.level_accuracy:.2f}; outputs in {cfg.out}")
    return 0


def _pair_json(report: ComparisonReport) -> dict:
    summary = pair_summary(report)
    return {
        "seed": summary.seed,
        "gabp": {
            "train_mse": summary.gabp_train_mse,
            "test_mse": summary.gabp_test_mse,
            "initial_sse": summary.gabp_initial_sse,
            "stop_reason": report.gabp.stop_reason,
            "iterations": report.gabp.curve[-1].iteration,
        },
        "bp": {
            "train_mse": summary.bp_train_mse,
            "test_mse": summary.bp_test_mse,
            "initial_sse": summary.bp_initial_sse,
            "stop_reason": report.bp.stop_reason,
            "iterations": report.bp.curve[-1].iteration,
        },
        "relative_error_reduction": summary.relative_error_reduction,
    }


def cmd_compare(args: argparse.Namespace) -> int:
    if getattr(args, "variant", None) is not None:
        raise ValueError(
            "compare always runs both variants; a --variant override would "
            "make the two legs identical"
        )
    cfg = resolve_config(args)
    started = time.perf_counter()
    schema = default_schema()
    shape = cfg.network_shape(len(schema))
    if bool(args.train) != bool(args.test):
        raise ValueError("compare needs both --train and --test, or neither")
    if args.train:
        train = load_samples(args.train, schema, has_target=True)
        test = load_samples(args.test, schema, has_target=True)
    else:
        generated = synth_dataset(cfg.samples, shape, cfg.noise_sd, cfg.seed,
                                  cfg.gene_low, cfg.gene_high)
        train, test = generated.train, generated.test
    if not train or not test:
        raise DataFormatError("compare needs non-empty train and test splits")
    stats = fit_normalization(train, schema)
    train_n = normalize_samples(stats, train)
    test_n = normalize_samples(stats, test)

    reports: list[ComparisonReport] = []
    outputs: dict[str, str] = {}
    for offset in range(cfg.seeds):
        master = cfg.seed + offset
        report = run_seed_pair(train_n, test_n, shape, cfg.ga_config(master),
                               cfg.train_config(), cfg.trainer)
        reports.append(report)
        suffix = f"seed{master}"
        outputs[f"test_errors_{suffix}.csv"] = comparison_table_csv(report)
        outputs[f"curve_gabp_{suffix}.csv"] = curve_to_csv(report.gabp.curve)
        outputs[f"curve_bp_{suffix}.csv"] = curve_to_csv(report.bp.curve)
        if cfg.svg:
            outputs[f"error_curves_{suffix}.svg"] = line_chart(
                f"Training error (seed {master})", "iteration",
                "summed squared error",
                [("gabp", [p.iteration for p in report.gabp.curve],
                  [p.sse for p in report.gabp.curve]),
                 ("bp", [p.iteration for p in report.bp.curve],
                  [p.sse for p in report.bp.curve])],
                log_y=True,
            )
            indices = [row.index + 1 for row in report.rows]
            outputs[f"predictions_{suffix}.svg"] = line_chart(
                f"Test predictions (seed {master})", "test sample",
                "safety score",
                [("actual", indices, [row.target for row in report.rows]),
                 ("gabp", indices, [row.gabp_prediction for row in report.rows]),
                 ("bp", indices, [row.bp_prediction for row in report.rows])],
            )

    summaries = [pair_summary(r) for r in reports]
    payload = _report_header("compare", cfg)
    payload.update({
        "data_source": args.train if args.train else "synthetic",
        "pairs": [_pair_json(r) for r in reports],
    })
    if len(summaries) > 1:
        payload["medians"] = summary_medians(summaries)
    outputs["summary.csv"] = summary_table_csv(summaries)
    outputs["comparison.json"] = _json_report(payload)
    _write_outputs(cfg.out, outputs)
    reduction = summaries[-1].relative_error_reduction if len(summaries) == 1 \
        else summary_medians(summaries)["relative_error_reduction"]
    print(f"compared {cfg.seeds} seed pair(s) in "
          f"{time.perf_counter() - started:.2f}s "
          f"(relative error reduction {reduction:.3f}); outputs in {cfg.out}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser,
                      variant: bool = False, trainer: bool = False,
                      svg: bool = False) -> None:
    parser.add_argument("--config", help="INI config file; flags override it")
    parser.add_argument("--seed", type=int, help="master 64-bit seed")
    parser.add_argument("--out", help="output directory (default: out)")
    if variant:
        parser.add_argument("--variant", choices=("gabp", "bp"),
                            help="training variant")
    if trainer:
        parser.add_argument("--trainer", choices=("lm", "gd"),
                            help="gradient trainer")
    if svg:
        parser.add_argument("--svg", action="store_true", default=None,
                            help="also write SVG charts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minewarn",
        description="Genetic-algorithm warm-started network for mine-safety "
                    "early warning",
    )
    parser.add_argument("--version", action="version",
                        version=f"minewarn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset")
    _add_common_flags(p)
    p.add_argument("--samples", type=int, help="total sample count (default 13)")
    p.add_argument("--noise-sd", type=float, dest="noise_sd",
                   help="target noise standard deviation (default 0.02)")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train a model from CSV data")
    _add_common_flags(p, variant=True, trainer=True, svg=True)
    p.add_argument("--train", required=True, help="training CSV with targets")
    p.add_argument("--test", help="optional test CSV with targets")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score new rows with a saved model")
    _add_common_flags(p)
    p.add_argument("--model", required=True, help="model file from train")
    p.add_argument("--input", required=True, help="CSV of feature rows")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="measure a saved model against data")
    _add_common_flags(p)
    p.add_argument("--model", required=True, help="model file from train")
    p.add_argument("--data", required=True, help="CSV with targets")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare",
                       help="run both variants with paired seeds and compare")
    _add_common_flags(p, variant=True, trainer=True, svg=True)
    p.add_argument("--train", help="training CSV (omit to use synthetic data)")
    p.add_argument("--test", help="test CSV (omit to use synthetic data)")
    p.add_argument("--seeds", type=int,
                   help="number of paired seeds to run (default 1)")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataFormatError, TrainingError, SplitMismatchError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())
