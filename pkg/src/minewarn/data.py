"""Sample ingestion, CSV round-tripping, and min-max normalization."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataFormatError
from .schema import IndicatorSchema

TARGET_COLUMN = "y"


@dataclass(frozen=True)
class Sample:
    """One observation: a feature vector plus an optional safety score."""

    features: np.ndarray
    target: float | None = None

    def __post_init__(self) -> None:
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 1:
            raise ValueError(f"features must be a flat vector, got shape {feats.shape}")
        object.__setattr__(self, "features", feats)
        if self.target is not None:
            t = float(self.target)
            if not (0.0 <= t <= 1.0):
                raise ValueError(f"target must lie in [0, 1], got {t}")
            object.__setattr__(self, "target", t)


def features_matrix(samples: Sequence[Sample]) -> np.ndarray:
    """Stack sample features into an (n_samples, n_features) array."""
    if not samples:
        raise ValueError("no samples given")
    return np.stack([s.features for s in samples])


def targets_vector(samples: Sequence[Sample]) -> np.ndarray:
    values = []
    for i, s in enumerate(samples):
        if s.target is None:
            raise ValueError(f"sample {i} has no target")
        values.append(s.target)
    return np.asarray(values, dtype=np.float64)


@dataclass(frozen=True)
class NormStats:
    """Per-column min-max bounds plus orientation, fitted on training data."""

    x_min: np.ndarray
    x_max: np.ndarray
    orientations: tuple[str, ...]

    def __post_init__(self) -> None:
        lo = np.asarray(self.x_min, dtype=np.float64)
        hi = np.asarray(self.x_max, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("x_min and x_max must be flat vectors of equal length")
        if len(self.orientations) != lo.size:
            raise ValueError("orientations must match the number of columns")
        if np.any(hi < lo):
            raise ValueError("x_max must be >= x_min in every column")
        object.__setattr__(self, "x_min", lo)
        object.__setattr__(self, "x_max", hi)
        object.__setattr__(self, "orientations", tuple(self.orientations))

    def __len__(self) -> int:
        return int(self.x_min.size)


def fit_normalization(samples: Sequence[Sample], schema: IndicatorSchema) -> NormStats:
    """Compute per-column min/max over ``samples`` using the schema's orientations."""
    if not samples:
        raise ValueError("cannot fit normalization on an empty sample list")
    X = features_matrix(samples)
    if X.shape[1] != len(schema):
        raise ValueError(
            f"samples have {X.shape[1]} features but the schema lists {len(schema)}"
        )
    return NormStats(X.min(axis=0), X.max(axis=0), schema.orientations)


def _apply_matrix(stats: NormStats, X: np.ndarray) -> np.ndarray:
    """Min-max transform a feature matrix, one row per sample.

    Benefit columns map x to (x - min) / (max - min), cost columns to
    (max - x) / (max - min). Degenerate columns (max equal to min) map to a
    neutral 0.5, and everything is clamped into [0, 1] afterward so values
    outside the fitted range cannot escape the unit interval.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(stats):
        raise ValueError(f"expected a matrix with {len(stats)} columns, got shape {X.shape}")
    span = stats.x_max - stats.x_min
    benefit = np.array([o == "benefit" for o in stats.orientations])
    numerator = np.where(benefit, X - stats.x_min, stats.x_max - X)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = numerator / span
    scaled = np.where(span == 0.0, 0.5, scaled)
    return np.clip(scaled, 0.0, 1.0)


def apply_normalization(stats: NormStats, sample: Sample) -> Sample:
    """Return a copy of ``sample`` with min-max scaled features.

    Output features are always benefit-oriented: after scaling, larger is
    safer in every column regardless of the raw orientation.
    """
    row = _apply_matrix(stats, sample.features[None, :])[0]
    return Sample(row, sample.target)


def normalize_samples(stats: NormStats, samples: Sequence[Sample]) -> list[Sample]:
    return [apply_normalization(stats, s) for s in samples]


def _fmt(value: float) -> str:
    return repr(float(value))


def samples_to_csv(samples: Sequence[Sample], schema: IndicatorSchema,
                   include_target: bool) -> str:
    """Render samples as CSV text with a header row."""
    header = ",".join(schema.codes + ((TARGET_COLUMN,) if include_target else ()))
    lines = [header]
    for i, s in enumerate(samples):
        if s.features.size != len(schema):
            raise ValueError(
                f"sample {i} has {s.features.size} features, schema lists {len(schema)}"
            )
        fields = [_fmt(v) for v in s.features]
        if include_target:
            if s.target is None:
                raise ValueError(f"sample {i} has no target to write")
            fields.append(_fmt(s.target))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def save_samples(path: str | Path, samples: Sequence[Sample], schema: IndicatorSchema,
                 include_target: bool) -> None:
    Path(path).write_text(samples_to_csv(samples, schema, include_target),
                          encoding="utf-8")


def _looks_like_header(fields: list[str]) -> bool:
    try:
        float(fields[0])
    except ValueError:
        return True
    return False


def load_samples(path: str | Path, schema: IndicatorSchema,
                 has_target: bool = False) -> list[Sample]:
    """Parse a CSV data file into samples.

    The file may start with a header row naming the indicator codes (plus a
    trailing ``y`` column when targets are present). Both LF and CRLF line
    endings are accepted. Errors report 1-based file line numbers, and
    non-numeric fields also report the offending column.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataFormatError(f"data file not found: {path}") from None

    expected_codes = schema.codes + ((TARGET_COLUMN,) if has_target else ())
    n_fields = len(expected_codes)
    samples: list[Sample] = []
    first_content_seen = False
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if not first_content_seen:
            first_content_seen = True
            if _looks_like_header(fields):
                if tuple(fields) != expected_codes:
                    raise DataFormatError(
                        f"row {line_no}: header {fields!r} does not match the expected "
                        f"columns {list(expected_codes)!r}"
                    )
                continue
        if len(fields) != n_fields:
            raise DataFormatError(
                f"row {line_no}: expected {n_fields} fields, found {len(fields)}"
            )
        values = []
        for col, field in zip(expected_codes, fields):
            try:
                values.append(float(field))
            except ValueError:
                raise DataFormatError(
                    f"row {line_no}, column {col}: not a number: {field!r}"
                ) from None
        if has_target:
            target = values[-1]
            if not (0.0 <= target <= 1.0):
                raise DataFormatError(
                    f"row {line_no}: target must lie in [0, 1], got {target}"
                )
            samples.append(Sample(np.array(values[:-1]), target))
        else:
            samples.append(Sample(np.array(values)))
    return samples
