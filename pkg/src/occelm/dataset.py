"""Dataset ingestion, artificial data generators, normalization, and splits.

A Dataset is a row-major float matrix with optional boolean target labels
(True = target, False = outlier). CSV files use comma separation with an
optional header line (auto-detected: the first line fails numeric parsing)
and the label tokens "+1"/"1"/"target" for targets, "-1"/"0"/"outlier" for
outliers (word tokens case-insensitive).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyFile,
    MissingLabels,
    NoOutliers,
    NoTargets,
    ParseError,
    RaggedRows,
    TooFewSamples,
    UnknownLabelToken,
)

_TARGET_TOKENS = {"+1", "1", "target"}
_OUTLIER_TOKENS = {"-1", "0", "outlier"}


def round_half_up(x: float) -> int:
    """Round to nearest integer with halves going up (MATLAB-style)."""
    return int(math.floor(x + 0.5))


@dataclass
class Dataset:
    """N x n sample matrix with optional per-row target labels."""

    samples: np.ndarray
    labels: np.ndarray | None = None
    feature_names: list[str] | None = None

    def __post_init__(self) -> None:
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if self.samples.ndim != 2 or self.samples.size == 0:
            raise DimensionMismatch("samples must form a nonempty 2-D matrix")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples contain non-finite values")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=bool)
            if self.labels.shape != (self.samples.shape[0],):
                raise DimensionMismatch(
                    f"labels length {self.labels.shape} does not match "
                    f"{self.samples.shape[0]} rows"
                )

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def feature_count(self) -> int:
        return self.samples.shape[1]


@dataclass
class ZScoreStats:
    """Per-feature mean and sample standard deviation (ddof=1)."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=float).ravel()
        self.std = np.asarray(self.std, dtype=float).ravel()
        if self.mean.shape != self.std.shape:
            raise DimensionMismatch("mean and std lengths differ")
        if np.any(self.std < 0):
            raise ValueError("std entries must be >= 0")

    @property
    def feature_count(self) -> int:
        return self.mean.shape[0]


def identity_stats(n: int) -> ZScoreStats:
    """Stats under which zscore_apply is the identity map."""
    return ZScoreStats(np.zeros(n), np.ones(n))


@dataclass
class SplitPlan:
    """Repeated-run experiment schedule for target/outlier splits."""

    run_count: int = 20
    target_train_fraction: float = 0.5
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.run_count < 1:
            raise ValueError("run_count must be >= 1")
        if not 0.0 < self.target_train_fraction <= 1.0:
            raise ValueError("target_train_fraction must lie in (0, 1]")


def _parse_label(token: str, row: int) -> bool:
    raw = token.strip()
    key = raw.lower() if raw.lower() in ("target", "outlier") else raw
    if key in _TARGET_TOKENS:
        return True
    if key in _OUTLIER_TOKENS:
        return False
    raise UnknownLabelToken(f"row {row}: unknown label token {raw!r}")


def load_csv(path: str, label_column: int | None = None) -> Dataset:
    """Read a CSV file into a Dataset.

    label_column, when given, is the 0-based index of the column mapped to
    target/outlier labels (negative indices count from the end). Header
    auto-detection: if any feature cell of the first line fails numeric
    parsing, the line is treated as column names.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyFile(f"{path}: no rows")

    width = len(rows[0])
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise RaggedRows(
                f"{path}: line {lineno} has {len(row)} cells, expected {width}"
            )
    label_idx = None
    if label_column is not None:
        label_idx = label_column if label_column >= 0 else width + label_column
        if not 0 <= label_idx < width:
            raise DimensionMismatch(
                f"label column {label_column} outside 0..{width - 1}"
            )

    feature_cols = [j for j in range(width) if j != label_idx]
    if not feature_cols:
        raise DimensionMismatch("no feature columns left after label removal")

    def numeric(row: list[str]) -> bool:
        for j in feature_cols:
            try:
                float(row[j])
            except ValueError:
                return False
        return True

    names = None
    start = 0
    if not numeric(rows[0]):
        names = [rows[0][j].strip() for j in feature_cols]
        start = 1
    body = rows[start:]
    if not body:
        raise EmptyFile(f"{path}: header only, no data rows")

    samples = np.empty((len(body), len(feature_cols)))
    labels = np.empty(len(body), dtype=bool) if label_idx is not None else None
    for i, row in enumerate(body):
        lineno = start + i + 1
        for out_j, j in enumerate(feature_cols):
            try:
                value = float(row[j])
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}, column {j + 1}: "
                    f"cannot parse {row[j]!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise ParseError(
                    f"{path}: line {lineno}, column {j + 1}: non-finite value"
                )
            samples[i, out_j] = value
        if labels is not None:
            labels[i] = _parse_label(row[label_idx], lineno)
    return Dataset(samples, labels, names)


def write_csv(data: Dataset, path: str) -> None:
    """Write a Dataset in the same CSV dialect load_csv reads.

    Labels, when present, become a trailing +1/-1 column. Floats use 17
    significant digits so a round-trip preserves every bit.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if data.feature_names is not None:
            header = list(data.feature_names)
            if data.labels is not None:
                header.append("label")
            writer.writerow(header)
        for i in range(data.sample_count):
            row = [f"{v:.17g}" for v in data.samples[i]]
            if data.labels is not None:
                row.append("+1" if data.labels[i] else "-1")
            writer.writerow(row)


def zscore_fit(train: Dataset) -> ZScoreStats:
    """Per-feature mean and sample std (ddof=1) of the training rows."""
    if train.sample_count < 2:
        raise TooFewSamples("zscore_fit needs at least 2 rows for a sample std")
    return ZScoreStats(
        train.samples.mean(axis=0), train.samples.std(axis=0, ddof=1)
    )


def zscore_apply(data: Dataset, stats: ZScoreStats) -> Dataset:
    """Map each cell to (x - mean) / std; zero-std features map to 0."""
    if data.feature_count != stats.feature_count:
        raise DimensionMismatch(
            f"data has {data.feature_count} features, stats {stats.feature_count}"
        )
    safe = np.where(stats.std > 0, stats.std, 1.0)
    z = (data.samples - stats.mean) / safe
    z[:, stats.std == 0] = 0.0
    return Dataset(z, data.labels, data.feature_names)


@dataclass
class MinMaxStats:
    """Per-feature range for the optional [0, 1] rescale."""

    lo: np.ndarray
    hi: np.ndarray


def minmax_fit(train: Dataset) -> MinMaxStats:
    """Per-feature min/max of the training rows (experimental alternative
    to z-score; the benchmark protocol itself always uses z-score)."""
    return MinMaxStats(train.samples.min(axis=0), train.samples.max(axis=0))


def minmax_apply(data: Dataset, stats: MinMaxStats) -> Dataset:
    """Map each cell to (x - lo) / (hi - lo); constant features map to 0."""
    lo = np.asarray(stats.lo, dtype=float)
    span = np.asarray(stats.hi, dtype=float) - lo
    if lo.shape[0] != data.feature_count:
        raise DimensionMismatch("minmax stats length mismatch")
    safe = np.where(span > 0, span, 1.0)
    out = (data.samples - lo) / safe
    out[:, span == 0] = 0.0
    return Dataset(out, data.labels, data.feature_names)


def run_rng(rng_seed: int, run_index: int, *extra: int) -> np.random.Generator:
    """Deterministic generator for (seed, run) and optional sub-streams."""
    return np.random.default_rng([rng_seed, run_index, *extra])


def occ_split(
    data: Dataset, plan: SplitPlan, run_index: int
) -> tuple[Dataset, Dataset]:
    """One repeated-run split: random targets for training, the rest plus
    all outliers for testing.

    The training half keeps no labels (one-class training); the test half
    keeps labels. Row selection depends only on (rng_seed, run_index).
    """
    if data.labels is None:
        raise MissingLabels("occ_split needs a labeled dataset")
    if not 0 <= run_index < plan.run_count:
        raise ValueError(f"run_index {run_index} outside 0..{plan.run_count - 1}")
    target_idx = np.flatnonzero(data.labels)
    outlier_idx = np.flatnonzero(~data.labels)
    if target_idx.size < 2:
        raise NoTargets("need at least 2 target rows to split")
    if outlier_idx.size < 1:
        raise NoOutliers("need at least 1 outlier row")

    k = round_half_up(plan.target_train_fraction * target_idx.size)
    k = min(max(k, 1), target_idx.size)
    rng = run_rng(plan.rng_seed, run_index)
    perm = rng.permutation(target_idx.size)
    chosen = np.sort(target_idx[perm[:k]])
    rest = np.sort(target_idx[perm[k:]])

    train = Dataset(data.samples[chosen].copy(), None, data.feature_names)
    test_idx = np.sort(np.concatenate([rest, outlier_idx]))
    test = Dataset(
        data.samples[test_idx].copy(),
        data.labels[test_idx].copy(),
        data.feature_names,
    )
    return train, test


def gen_banana(
    count: int, noise_std: float = 1.0, seed: int = 0, *, lobes: int = 1
) -> Dataset:
    """Banana-shaped 2-D data: a half-annulus arc of radius 5 with angles
    uniform in [-pi/2, pi/2], plus isotropic Gaussian noise.

    lobes=2 adds a mirrored copy offset by (-5, 2.5); the one-class
    experiments use the single-lobe default.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    if lobes not in (1, 2):
        raise ValueError("lobes must be 1 or 2")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(-np.pi / 2, np.pi / 2, count)
    pts = np.column_stack([5.0 * np.cos(theta), 5.0 * np.sin(theta)])
    if lobes == 2:
        half = count // 2
        pts[half:, 0] = -pts[half:, 0] - 5.0
        pts[half:, 1] += 2.5
    pts += rng.normal(0.0, noise_std, (count, 2)) if noise_std > 0 else 0.0
    return Dataset(pts, None, ["x", "y"])


def gen_ring(
    count: int, radius: float = 1.0, noise_std: float = 0.1, seed: int = 0
) -> Dataset:
    """Ring-shaped 2-D data: angles uniform in [0, 2*pi), radii
    radius + Normal(0, noise_std)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be > 0")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    r = radius + (rng.normal(0.0, noise_std, count) if noise_std > 0 else 0.0)
    return Dataset(
        np.column_stack([r * np.cos(theta), r * np.sin(theta)]), None, ["x", "y"]
    )
