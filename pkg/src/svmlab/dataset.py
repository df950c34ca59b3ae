"""Datasets: CSV ingestion, class statistics, distance scales, fold plans.

Labels are always +1/-1 internally. Raw label values from a file are mapped
at load time; which raw value becomes +1 is the caller's choice (or the
minority class by default, which keeps the metric conventions downstream
consistent).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateClass,
    EmptyFile,
    LabelCardinality,
    MalformedRow,
    SingleClass,
    TooFewSamples,
)


class Sample(NamedTuple):
    features: np.ndarray
    label: int


@dataclass
class Dataset:
    """An ordered collection of labelled feature vectors.

    ``x`` is an ``(n, d)`` float array, ``y`` holds +1/-1 per row. Order is
    meaningful: fold assignment and tie-breaking downstream depend on it.
    """

    x: np.ndarray
    y: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        self.x = np.ascontiguousarray(np.asarray(self.x, dtype=np.float64))
        self.y = np.asarray(self.y, dtype=np.int64).ravel()
        if self.x.ndim != 2:
            raise TooFewSamples("feature matrix must be 2-dimensional")
        if self.x.shape[0] != self.y.shape[0]:
            raise MalformedRow(
                f"{self.x.shape[0]} feature rows vs {self.y.shape[0]} labels"
            )
        if self.x.shape[0] < 2:
            raise TooFewSamples("a dataset needs at least 2 samples")
        if self.x.shape[1] < 1:
            raise MalformedRow("samples need at least one feature")
        bad = set(np.unique(self.y)) - {-1, 1}
        if bad:
            raise LabelCardinality(f"labels must be +1/-1, got extra {sorted(bad)}")

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    def __len__(self) -> int:
        return self.n_samples

    def __iter__(self) -> Iterator[Sample]:
        for i in range(self.n_samples):
            yield Sample(self.x[i], int(self.y[i]))

    def subset(self, indices: Sequence[int], name: str = "") -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.x[idx], self.y[idx], name or self.name)


@dataclass(frozen=True)
class ClassStats:
    """Per-class counts with the majority listed first."""

    n_majority: int
    n_minority: int
    majority_label: int

    @property
    def n_total(self) -> int:
        return self.n_majority + self.n_minority

    @property
    def minority_label(self) -> int:
        return -self.majority_label

    @property
    def imbalance_ratio(self) -> float:
        # Derived from the integer counts, never from stored floats.
        return self.n_majority / self.n_minority


@dataclass(frozen=True)
class DistanceRange:
    """Intra-class Euclidean distance extremes.

    ``per_class_min``/``per_class_max`` are ordered (positive class, negative
    class) and report raw values, so a duplicated point shows up as a 0 there.
    ``min_intra`` skips zero distances whenever any nonzero pair exists;
    it is the value safe to turn into a kernel width.
    """

    min_intra: float
    max_intra: float
    per_class_min: tuple[float, float]
    per_class_max: tuple[float, float]


@dataclass(frozen=True)
class FoldPlan:
    """Stratified assignment of sample index to fold number."""

    k: int
    assignments: np.ndarray
    seed: int

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)


def load_csv(
    path: str | Path,
    label_column: int | str,
    positive_label: str | None = None,
) -> Dataset:
    """Read a numeric CSV into a :class:`Dataset`.

    A header row is assumed when any non-label cell of the first row fails to
    parse as a number. ``label_column`` may be a column index (negatives
    allowed) or a header name. The file must contain exactly two distinct
    label values; ``positive_label`` picks which becomes +1. When omitted the
    minority value is used, ties resolved in favor of the value seen first.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyFile(f"{path}: no rows")

    header: list[str] | None = None
    label_idx = label_column if isinstance(label_column, int) else None
    first = rows[0]
    if label_idx is not None and -len(first) <= label_idx < len(first):
        probe = label_idx % len(first)
    else:
        probe = len(first)  # nothing excluded
    if _row_has_text(first, exclude=probe):
        header = [c.strip() for c in first]
        rows = rows[1:]
        if not rows:
            raise EmptyFile(f"{path}: header only, no data rows")
    if isinstance(label_column, str):
        if header is None:
            raise MalformedRow(
                f"{path}: label column {label_column!r} needs a header row"
            )
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise MalformedRow(
                f"{path}: no column named {label_column!r} in header"
            ) from None
    assert label_idx is not None

    width = len(rows[0])
    if not -width <= label_idx < width:
        raise MalformedRow(f"{path}: label column {label_idx} out of range")
    label_idx %= width

    features: list[list[float]] = []
    raw_labels: list[str] = []
    for lineno, row in enumerate(rows, start=2 if header else 1):
        if len(row) != width:
            raise MalformedRow(f"{path}:{lineno}: expected {width} cells, got {len(row)}")
        raw_labels.append(row[label_idx].strip())
        feat = []
        for j, cell in enumerate(row):
            if j == label_idx:
                continue
            try:
                feat.append(float(cell))
            except ValueError:
                raise MalformedRow(
                    f"{path}:{lineno}: non-numeric feature {cell!r}"
                ) from None
        features.append(feat)

    values = sorted(set(raw_labels), key=raw_labels.index)
    if len(values) != 2:
        raise LabelCardinality(
            f"{path}: need exactly 2 label values, found {len(values)}: {values[:5]}"
        )
    if positive_label is None:
        counts = {v: raw_labels.count(v) for v in values}
        positive_label = min(values, key=lambda v: (counts[v], values.index(v)))
    elif positive_label not in values:
        raise LabelCardinality(
            f"{path}: positive label {positive_label!r} not among {values}"
        )
    y = np.array([1 if v == positive_label else -1 for v in raw_labels])
    return Dataset(np.array(features, dtype=np.float64), y, name=path.stem)


def save_csv(ds: Dataset, path: str | Path, label_name: str = "label") -> None:
    """Write ``ds`` with a header and the label as the last column.

    Features are written with ``repr`` so a reload is bit-exact.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(ds.dim)] + [label_name])
        for sample in ds:
            writer.writerow(
                [repr(float(v)) for v in sample.features] + [str(sample.label)]
            )


def class_stats(ds: Dataset) -> ClassStats:
    """Count both classes; majority first, ties go to +1."""
    n_pos = int(np.sum(ds.y == 1))
    n_neg = ds.n_samples - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("both classes required for class statistics")
    if n_pos >= n_neg:
        return ClassStats(n_pos, n_neg, 1)
    return ClassStats(n_neg, n_pos, -1)


def intra_class_distance_range(ds: Dataset) -> DistanceRange:
    """Exact min/max pairwise Euclidean distances within each class."""
    per_min: list[float] = []
    per_max: list[float] = []
    nonzero_mins: list[float] = []
    for label in (1, -1):
        pts = ds.x[ds.y == label]
        if pts.shape[0] < 2:
            raise DegenerateClass(
                f"class {label:+d} has {pts.shape[0]} sample(s); need 2 for distances"
            )
        d = _pairwise_distances(pts)
        per_min.append(float(d.min()))
        per_max.append(float(d.max()))
        nz = d[d > 0.0]
        if nz.size:
            nonzero_mins.append(float(nz.min()))
    max_intra = max(per_max)
    min_intra = min(nonzero_mins) if nonzero_mins else 0.0
    return DistanceRange(
        min_intra=min_intra,
        max_intra=max_intra,
        per_class_min=(per_min[0], per_min[1]),
        per_class_max=(per_max[0], per_max[1]),
    )


def stratified_folds(ds: Dataset, k: int, seed: int = 0) -> FoldPlan:
    """Assign samples to ``k`` folds, round-robin within each class.

    Each class is shuffled with its own slice of a seeded generator, then
    dealt out in sequence. The deal position carries over from one class to
    the next so small classes do not pile up in fold 0; with ``N2 >= k``
    every fold sees both classes, and per-class fold sizes differ by at
    most one. Deterministic for a given ``(k, seed)``.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > ds.n_samples:
        raise TooFewSamples(f"k={k} folds but only {ds.n_samples} samples")
    rng = np.random.default_rng(seed)
    assignments = np.empty(ds.n_samples, dtype=np.int64)
    position = 0
    for label in (1, -1):
        idx = np.flatnonzero(ds.y == label)
        rng.shuffle(idx)
        for i in idx:
            assignments[i] = position % k
            position += 1
    return FoldPlan(k=k, assignments=assignments, seed=seed)


def _row_has_text(row: list[str], exclude: int) -> bool:
    for j, cell in enumerate(row):
        if j == exclude:
            continue
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _pairwise_distances(pts: np.ndarray) -> np.ndarray:
    """Condensed (upper-triangle) Euclidean distances."""
    sq = np.sum(pts * pts, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
    iu = np.triu_indices(pts.shape[0], k=1)
    return np.sqrt(np.maximum(d2[iu], 0.0))
