"""Binary classification metrics and stratified cross-validation.

The positive class is the minority class unless a caller overrides it;
sensitivity is then minority recall and specificity majority recall,
which is the reading that stays informative under imbalance. Metrics
whose denominator is zero are reported as absent, never as 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, FoldPlan, class_stats
from .errors import (
    EmptyMatrix,
    LengthMismatch,
    SingleClass,
    SvmlabError,
    TooFewSamples,
)
from .svm import SvmModel, TrainConfig, predict_many, train


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp,
            self.fn + other.fn,
            self.fp + other.fp,
            self.tn + other.tn,
        )


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    sensitivity: float | None
    specificity: float | None
    support: int


def confusion(
    truth: np.ndarray, predicted: np.ndarray, positive: int = 1
) -> ConfusionMatrix:
    truth = np.asarray(truth).ravel()
    predicted = np.asarray(predicted).ravel()
    if truth.shape != predicted.shape:
        raise LengthMismatch(f"{truth.size} truths vs {predicted.size} predictions")
    t_pos = truth == positive
    p_pos = predicted == positive
    return ConfusionMatrix(
        tp=int(np.sum(t_pos & p_pos)),
        fn=int(np.sum(t_pos & ~p_pos)),
        fp=int(np.sum(~t_pos & p_pos)),
        tn=int(np.sum(~t_pos & ~p_pos)),
    )


def metrics(cm: ConfusionMatrix) -> Metrics:
    if cm.total == 0:
        raise EmptyMatrix("no observations to compute metrics from")
    pos = cm.tp + cm.fn
    neg = cm.fp + cm.tn
    return Metrics(
        accuracy=(cm.tp + cm.tn) / cm.total,
        sensitivity=cm.tp / pos if pos else None,
        specificity=cm.tn / neg if neg else None,
        support=cm.total,
    )


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    confusion: ConfusionMatrix | None
    metrics: Metrics | None
    error: str | None


@dataclass(frozen=True)
class CvResult:
    pooled_confusion: ConfusionMatrix
    pooled: Metrics | None
    folds: tuple[FoldOutcome, ...]
    partial: bool

    @property
    def accuracy(self) -> float | None:
        return None if self.pooled is None else self.pooled.accuracy


def cross_validate(
    ds: Dataset,
    cfg: TrainConfig,
    folds: FoldPlan,
    positive: int | None = None,
) -> CvResult:
    """Train on each fold complement, score the held-out fold, pool counts.

    Pooling sums confusion counts over folds (micro-averaging), so every
    held-out sample weighs the same regardless of fold size. A fold whose
    training partition cannot be fitted (single class, too small, solver
    failure) is recorded as a fold error; the result is then flagged
    partial and pooled over the remaining folds only.
    """
    if folds.assignments.shape[0] != ds.n_samples:
        raise LengthMismatch("fold plan was built for a different dataset size")
    if positive is None:
        positive = class_stats(ds).minority_label
    outcomes: list[FoldOutcome] = []
    pooled_cm = ConfusionMatrix(0, 0, 0, 0)
    for fold in range(folds.k):
        train_idx = folds.train_indices(fold)
        test_idx = folds.test_indices(fold)
        try:
            model = _fit_fold(ds, cfg, train_idx)
        except SvmlabError as exc:
            outcomes.append(
                FoldOutcome(fold, None, None, f"{type(exc).__name__}: {exc}")
            )
            continue
        preds = predict_many(model, ds.x[test_idx])
        cm = confusion(ds.y[test_idx], preds, positive=positive)
        outcomes.append(FoldOutcome(fold, cm, metrics(cm), None))
        pooled_cm = pooled_cm + cm
    partial = any(o.error is not None for o in outcomes)
    pooled = metrics(pooled_cm) if pooled_cm.total > 0 else None
    return CvResult(
        pooled_confusion=pooled_cm,
        pooled=pooled,
        folds=tuple(outcomes),
        partial=partial,
    )


def _fit_fold(ds: Dataset, cfg: TrainConfig, train_idx: np.ndarray) -> SvmModel:
    labels = set(np.unique(ds.y[train_idx]).tolist())
    if len(labels) < 2:
        # Raise before Dataset construction so the recorded reason is the
        # informative one (a 1-sample partition is also always one class).
        raise SingleClass("training partition holds a single class")
    if train_idx.size < 2:
        raise TooFewSamples("training partition smaller than 2 samples")
    return train(ds.subset(train_idx), cfg)
