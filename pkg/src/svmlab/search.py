"""Hyperparameter search built around two one-dimensional passes.

The expensive part of tuning an RBF model is the two-dimensional (C,
sigma^2) grid. Two observations collapse it: with sigma^2 far above the
squared data scale the RBF model behaves like a linear one at an
effective penalty ``C_tilde = C / sigma^2``, and sensible sigma^2 values
are bracketed by the intra-class distance extremes. So the tuner first
sweeps C on a linear kernel, keeps every C tied with the best as a
``C_tilde`` line, then walks each line through the data-derived sigma^2
range evaluating ``C = C_tilde * sigma^2``. Cost grows linearly in the
grid resolution instead of quadratically.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import ClassStats, Dataset, DistanceRange, FoldPlan, intra_class_distance_range
from .errors import AllCoincident, RegimeViolation, SvmlabError
from .kernels import KernelSpec
from .metrics import CvResult, cross_validate
from .qp import SolverConfig
from .svm import TrainConfig, predict_many, train

DEFAULT_LOG10_C = tuple(float(e) for e in range(-7, 8))
DEFAULT_LOG10_SIGMA2 = tuple(float(e) for e in range(-8, 9))

SIGMA2_FLOOR = 1e-3
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CSweepSpec:
    log10_c_values: tuple[float, ...] = DEFAULT_LOG10_C

    def c_values(self) -> tuple[float, ...]:
        return tuple(10.0**e for e in self.log10_c_values)


@dataclass(frozen=True)
class Sigma2Range:
    lo: float
    hi: float
    source: str = "manual"

    def __post_init__(self) -> None:
        if not 0.0 < self.lo <= self.hi:
            raise ValueError(f"need 0 < lo <= hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class LineSearchSpec:
    c_tilde_values: tuple[float, ...]
    sigma2_values: tuple[float, ...]


@dataclass(frozen=True)
class Candidate:
    c: float
    sigma2: float | None
    cv: CvResult | None
    error: str | None = None


@dataclass(frozen=True)
class TuneResult:
    candidates: tuple[Candidate, ...]
    best: int
    evaluations: int
    fold_seed: int
    selection_metric: str
    notes: tuple[str, ...] = ()

    @property
    def best_candidate(self) -> Candidate:
        if self.best < 0:
            raise ValueError("result holds no candidates")
        return self.candidates[self.best]

    @property
    def succeeded(self) -> bool:
        return self.best >= 0 and candidate_score(
            self.best_candidate, self.selection_metric
        ) is not None


@dataclass(frozen=True)
class EquivalenceReport:
    c_tilde: float
    pair_agreement: float
    linear_agreement: tuple[float, float]


@dataclass(frozen=True)
class LineTuneOutcome:
    """Everything the two-pass tuner produced, including the pieces."""

    sweep: TuneResult
    c_tilde_values: tuple[float, ...]
    sigma2_range: Sigma2Range
    search: TuneResult
    grid_equivalent_evaluations: int


def candidate_score(cand: Candidate, metric: str = "accuracy") -> float | None:
    """Scalar score used for ranking; None when the candidate has none."""
    if cand.cv is None or cand.cv.pooled is None:
        return None
    pooled = cand.cv.pooled
    if metric == "accuracy":
        return pooled.accuracy
    if metric == "balanced":
        if pooled.sensitivity is None or pooled.specificity is None:
            return None
        return 0.5 * (pooled.sensitivity + pooled.specificity)
    raise ValueError(f"unknown selection metric {metric!r}")


def select_best(candidates: Sequence[Candidate], metric: str = "accuracy") -> int:
    """Total order: score, then sensitivity, then smaller C, then smaller sigma^2.

    Candidates without a score rank below everything; absent sensitivity
    ranks below any defined one; a missing sigma^2 (linear kernel) counts
    as the smallest. First position wins residual ties, and candidate
    order is deterministic, so the selection is too.
    """
    if not candidates:
        raise ValueError("no candidates to select from")

    def key(i: int):
        cand = candidates[i]
        score = candidate_score(cand, metric)
        if score is None:
            return (-math.inf, -math.inf, 0.0, 0.0)
        sens = cand.cv.pooled.sensitivity  # type: ignore[union-attr]
        return (
            score,
            sens if sens is not None else -1.0,
            -cand.c,
            -(cand.sigma2 if cand.sigma2 is not None else 0.0),
        )

    return max(range(len(candidates)), key=key)


def linear_c_sweep(
    ds: Dataset,
    folds: FoldPlan,
    spec: CSweepSpec = CSweepSpec(),
    variant: str = "l1",
    positive: int | None = None,
    metric: str = "accuracy",
    solver: SolverConfig = SolverConfig(),
) -> TuneResult:
    """Cross-validate a linear kernel over a log-spaced C ladder."""
    cs = spec.c_values()
    candidates = _evaluate(
        ds,
        folds,
        [(c, None) for c in cs],
        variant=variant,
        positive=positive,
        solver=solver,
    )
    best = select_best(candidates, metric)
    notes: tuple[str, ...] = ()
    if candidate_score(candidates[best], metric) is not None and len(cs) > 1:
        if candidates[best].c in (cs[0], cs[-1]):
            notes = (
                f"best C={candidates[best].c:g} sits on the sweep boundary; "
                "consider widening the range",
            )
    return TuneResult(
        candidates=tuple(candidates),
        best=best,
        evaluations=len(candidates),
        fold_seed=folds.seed,
        selection_metric=metric,
        notes=notes,
    )


def c_tilde_candidates(
    sweep: TuneResult, cap: int = 4, tie_tolerance: float = TIE_TOLERANCE
) -> tuple[float, ...]:
    """All C values tied with the sweep's best score, smallest first.

    Every tied C defines one search line; ``cap`` bounds how many lines
    the second pass will walk.
    """
    if sweep.best < 0:
        return ()
    best_score = candidate_score(sweep.best_candidate, sweep.selection_metric)
    if best_score is None:
        return ()
    tied = [
        cand.c
        for cand in sweep.candidates
        if (score := candidate_score(cand, sweep.selection_metric)) is not None
        and score >= best_score - tie_tolerance
    ]
    return tuple(sorted(tied)[:cap])


def sigma2_range_from_data(dr: DistanceRange) -> Sigma2Range:
    """Bracket useful kernel widths by the intra-class distance extremes.

    The lower edge is the decade below the smallest nonzero squared
    distance, clamped at 1e-3; the upper edge is the decade above the
    largest. A range that collapses to one point is widened a decade on
    both sides so there is something to search.
    """
    if not dr.max_intra > 0.0:
        raise AllCoincident("all intra-class distances are zero")
    hi = 10.0 ** _ceil_log10(dr.max_intra**2)
    if dr.min_intra > 0.0:
        lo = max(SIGMA2_FLOOR, 10.0 ** _floor_log10(dr.min_intra**2))
    else:
        lo = SIGMA2_FLOOR
    if lo >= hi:
        mid = max(lo, hi)
        return Sigma2Range(mid / 10.0, mid * 10.0, source="data")
    return Sigma2Range(lo, hi, source="data")


def sigma2_grid(srange: Sigma2Range, spacing_log10: float = 1.0) -> tuple[float, ...]:
    """Log-spaced sigma^2 values covering the range, endpoints included."""
    if not spacing_log10 > 0.0:
        raise ValueError("spacing_log10 must be positive")
    lo_e = math.log10(srange.lo)
    hi_e = math.log10(srange.hi)
    count = int(math.floor((hi_e - lo_e) / spacing_log10 + 1e-9)) + 1
    return tuple(10.0 ** (lo_e + spacing_log10 * k) for k in range(count))


def line_search(
    ds: Dataset,
    spec: LineSearchSpec,
    folds: FoldPlan,
    variant: str = "l1",
    positive: int | None = None,
    metric: str = "accuracy",
    solver: SolverConfig = SolverConfig(),
) -> TuneResult:
    """Walk each C_tilde line across the sigma^2 grid with C = C_tilde * sigma^2.

    Points where two lines intersect the same (C, sigma^2) cell are
    evaluated once; ``evaluations`` counts actual model fits, which is the
    honest number to compare against a full grid.
    """
    tasks: list[tuple[float, float]] = []
    seen: set[tuple[float, float]] = set()
    for c_tilde in spec.c_tilde_values:
        for s2 in spec.sigma2_values:
            c = c_tilde * s2
            key = (round(math.log10(c), 9), round(math.log10(s2), 9))
            if key in seen:
                continue
            seen.add(key)
            tasks.append((c, s2))
    candidates = _evaluate(
        ds, folds, tasks, variant=variant, positive=positive, solver=solver
    )
    if not candidates:
        return TuneResult((), -1, 0, folds.seed, metric, notes=("nothing to evaluate",))
    best = select_best(candidates, metric)
    notes: tuple[str, ...] = ()
    best_cand = candidates[best]
    if candidate_score(best_cand, metric) is not None and len(spec.sigma2_values) > 1:
        if best_cand.sigma2 in (spec.sigma2_values[0], spec.sigma2_values[-1]):
            notes = (
                f"best sigma2={best_cand.sigma2:g} sits on the grid boundary; "
                "consider widening the range",
            )
    return TuneResult(
        candidates=tuple(candidates),
        best=best,
        evaluations=len(candidates),
        fold_seed=folds.seed,
        selection_metric=metric,
        notes=notes,
    )


def grid_search(
    ds: Dataset,
    folds: FoldPlan,
    c_values: Sequence[float] | None = None,
    sigma2_values: Sequence[float] | None = None,
    variant: str = "l1",
    positive: int | None = None,
    metric: str = "accuracy",
    solver: SolverConfig = SolverConfig(),
) -> TuneResult:
    """Exhaustive Cartesian baseline the line search is measured against."""
    if c_values is None:
        c_values = [10.0**e for e in DEFAULT_LOG10_C]
    if sigma2_values is None:
        sigma2_values = [10.0**e for e in DEFAULT_LOG10_SIGMA2]
    tasks = [(c, s2) for c in c_values for s2 in sigma2_values]
    candidates = _evaluate(
        ds, folds, tasks, variant=variant, positive=positive, solver=solver
    )
    best = select_best(candidates, metric)
    return TuneResult(
        candidates=tuple(candidates),
        best=best,
        evaluations=len(candidates),
        fold_seed=folds.seed,
        selection_metric=metric,
    )


def refine_line_search(
    ds: Dataset,
    result: TuneResult,
    folds: FoldPlan,
    spacing_log10: float = 0.25,
    variant: str = "l1",
    positive: int | None = None,
    solver: SolverConfig = SolverConfig(),
) -> TuneResult:
    """Re-search one decade around the incumbent sigma^2 at finer spacing.

    Stays on the incumbent's C_tilde line and skips cells already
    evaluated. Returns a merged result with the selection re-run.
    """
    incumbent = result.best_candidate
    if incumbent.sigma2 is None or incumbent.cv is None:
        return result
    c_tilde = incumbent.c / incumbent.sigma2
    center = math.log10(incumbent.sigma2)
    seen = {
        (round(math.log10(c.c), 9), round(math.log10(c.sigma2), 9))
        for c in result.candidates
        if c.sigma2 is not None
    }
    tasks: list[tuple[float, float]] = []
    steps = int(round(2.0 / spacing_log10))
    for k in range(steps + 1):
        s2 = 10.0 ** (center - 1.0 + spacing_log10 * k)
        c = c_tilde * s2
        key = (round(math.log10(c), 9), round(math.log10(s2), 9))
        if key in seen:
            continue
        seen.add(key)
        tasks.append((c, s2))
    extra = _evaluate(
        ds, folds, tasks, variant=variant, positive=positive, solver=solver
    )
    merged = tuple(result.candidates) + tuple(extra)
    best = select_best(merged, result.selection_metric)
    return TuneResult(
        candidates=merged,
        best=best,
        evaluations=result.evaluations + len(extra),
        fold_seed=result.fold_seed,
        selection_metric=result.selection_metric,
        notes=result.notes
        + (f"refined around sigma2={incumbent.sigma2:g} at step {spacing_log10:g}",),
    )


def tune_line_search(
    ds: Dataset,
    folds: FoldPlan,
    sweep_spec: CSweepSpec = CSweepSpec(),
    line_cap: int = 4,
    spacing_log10: float = 1.0,
    refine: bool = False,
    variant: str = "l1",
    positive: int | None = None,
    metric: str = "accuracy",
    solver: SolverConfig = SolverConfig(),
) -> LineTuneOutcome:
    """The full two-pass tuner: C sweep, then line search over sigma^2."""
    sweep = linear_c_sweep(
        ds, folds, sweep_spec, variant=variant, positive=positive,
        metric=metric, solver=solver,
    )
    c_tildes = c_tilde_candidates(sweep, cap=line_cap)
    srange = sigma2_range_from_data(intra_class_distance_range(ds))
    spec = LineSearchSpec(
        c_tilde_values=c_tildes,
        sigma2_values=sigma2_grid(srange, spacing_log10),
    )
    search = line_search(
        ds, spec, folds, variant=variant, positive=positive,
        metric=metric, solver=solver,
    )
    if refine:
        search = refine_line_search(
            ds, search, folds, variant=variant, positive=positive, solver=solver
        )
    return LineTuneOutcome(
        sweep=sweep,
        c_tilde_values=c_tildes,
        sigma2_range=srange,
        search=search,
        grid_equivalent_evaluations=len(DEFAULT_LOG10_C) * len(DEFAULT_LOG10_SIGMA2),
    )


def c_lim(stats: ClassStats) -> float:
    """Penalty ceiling ``2 * N1 / N`` set by the class imbalance.

    In the narrow-kernel regime the trained model flips from answering
    "majority everywhere" to separating the classes as C crosses half
    this value.
    """
    return 2.0 * stats.n_majority / stats.n_total


def c_tilde_equivalence_report(
    ds: Dataset,
    folds: FoldPlan,
    c1: float,
    sigma2_1: float,
    c2: float,
    sigma2_2: float,
    solver: SolverConfig = SolverConfig(),
) -> EquivalenceReport:
    """Check that two wide-kernel models with equal C/sigma^2 predict alike.

    Both RBF models and a linear model at the shared C_tilde are trained
    on identical folds; agreement is the fraction of identical held-out
    predictions. Requires both sigma^2 to be at least ten times the
    largest squared intra-class distance, otherwise the wide-kernel
    approximation has no business being applied.
    """
    r1 = c1 / sigma2_1
    r2 = c2 / sigma2_2
    if abs(r1 - r2) > 1e-9 * max(r1, r2):
        raise ValueError(f"C/sigma^2 differ: {r1:g} vs {r2:g}")
    dr = intra_class_distance_range(ds)
    floor = 10.0 * dr.max_intra**2
    if sigma2_1 < floor or sigma2_2 < floor:
        raise RegimeViolation(
            f"sigma^2 must be >= {floor:g} (10 * max intra-class distance^2)"
        )
    configs = [
        TrainConfig(kernel=KernelSpec.rbf(sigma2_1), c=c1, solver=solver),
        TrainConfig(kernel=KernelSpec.rbf(sigma2_2), c=c2, solver=solver),
        TrainConfig(kernel=KernelSpec.linear(), c=r1, solver=solver),
    ]
    agree_pair = 0
    agree_lin = [0, 0]
    total = 0
    for fold in range(folds.k):
        sub = ds.subset(folds.train_indices(fold))
        test_x = ds.x[folds.test_indices(fold)]
        preds = [predict_many(train(sub, cfg), test_x) for cfg in configs]
        total += test_x.shape[0]
        agree_pair += int(np.sum(preds[0] == preds[1]))
        agree_lin[0] += int(np.sum(preds[0] == preds[2]))
        agree_lin[1] += int(np.sum(preds[1] == preds[2]))
    return EquivalenceReport(
        c_tilde=r1,
        pair_agreement=agree_pair / total,
        linear_agreement=(agree_lin[0] / total, agree_lin[1] / total),
    )


def write_tune_report(result: TuneResult, path: str | Path) -> None:
    """CSV with one row per (candidate, fold) plus a pooled row per candidate.

    Failed folds and failed candidates keep their row with empty counts so
    the file always accounts for every candidate evaluated. Full float
    precision, no timestamps: reruns are byte-identical.
    """
    import csv

    columns = [
        "c", "sigma2", "fold", "tp", "fn", "fp", "tn",
        "accuracy", "sensitivity", "specificity",
    ]
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for cand in result.candidates:
            base = [repr(cand.c), "" if cand.sigma2 is None else repr(cand.sigma2)]
            if cand.cv is None:
                writer.writerow(base + ["failed"] + [""] * 7)
                continue
            for outcome in cand.cv.folds:
                if outcome.confusion is None:
                    writer.writerow(base + [str(outcome.fold)] + [""] * 7)
                else:
                    writer.writerow(
                        base
                        + [str(outcome.fold)]
                        + _counts(outcome.confusion)
                        + _rates(outcome.metrics)
                    )
            writer.writerow(
                base
                + ["pooled"]
                + _counts(cand.cv.pooled_confusion)
                + _rates(cand.cv.pooled)
            )


def _counts(cm) -> list[str]:
    return [str(cm.tp), str(cm.fn), str(cm.fp), str(cm.tn)]


def _rates(m) -> list[str]:
    if m is None:
        return ["", "", ""]
    return [
        repr(m.accuracy),
        "" if m.sensitivity is None else repr(m.sensitivity),
        "" if m.specificity is None else repr(m.specificity),
    ]


def _evaluate(
    ds: Dataset,
    folds: FoldPlan,
    tasks: Sequence[tuple[float, float | None]],
    variant: str,
    positive: int | None,
    solver: SolverConfig,
) -> list[Candidate]:
    """Evaluate (C, sigma2) candidates, possibly concurrently.

    Results are merged back by task index, so the outcome does not depend
    on scheduling. SVMLAB_THREADS bounds the worker count; the default is
    sequential.
    """

    def one(task: tuple[float, float | None]) -> Candidate:
        c, s2 = task
        kernel = KernelSpec.linear() if s2 is None else KernelSpec.rbf(s2)
        cfg = TrainConfig(kernel=kernel, c=c, variant=variant, solver=solver)
        try:
            cv = cross_validate(ds, cfg, folds, positive=positive)
        except SvmlabError as exc:
            return Candidate(c=c, sigma2=s2, cv=None, error=f"{type(exc).__name__}: {exc}")
        return Candidate(c=c, sigma2=s2, cv=cv)

    workers = _worker_count(len(tasks))
    if workers <= 1:
        return [one(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, tasks))


def _worker_count(n_tasks: int) -> int:
    raw = os.environ.get("SVMLAB_THREADS", "1")
    try:
        workers = int(raw)
    except ValueError:
        workers = 1
    return max(1, min(workers, n_tasks))


def _floor_log10(v: float) -> int:
    return int(math.floor(math.log10(v) + 1e-9))


def _ceil_log10(v: float) -> int:
    return int(math.ceil(math.log10(v) - 1e-9))
