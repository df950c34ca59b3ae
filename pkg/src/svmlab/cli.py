"""Command line front end.

Exit codes: 0 on success, 2 when the input is unusable, 3 when a
numerical procedure fails. Every command is deterministic given --seed;
reports never contain timestamps, and --deterministic additionally
silences the wall-clock line so console output is reproducible too.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import search
from .dataset import (
    Dataset,
    class_stats,
    intra_class_distance_range,
    load_csv,
    stratified_folds,
)
from .errors import ComputeError, DataError, NotTwoDimensional
from .kernels import KernelSpec
from .metrics import cross_validate
from .qp import SolverConfig
from .svm import SvmModel, TrainConfig, decision_values, load_model, save_model, train


@dataclass(frozen=True)
class BoundaryGrid:
    """Decision values on a lattice over the data's bounding box."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray  # shape (len(ys), len(xs)), row-major in y
    predictions: np.ndarray


def compute_boundary_grid(model: SvmModel, ds: Dataset, steps: int) -> BoundaryGrid:
    """Evaluate the model on a steps-by-steps lattice, box padded by 10%."""
    if ds.dim != 2 or model.dim != 2:
        raise NotTwoDimensional("boundary export needs 2-D data and a 2-D model")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    lo = ds.x.min(axis=0)
    hi = ds.x.max(axis=0)
    pad = 0.1 * (hi - lo)
    xs = np.linspace(lo[0] - pad[0], hi[0] + pad[0], steps)
    ys = np.linspace(lo[1] - pad[1], hi[1] + pad[1], steps)
    gx, gy = np.meshgrid(xs, ys)
    points = np.column_stack([gx.ravel(), gy.ravel()])
    values = decision_values(model, points).reshape(steps, steps)
    predictions = np.where(values >= 0.0, 1, -1)
    return BoundaryGrid(xs=xs, ys=ys, values=values, predictions=predictions)


def write_boundary_csv(grid: BoundaryGrid, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "decision_value", "prediction"])
        for iy, yv in enumerate(grid.ys):
            for ix, xv in enumerate(grid.xs):
                writer.writerow(
                    [
                        repr(float(xv)),
                        repr(float(yv)),
                        repr(float(grid.values[iy, ix])),
                        str(int(grid.predictions[iy, ix])),
                    ]
                )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if not args.deterministic:
        print(f"done in {time.perf_counter() - start:.3f}s")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svmlab",
        description="Train, evaluate and tune soft-margin SVMs on CSV data.",
    )
    sub = parser.add_subparsers(required=True, metavar="command")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", required=True, help="CSV file with features and labels")
    data.add_argument(
        "--label-col",
        default="-1",
        help="label column index or header name (default: last column)",
    )
    data.add_argument(
        "--positive",
        default=None,
        help="raw label value mapped to +1 (default: the minority value)",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument(
        "--deterministic",
        action="store_true",
        help="suppress wall-clock output so reruns are byte-identical",
    )

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument(
        "--kernel", choices=("linear", "rbf", "poly"), default="linear"
    )
    kernel.add_argument("--sigma2", type=float, default=None, help="rbf width (sigma^2)")
    kernel.add_argument("--degree", type=int, default=2, help="poly degree")
    kernel.add_argument("--offset", type=float, default=0.0, help="poly offset")
    kernel.add_argument(
        "--c", type=float, default=1.0, help="penalty C; 'inf' for a hard margin"
    )
    kernel.add_argument("--variant", choices=("l1", "l2"), default="l1")
    kernel.add_argument(
        "--scale", action="store_true", help="min-max scale features (recorded in model)"
    )

    p_info = sub.add_parser(
        "info", parents=[data, common], help="class counts, distance scales, derived ranges"
    )
    p_info.set_defaults(func=cmd_info)

    p_train = sub.add_parser(
        "train", parents=[data, common, kernel], help="fit one model"
    )
    p_train.add_argument("--model", default=None, help="where to write the model JSON")
    p_train.add_argument(
        "--allow-partial",
        action="store_true",
        help="keep a non-converged model instead of failing",
    )
    p_train.set_defaults(func=cmd_train)

    p_cv = sub.add_parser(
        "cv", parents=[data, common, kernel], help="stratified k-fold cross-validation"
    )
    p_cv.add_argument("--k", type=int, default=5, help="fold count")
    p_cv.add_argument(
        "--allow-partial",
        action="store_true",
        help="tolerate failed folds in the pooled result",
    )
    p_cv.set_defaults(func=cmd_cv)

    p_tune = sub.add_parser(
        "tune", parents=[data, common], help="hyperparameter search for an rbf model"
    )
    p_tune.add_argument("--method", choices=("line", "grid"), default="line")
    p_tune.add_argument("--k", type=int, default=5, help="fold count")
    p_tune.add_argument("--variant", choices=("l1", "l2"), default="l1")
    p_tune.add_argument("--report", default=None, help="where to write the CSV report")
    p_tune.add_argument("--model", default=None, help="where to write the best model")
    p_tune.set_defaults(func=cmd_tune)

    p_boundary = sub.add_parser(
        "boundary",
        parents=[data, common],
        help="decision values on a lattice (2-D data only)",
    )
    p_boundary.add_argument("--model", required=True, help="model JSON to evaluate")
    p_boundary.add_argument("--out", required=True, help="output CSV path")
    p_boundary.add_argument("--steps", type=int, default=50, help="lattice points per axis")
    p_boundary.set_defaults(func=cmd_boundary)

    return parser


def cmd_info(args: argparse.Namespace) -> int:
    ds = _load(args)
    stats = class_stats(ds)
    print(f"samples: {ds.n_samples}  features: {ds.dim}")
    print(
        f"majority: {stats.n_majority} (label {stats.majority_label:+d})  "
        f"minority: {stats.n_minority}  imbalance: {stats.imbalance_ratio:.3g}"
    )
    print(f"penalty ceiling 2*N1/N: {search.c_lim(stats):.6g}")
    dr = intra_class_distance_range(ds)
    print(
        f"intra-class distances: min {dr.min_intra:.6g}  max {dr.max_intra:.6g}  "
        f"per-class min {dr.per_class_min[0]:.6g}/{dr.per_class_min[1]:.6g}  "
        f"max {dr.per_class_max[0]:.6g}/{dr.per_class_max[1]:.6g}"
    )
    srange = search.sigma2_range_from_data(dr)
    print(f"derived sigma2 range: [{srange.lo:g}, {srange.hi:g}]")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    ds = _load(args)
    cfg = _train_config(args)
    model = train(ds, cfg, require_convergence=not args.allow_partial)
    d = model.diagnostics
    if not d.converged:
        print("warning: solver did not converge; model is best-effort")
    print(
        f"support vectors: {model.n_sv} ({d.n_free_sv} free, {d.n_bounded_sv} bounded)"
    )
    print(f"bias: {model.bias:.9g}  training errors: {d.train_errors}")
    if d.margin_width is not None:
        print(f"margin width: {d.margin_width:.9g}")
    if args.model:
        save_model(model, args.model)
        print(f"model written to {args.model}")
    return 0


def cmd_cv(args: argparse.Namespace) -> int:
    ds = _load(args)
    cfg = _train_config(args)
    folds = stratified_folds(ds, args.k, seed=args.seed)
    result = cross_validate(ds, cfg, folds)
    for outcome in result.folds:
        if outcome.error is not None:
            print(f"fold {outcome.fold}: failed ({outcome.error})")
        else:
            m = outcome.metrics
            print(
                f"fold {outcome.fold}: accuracy {m.accuracy:.4f}"
                + _rate_suffix(m)
            )
    if result.pooled is not None:
        print(f"pooled: accuracy {result.pooled.accuracy:.4f}" + _rate_suffix(result.pooled))
    else:
        print("pooled: no successful folds")
    if result.partial:
        print("warning: partial result, at least one fold failed")
        if not args.allow_partial:
            return 3
    return 0


def cmd_tune(args: argparse.Namespace) -> int:
    ds = _load(args)
    folds = stratified_folds(ds, args.k, seed=args.seed)
    solver = SolverConfig(seed=args.seed)
    if args.method == "line":
        outcome = search.tune_line_search(
            ds, folds, variant=args.variant, solver=solver
        )
        result = outcome.search
        print(
            "c-sweep best accuracy: "
            + _score_str(outcome.sweep)
            + f"  c_tilde lines: {', '.join(f'{v:g}' for v in outcome.c_tilde_values) or 'none'}"
        )
        print(
            f"sigma2 range [{outcome.sigma2_range.lo:g}, {outcome.sigma2_range.hi:g}]"
        )
        print(f"line-search evaluations: {result.evaluations}")
        print(
            f"grid-search evaluations at equal resolution: "
            f"{outcome.grid_equivalent_evaluations}"
        )
    else:
        result = search.grid_search(ds, folds, variant=args.variant, solver=solver)
        print(f"grid-search evaluations: {result.evaluations}")
    for note in result.notes:
        print(f"note: {note}")
    if not result.succeeded:
        print("no candidate could be evaluated", file=sys.stderr)
        return 3
    best = result.best_candidate
    score = search.candidate_score(best, result.selection_metric)
    s2 = "" if best.sigma2 is None else f"  sigma2 {best.sigma2:g}"
    print(f"best: C {best.c:g}{s2}  {result.selection_metric} {score:.4f}")
    if args.report:
        search.write_tune_report(result, args.report)
        print(f"report written to {args.report}")
    if args.model:
        kernel = (
            KernelSpec.linear()
            if best.sigma2 is None
            else KernelSpec.rbf(best.sigma2)
        )
        cfg = TrainConfig(kernel=kernel, c=best.c, variant=args.variant, solver=solver)
        save_model(train(ds, cfg), args.model)
        print(f"model written to {args.model}")
    return 0


def cmd_boundary(args: argparse.Namespace) -> int:
    ds = _load(args)
    model = load_model(args.model)
    grid = compute_boundary_grid(model, ds, args.steps)
    write_boundary_csv(grid, args.out)
    inside = int(np.sum(grid.predictions == 1))
    print(
        f"lattice {args.steps}x{args.steps}, {inside} points predicted +1, "
        f"written to {args.out}"
    )
    return 0


def _load(args: argparse.Namespace) -> Dataset:
    label_col: int | str
    try:
        label_col = int(args.label_col)
    except ValueError:
        label_col = args.label_col
    return load_csv(args.data, label_col, positive_label=args.positive)


def _train_config(args: argparse.Namespace) -> TrainConfig:
    if args.kernel == "rbf":
        if args.sigma2 is None:
            raise DataError("--kernel rbf requires --sigma2")
        kernel = KernelSpec.rbf(args.sigma2)
    elif args.kernel == "poly":
        kernel = KernelSpec.polynomial(args.degree, offset=args.offset)
    else:
        kernel = KernelSpec.linear()
    return TrainConfig(
        kernel=kernel,
        c=args.c,
        variant=args.variant,
        solver=SolverConfig(seed=args.seed),
        scaler="minmax" if args.scale else None,
    )


def _rate_suffix(m) -> str:
    parts = []
    if m.sensitivity is not None:
        parts.append(f"sensitivity {m.sensitivity:.4f}")
    if m.specificity is not None:
        parts.append(f"specificity {m.specificity:.4f}")
    return ("  " + "  ".join(parts)) if parts else ""


def _score_str(result: search.TuneResult) -> str:
    if not result.succeeded:
        return "n/a"
    score = search.candidate_score(result.best_candidate, result.selection_metric)
    return f"{score:.4f}"


if __name__ == "__main__":
    sys.exit(main())
