"""Seeded property checks shared by the invariant and acceptance suites.

Each check takes a seed, builds a randomized instance, and raises
AssertionError when a claimed property fails to hold. The registry at the
bottom drives both ``test_invariants.py`` (one test per check) and the
bulk acceptance run.
"""
from __future__ import annotations

import contextlib
import io
import math
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from svmlab import (
    DualProblem,
    KernelSpec,
    SolverConfig,
    TrainConfig,
    c_lim,
    class_stats,
    compute_bias,
    confusion,
    decision_values,
    estimate_c_star,
    gram_matrix,
    h_matrix,
    intra_class_distance_range,
    kkt_violations,
    line_search,
    load_csv,
    load_model,
    margin_width,
    metrics,
    predict_many,
    save_csv,
    save_model,
    solve_kkt_oracle,
    solve_smo,
    stratified_folds,
    train,
    tune_line_search,
)
from svmlab.cli import main as cli_main
from svmlab.dataset import ClassStats, Dataset
from svmlab.errors import AssumptionViolated
from svmlab.search import LineSearchSpec, candidate_score, select_best
from svmlab.synth import noisy_blobs, ring_in_disk, separable_blobs

FAST = SolverConfig(kkt_tolerance=1e-3)
MID = SolverConfig(kkt_tolerance=1e-6)


def _blobs(rng: np.random.Generator, lo: int = 4, hi: int = 14) -> Dataset:
    n_pos = int(rng.integers(lo, hi))
    n_neg = int(rng.integers(lo, hi))
    sep = float(rng.uniform(0.8, 3.0))
    return noisy_blobs(n_pos, n_neg, seed=int(rng.integers(1 << 30)), separation=sep)


def _kernel(rng: np.random.Generator) -> KernelSpec:
    if rng.random() < 0.5:
        return KernelSpec.linear()
    return KernelSpec.rbf(float(10.0 ** rng.uniform(-0.5, 1.0)))


def _problem(ds: Dataset, spec: KernelSpec, c: float, shift: float = 0.0) -> DualProblem:
    h = h_matrix(gram_matrix(spec, ds), ds.y, variant_shift=shift)
    return DualProblem(h=h, labels=ds.y, upper_bound=c)


# --- dataset -----------------------------------------------------------------


def check_fold_partition(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng, 3, 22)
    k = int(rng.integers(2, min(7, ds.n_samples + 1)))
    plan = stratified_folds(ds, k, seed=seed)
    assert plan.assignments.shape == (ds.n_samples,)
    assert plan.assignments.min() >= 0 and plan.assignments.max() < k
    for f in range(k):
        tr, te = plan.train_indices(f), plan.test_indices(f)
        assert len(te) > 0
        assert len(tr) + len(te) == ds.n_samples
        assert not set(tr.tolist()) & set(te.tolist())
    minority = class_stats(ds).n_minority
    for label in (1, -1):
        sizes = [
            int(np.sum((plan.assignments == f) & (ds.y == label))) for f in range(k)
        ]
        assert max(sizes) - min(sizes) <= 1
    if minority >= k:
        for f in range(k):
            held = ds.y[plan.test_indices(f)]
            assert np.any(held == 1) and np.any(held == -1)


def check_fold_determinism(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng, 4, 20)
    k = int(rng.integers(2, 6))
    a = stratified_folds(ds, k, seed=seed)
    b = stratified_folds(ds, k, seed=seed)
    assert np.array_equal(a.assignments, b.assignments)


def check_imbalance_identity(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n_minor = int(rng.integers(1, 400))
    n_major = n_minor + int(rng.integers(0, 400))
    stats = ClassStats(n_major, n_minor, majority_label=1)
    # the ratio times the minority count recovers the majority count exactly
    # when done in exact arithmetic on the stored integer counts
    assert Fraction(stats.n_majority, stats.n_minority) * stats.n_minority == stats.n_majority
    assert stats.imbalance_ratio == n_major / n_minor
    assert stats.n_total == n_major + n_minor
    assert stats.minority_label == -1


def check_distance_permutation(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng, 3, 16)
    dr = intra_class_distance_range(ds)
    perm = rng.permutation(ds.n_samples)
    dp = intra_class_distance_range(Dataset(ds.x[perm], ds.y[perm]))
    # BLAS rounds a dot product differently depending on where the row
    # lands in the matrix, so invariance holds to a few ulps, not bitwise.
    for got, want in (
        (dp.min_intra, dr.min_intra),
        (dp.max_intra, dr.max_intra),
        (dp.per_class_min, dr.per_class_min),
        (dp.per_class_max, dr.per_class_max),
    ):
        np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-12)
    assert dr.min_intra <= dr.max_intra
    assert dr.max_intra == max(dr.per_class_max)


def check_csv_roundtrip(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    x = rng.standard_normal((n, 3)) * 10.0 ** rng.integers(-15, 15, (n, 3))
    y = np.where(rng.random(n) < 0.5, 1, -1)
    y[: max(1, n // 2)] = 1
    y[max(1, n // 2):] = -1
    ds = Dataset(x, y)
    with tempfile.TemporaryDirectory() as td:
        path = Path(td) / "ds.csv"
        save_csv(ds, path)
        back = load_csv(path, label_column=-1, positive_label="1")
    assert np.array_equal(back.x, ds.x)
    assert np.array_equal(back.y, ds.y)


# --- kernels -----------------------------------------------------------------


def check_gram_properties(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(3, 18)), int(rng.integers(1, 5))
    x = rng.standard_normal((n, d)) * float(10.0 ** rng.uniform(-1, 1))
    sigma2 = float(10.0 ** rng.uniform(-1.5, 2.0))
    g = gram_matrix(KernelSpec.rbf(sigma2), x).entries
    assert np.array_equal(g, g.T)
    assert np.all(np.diag(g) == 1.0)
    assert np.all(g >= 0.0) and np.all(g <= 1.0)
    assert np.linalg.eigvalsh(g).min() >= -1e-9 * n
    lin = gram_matrix(KernelSpec.linear(), x).entries
    np.testing.assert_allclose(lin, x @ x.T, rtol=1e-12, atol=1e-12)


def check_poly_feature_map(seed: int) -> None:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-2, 2, (int(rng.integers(3, 10)), 2))
    phi = np.column_stack(
        [x[:, 0] ** 2, math.sqrt(2.0) * x[:, 0] * x[:, 1], x[:, 1] ** 2]
    )
    g = gram_matrix(KernelSpec.polynomial(2), x).entries
    np.testing.assert_allclose(g, phi @ phi.T, rtol=1e-10, atol=1e-10)


def check_wide_rbf_limit(seed: int) -> None:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((int(rng.integers(3, 9)), int(rng.integers(1, 4))))
    d2 = ((x[:, None] - x[None]) ** 2).sum(-1)
    if not d2.max() > 0.0:
        return
    sigma2 = 1e6 * d2.max()
    g = gram_matrix(KernelSpec.rbf(sigma2), x).entries
    mask = d2 > 0
    np.testing.assert_allclose(2.0 * sigma2 * (1.0 - g)[mask], d2[mask], rtol=1e-4)


# --- qp ----------------------------------------------------------------------


def check_dual_feasibility_and_kkt(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    c = float(10.0 ** rng.uniform(-1.0, 1.3))
    p = _problem(ds, _kernel(rng), c)
    sol = solve_smo(p, MID)
    assert sol.converged
    assert sol.alpha.min() >= 0.0
    assert sol.alpha.max() <= c
    assert abs(float(sol.alpha @ ds.y)) <= 1e-8 * max(1.0, float(sol.alpha.sum()))
    tol = MID.kkt_tolerance * (1.0 + 1e-9)
    assert kkt_violations(p, sol.alpha, sol.equality_multiplier).max() <= tol
    assert kkt_violations(p, sol.alpha, compute_bias(p, sol.alpha)).max() <= tol


def check_objective_monotone(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    c = float(10.0 ** rng.uniform(-0.5, 1.0))
    p = _problem(ds, _kernel(rng), c)
    sol = solve_smo(p, SolverConfig(kkt_tolerance=1e-6, record_objective=True))
    trace = sol.objective_trace
    assert trace is not None and trace.size == sol.iterations
    assert np.all(np.diff(trace) <= 1e-12 * max(1.0, abs(float(trace[-1]))))
    np.testing.assert_allclose(trace[-1], sol.objective, rtol=0, atol=1e-8)


def check_oracle_agreement(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    pts = rng.uniform(0.0, 1.0, (n, 2))
    y = np.where(rng.random(n) < 0.5, 1, -1)
    y[0], y[1] = 1, -1
    d2 = ((pts[:, None] - pts[None]) ** 2).sum(-1)
    mind2 = d2[d2 > 0].min()
    ds = Dataset(pts, y)
    oracle = None
    for factor in (0.05, 0.02, 0.005):
        p = _problem(ds, KernelSpec.rbf(factor * mind2), math.inf)
        try:
            oracle = solve_kkt_oracle(p)
            break
        except AssumptionViolated:
            continue
    assert oracle is not None, "no near-identity width made every sample a support vector"
    sol = solve_smo(p, SolverConfig(kkt_tolerance=1e-10))
    assert abs(sol.objective - oracle.objective) <= 1e-6
    assert np.abs(p.h.entries @ (sol.alpha - oracle.alpha)).max() <= 1e-4


def check_duality_gap(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    c = (0.5, 2.0, 10.0)[seed % 3]
    p = _problem(ds, KernelSpec.linear(), c)
    sol = solve_smo(p, MID)
    w = (sol.alpha * ds.y) @ ds.x
    b = compute_bias(p, sol.alpha)
    slack = np.maximum(0.0, 1.0 - ds.y * (ds.x @ w + b))
    primal = 0.5 * float(w @ w) + c * float(slack.sum())
    gap = primal + sol.objective
    assert gap >= -1e-8
    assert gap <= 1e-4 * max(1.0, primal)


def check_solver_determinism(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    p = _problem(ds, _kernel(rng), 2.0)
    cfg = SolverConfig(kkt_tolerance=1e-6, seed=seed)
    a, b = solve_smo(p, cfg), solve_smo(p, cfg)
    assert np.array_equal(a.alpha, b.alpha)
    assert a.iterations == b.iterations
    assert a.objective == b.objective


def check_support_sparsity(seed: int) -> None:
    n = 6 + seed % 9
    ds = separable_blobs(n, n - 1, seed=seed)
    cfg = TrainConfig(
        kernel=KernelSpec.linear(), c=math.inf, solver=SolverConfig(kkt_tolerance=1e-8)
    )
    full = train(ds, cfg)
    p = _problem(ds, cfg.kernel, math.inf)
    sol = solve_smo(p, cfg.solver)
    keep = np.flatnonzero(sol.alpha > 1e-8)
    trimmed = train(ds.subset(keep), cfg)
    scale = max(1.0, float(np.linalg.norm(full.weight)))
    assert np.linalg.norm(full.weight - trimmed.weight) <= 1e-6 * scale
    assert abs(full.bias - trimmed.bias) <= 1e-6 * max(1.0, abs(full.bias))


# --- svm ---------------------------------------------------------------------


def check_sv_partition_and_margins(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    c = float(10.0 ** rng.uniform(-0.5, 1.0))
    kernel = _kernel(rng)
    cfg = TrainConfig(kernel=kernel, c=c, solver=MID)
    model = train(ds, cfg)
    p = _problem(ds, kernel, c)
    sol = solve_smo(p, MID)
    edge = 1e-8 * max(1.0, c)
    is_sv = sol.alpha > 1e-8
    bounded = is_sv & (sol.alpha >= c - edge)
    free = is_sv & ~bounded
    d = model.diagnostics
    assert d.n_free_sv == int(free.sum())
    assert d.n_bounded_sv == int(bounded.sum())
    assert model.n_sv == int(is_sv.sum())
    yf = ds.y * decision_values(model, ds.x)
    window = 1e-4
    assert np.all(np.abs(yf[free] - 1.0) <= window)
    assert np.all(yf[bounded] <= 1.0 + window)
    assert np.all(yf[~is_sv] >= 1.0 - window)
    np.testing.assert_allclose(
        d.slack, np.maximum(0.0, 1.0 - yf), rtol=0, atol=1e-8
    )
    assert d.train_errors == int(np.sum(yf < 0.0))


def check_l2_alpha_slack(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    c = float(10.0 ** rng.uniform(-0.3, 1.3))
    kernel = _kernel(rng)
    p = _problem(ds, kernel, math.inf, shift=1.0 / c)
    sol = solve_smo(p, MID)
    b = compute_bias(p, sol.alpha)
    u = ds.y * (p.h.entries @ sol.alpha - sol.alpha / c)
    eps = np.maximum(0.0, 1.0 - ds.y * (u + b))
    sv = sol.alpha > 1e-8
    assert np.abs(c * eps - sol.alpha)[sv].max() <= 1e-4 * max(1.0, c)


def check_model_persistence(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng)
    cfg = TrainConfig(
        kernel=_kernel(rng),
        c=float(10.0 ** rng.uniform(-0.5, 1.0)),
        variant="l2" if rng.random() < 0.3 else "l1",
        scaler="minmax" if rng.random() < 0.3 else None,
        solver=FAST,
    )
    model = train(ds, cfg)
    probes = rng.uniform(-3, 3, (12, 2))
    with tempfile.TemporaryDirectory() as td:
        path = Path(td) / "m.json"
        save_model(model, path)
        back = load_model(path)
    assert np.array_equal(decision_values(model, probes), decision_values(back, probes))
    assert np.array_equal(model.diagnostics.slack, back.diagnostics.slack)


def check_margin_trend(seed: int) -> None:
    ds = separable_blobs(5 + seed % 8, 5 + (seed // 2) % 7, seed=seed)
    cfg = TrainConfig(kernel=KernelSpec.linear(), solver=SolverConfig(kkt_tolerance=1e-8))
    c_star = estimate_c_star(ds, cfg)
    widths = {
        c: margin_width(train(ds, TrainConfig(kernel=cfg.kernel, c=c, solver=cfg.solver)))
        for c in (0.01, 1.0, c_star, 2.0 * c_star)
    }
    hard = margin_width(train(ds, TrainConfig(kernel=cfg.kernel, c=math.inf, solver=cfg.solver)))
    assert widths[0.01] >= widths[1.0] - 1e-9
    assert widths[1.0] >= widths[c_star] - 1e-9
    assert abs(widths[c_star] - hard) <= 1e-6 * hard
    assert abs(widths[2.0 * c_star] - hard) <= 1e-6 * hard


def check_small_c_majority_collapse(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n_min = int(rng.integers(3, 9))
    n_maj = n_min + int(rng.integers(3, 9))
    flip = rng.random() < 0.5
    ds = noisy_blobs(n_maj if flip else n_min, n_min if flip else n_maj, seed=seed)
    stats = class_stats(ds)
    model = train(ds, TrainConfig(kernel=KernelSpec.linear(), c=1e-6, solver=MID))
    preds = predict_many(model, ds.x)
    assert np.all(preds == stats.majority_label)
    assert model.diagnostics.train_errors == stats.n_minority
    # the equality constraint forces every minority multiplier to the box
    minority_sv = model.sv_labels == stats.minority_label
    assert int(minority_sv.sum()) == stats.n_minority
    assert np.all(model.sv_alpha[minority_sv] == 1e-6)


def check_hard_margin_cleanliness(seed: int) -> None:
    ds = separable_blobs(4 + seed % 10, 4 + (seed // 3) % 9, seed=seed)
    model = train(
        ds,
        TrainConfig(kernel=KernelSpec.linear(), c=math.inf,
                    solver=SolverConfig(kkt_tolerance=1e-8)),
    )
    assert model.diagnostics.train_errors == 0
    assert model.diagnostics.slack.max() <= 1e-6
    assert margin_width(model) > 0.0


# --- metrics -----------------------------------------------------------------


def check_confusion_identities(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 60))
    truth = np.where(rng.random(n) < rng.uniform(0.2, 0.8), 1, -1)
    pred = np.where(rng.random(n) < 0.5, 1, -1)
    cm = confusion(truth, pred)
    assert cm.total == n
    assert cm.tp + cm.fn == int(np.sum(truth == 1))
    assert cm.fp + cm.tn == int(np.sum(truth == -1))
    swapped = confusion(truth, pred, positive=-1)
    assert (cm.tp, cm.fn, cm.fp, cm.tn) == (
        swapped.tn, swapped.fp, swapped.fn, swapped.tp
    )
    m = metrics(cm)
    assert m.accuracy == (cm.tp + cm.tn) / n
    assert (m.sensitivity is None) == (cm.tp + cm.fn == 0)
    assert (m.specificity is None) == (cm.fp + cm.tn == 0)
    if m.sensitivity is not None and m.specificity is not None:
        swapped_m = metrics(swapped)
        assert swapped_m.sensitivity == m.specificity
        assert swapped_m.specificity == m.sensitivity


def check_pooling_additivity(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 80))
    truth = np.where(rng.random(n) < 0.5, 1, -1)
    pred = np.where(rng.random(n) < 0.5, 1, -1)
    parts = np.array_split(rng.permutation(n), int(rng.integers(2, 6)))
    total = None
    for part in parts:
        if part.size == 0:
            continue
        cm = confusion(truth[part], pred[part])
        total = cm if total is None else total + cm
    assert total == confusion(truth, pred)


# --- search ------------------------------------------------------------------


def _synthetic_candidate(c, s2, score, sens):
    from svmlab import ConfusionMatrix
    from svmlab.metrics import CvResult, Metrics
    from svmlab.search import Candidate

    if score is None:
        return Candidate(c=c, sigma2=s2, cv=None, error="failed")
    pooled = Metrics(score, sens, None, support=10)
    cv = CvResult(ConfusionMatrix(5, 0, 0, 5), pooled, (), False)
    return Candidate(c=c, sigma2=s2, cv=cv)


def check_selection_total_order(seed: int) -> None:
    rng = np.random.default_rng(seed)
    cands = []
    for _ in range(int(rng.integers(1, 12))):
        score = None if rng.random() < 0.2 else float(rng.choice([0.7, 0.8, 0.9]))
        sens = None if rng.random() < 0.3 else float(rng.choice([0.4, 0.6]))
        c = float(rng.choice([0.1, 1.0, 10.0]))
        s2 = None if rng.random() < 0.2 else float(rng.choice([0.5, 5.0]))
        cands.append(_synthetic_candidate(c, s2, score, sens))
    idx = select_best(cands)
    assert 0 <= idx < len(cands)
    chosen = cands[idx]
    key = (candidate_score(chosen), chosen.c, chosen.sigma2)
    order = rng.permutation(len(cands))
    reidx = select_best([cands[i] for i in order])
    rechosen = cands[order[reidx]]
    assert key == (candidate_score(rechosen), rechosen.c, rechosen.sigma2)


def check_line_search_counts(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = separable_blobs(5, 4, seed=seed)
    decades = sorted(rng.choice([-2.0, -1.0, 0.0, 1.0], size=3, replace=False))
    tildes = tuple(
        float(10.0 ** rng.choice([-1.0, 0.0, 1.0]))
        for _ in range(int(rng.integers(1, 4)))
    )
    spec = LineSearchSpec(
        c_tilde_values=tildes, sigma2_values=tuple(10.0**e for e in decades)
    )
    result = line_search(ds, spec, stratified_folds(ds, 3, seed=seed), solver=FAST)
    cells = {
        (round(math.log10(t * s), 9), round(math.log10(s), 9))
        for t in tildes
        for s in (10.0**e for e in decades)
    }
    assert result.evaluations == len(cells)
    assert result.evaluations <= len(tildes) * len(decades)


def check_narrow_regime_flip(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n_min = int(rng.integers(6, 16))
    ds = ring_in_disk(n_min, 2 * n_min, seed=seed)
    sigma2 = 0.01 * intra_class_distance_range(ds).min_intra ** 2
    half = c_lim(class_stats(ds)) / 2.0
    lo = train(ds, TrainConfig(kernel=KernelSpec.rbf(sigma2), c=0.5 * half, solver=MID))
    hi = train(ds, TrainConfig(kernel=KernelSpec.rbf(sigma2), c=1.5 * half, solver=MID))
    assert lo.diagnostics.train_errors == n_min
    assert hi.diagnostics.train_errors == 0


def check_tuner_determinism(seed: int) -> None:
    ds = noisy_blobs(8, 7, seed=seed, separation=1.5)
    plan = stratified_folds(ds, 3, seed=seed)
    a = tune_line_search(ds, plan, solver=FAST)
    b = tune_line_search(ds, plan, solver=FAST)
    assert a.c_tilde_values == b.c_tilde_values
    assert (a.sigma2_range.lo, a.sigma2_range.hi) == (b.sigma2_range.lo, b.sigma2_range.hi)
    assert a.search.evaluations == b.search.evaluations
    assert [
        (c.c, c.sigma2, candidate_score(c)) for c in a.search.candidates
    ] == [(c.c, c.sigma2, candidate_score(c)) for c in b.search.candidates]


# --- cli ---------------------------------------------------------------------


def _run_cli(args: list[str]) -> tuple[int, str]:
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        rc = cli_main(args)
    return rc, out.getvalue()


def check_cli_determinism(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ds = _blobs(rng, 4, 12)
    with tempfile.TemporaryDirectory() as td:
        data = Path(td) / "d.csv"
        save_csv(ds, data)
        base = ["--data", str(data), "--deterministic"]
        first = _run_cli(["info", *base])
        second = _run_cli(["info", *base])
        assert first == second and first[0] == 0
        if seed % 20 == 0:
            report = Path(td) / "r.csv"
            args = ["tune", *base, "--k", "2", "--report", str(report)]
            rc_a, out_a = _run_cli(args)
            bytes_a = report.read_bytes()
            rc_b, out_b = _run_cli(args)
            assert (rc_a, out_a) == (rc_b, out_b)
            assert bytes_a == report.read_bytes()


# --- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class CheckSpec:
    section: str
    name: str
    fn: Callable[[int], None]
    cases: int = 100


CHECKS: tuple[CheckSpec, ...] = (
    CheckSpec("dataset", "fold_partition", check_fold_partition),
    CheckSpec("dataset", "fold_determinism", check_fold_determinism),
    CheckSpec("dataset", "imbalance_identity", check_imbalance_identity),
    CheckSpec("dataset", "distance_permutation", check_distance_permutation),
    CheckSpec("dataset", "csv_roundtrip", check_csv_roundtrip),
    CheckSpec("kernels", "gram_properties", check_gram_properties),
    CheckSpec("kernels", "poly_feature_map", check_poly_feature_map),
    CheckSpec("kernels", "wide_rbf_limit", check_wide_rbf_limit),
    CheckSpec("qp", "dual_feasibility_and_kkt", check_dual_feasibility_and_kkt),
    CheckSpec("qp", "objective_monotone", check_objective_monotone),
    CheckSpec("qp", "oracle_agreement", check_oracle_agreement),
    CheckSpec("qp", "duality_gap", check_duality_gap),
    CheckSpec("qp", "solver_determinism", check_solver_determinism),
    CheckSpec("qp", "support_sparsity", check_support_sparsity),
    CheckSpec("svm", "sv_partition_and_margins", check_sv_partition_and_margins),
    CheckSpec("svm", "l2_alpha_slack", check_l2_alpha_slack),
    CheckSpec("svm", "model_persistence", check_model_persistence),
    CheckSpec("svm", "margin_trend", check_margin_trend),
    CheckSpec("svm", "small_c_majority_collapse", check_small_c_majority_collapse),
    CheckSpec("svm", "hard_margin_cleanliness", check_hard_margin_cleanliness),
    CheckSpec("metrics", "confusion_identities", check_confusion_identities),
    CheckSpec("metrics", "pooling_additivity", check_pooling_additivity),
    CheckSpec("search", "selection_total_order", check_selection_total_order),
    CheckSpec("search", "line_search_counts", check_line_search_counts),
    CheckSpec("search", "narrow_regime_flip", check_narrow_regime_flip),
    # two full tunes per case; ten seeds keep the whole registry fast and the
    # section stays above a hundred cases through its other checks
    CheckSpec("search", "tuner_determinism", check_tuner_determinism, cases=10),
    CheckSpec("cli", "rerun_identical", check_cli_determinism),
)


def run_check(spec: CheckSpec) -> None:
    for seed in range(spec.cases):
        try:
            spec.fn(seed)
        except AssertionError as exc:
            raise AssertionError(
                f"{spec.section}:{spec.name} failed at seed {seed}: {exc}"
            ) from exc
