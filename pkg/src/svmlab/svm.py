"""Training and using soft-margin SVM models.

Two penalty variants share one solver. The hinge variant ("l1") boxes the
dual weights at C. The squared-slack variant ("l2") leaves them unbounded
and instead adds 1/C to the diagonal of the dual quadratic form. A C of
``math.inf`` requests a hard margin and is realised as a hinge model with
a very large box.

Features are taken as-is; no scaling happens unless a config asks for it,
and then the scaling parameters are recorded inside the model so that
prediction and persistence stay self-contained.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .errors import (
    DomainError,
    NonConvergence,
    NoSupportVectors,
    NotLinear,
    NotSeparable,
    SchemaMismatch,
    SingleClass,
)
from .kernels import KernelSpec, gram_matrix, h_matrix, kernel_cross
from .qp import BOX_CAP, DualProblem, DualSolution, SolverConfig, solve_smo

SV_THRESHOLD = 1e-8

# Finite stand-in for an infinite hinge box; see TrainConfig.c.
HARD_MARGIN_BOX = 1e9

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    kernel: KernelSpec
    c: float = 1.0
    variant: str = "l1"
    solver: SolverConfig = field(default_factory=SolverConfig)
    scaler: str | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("l1", "l2"):
            raise ValueError(f"variant must be 'l1' or 'l2', got {self.variant!r}")
        if not self.c > 0.0:
            raise ValueError("c must be positive (math.inf for a hard margin)")
        if self.scaler not in (None, "minmax"):
            raise ValueError(f"unknown scaler {self.scaler!r}")


@dataclass(frozen=True)
class MinMaxScale:
    """Per-feature affine map to [0, 1] fitted on the training set."""

    mins: np.ndarray
    spans: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        safe = np.where(self.spans > 0.0, self.spans, 1.0)
        return (x - self.mins) / safe


@dataclass(frozen=True)
class SvDiagnostics:
    n_free_sv: int
    n_bounded_sv: int
    margin_width: float | None
    slack: np.ndarray
    train_errors: int
    converged: bool
    iterations: int

    @property
    def n_train(self) -> int:
        return self.slack.shape[0]


@dataclass(frozen=True)
class SvmModel:
    kernel: KernelSpec
    variant: str
    c: float
    bias: float
    sv_features: np.ndarray
    sv_labels: np.ndarray
    sv_alpha: np.ndarray
    weight: np.ndarray | None
    scaler: MinMaxScale | None
    dim: int
    diagnostics: SvDiagnostics

    @property
    def n_sv(self) -> int:
        return self.sv_alpha.shape[0]


def effective_box(cfg: TrainConfig) -> float:
    """The finite dual box actually handed to the solver."""
    if cfg.variant == "l2":
        return BOX_CAP
    return HARD_MARGIN_BOX if math.isinf(cfg.c) else cfg.c


def train(ds: Dataset, cfg: TrainConfig, require_convergence: bool = True) -> SvmModel:
    """Fit a model on ``ds``.

    On an exhausted update budget the best iterate is still turned into a
    model; with ``require_convergence`` (the default) it is raised inside
    :class:`NonConvergence` instead of returned.
    """
    if not (np.any(ds.y == 1) and np.any(ds.y == -1)):
        raise SingleClass("training needs samples of both classes")
    scaler = _fit_scaler(ds) if cfg.scaler == "minmax" else None
    x = scaler.apply(ds.x) if scaler else ds.x
    shift = 0.0
    if cfg.variant == "l2" and not math.isinf(cfg.c):
        shift = 1.0 / cfg.c
    h = h_matrix(gram_matrix(cfg.kernel, x), ds.y, variant_shift=shift)
    problem = DualProblem(h=h, labels=ds.y, upper_bound=effective_box(cfg))
    solution = solve_smo(problem, cfg.solver)
    model = _assemble(x, ds.y, cfg, scaler, problem, solution)
    if require_convergence and not solution.converged:
        raise NonConvergence(
            f"update budget {cfg.solver.max_passes} exhausted at "
            f"violation {solution.max_kkt_violation:.3e}",
            partial=model,
        )
    return model


def compute_bias(p: DualProblem, alpha: np.ndarray) -> float:
    """Bias as the mean offset that puts free SVs exactly on the margin.

    When every SV is boxed there is no equality condition to average, only
    a feasible interval: samples at zero bound the bias from one side and
    boxed samples from the other. The midpoint of that interval keeps all
    optimality conditions satisfied, which a plain average over boxed SVs
    does not. For the squared-slack variant the margin target of an SV is
    shifted by its own alpha/C, which both paths account for.
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    shift = p.h.variant_shift
    u = p.labels * (p.h.entries @ alpha - shift * alpha)
    contributions = p.labels * (1.0 - shift * alpha) - u
    box = min(p.upper_bound, BOX_CAP)
    is_sv = alpha > SV_THRESHOLD
    if not np.any(is_sv):
        raise NoSupportVectors("cannot place a bias without support vectors")
    boxed = alpha >= box - 1e-8 * max(1.0, box)
    free = is_sv & ~boxed
    if np.any(free):
        return float(contributions[free].mean())
    positive = p.labels > 0
    from_below = (positive & ~boxed) | (~positive & boxed)
    from_above = (~positive & ~boxed) | (positive & boxed)
    if not (np.any(from_below) and np.any(from_above)):
        return float(contributions[is_sv].mean())
    lower = contributions[from_below].max()
    upper = contributions[from_above].min()
    return float((lower + upper) / 2.0)


def decision_values(m: SvmModel, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if m.scaler is not None:
        x = m.scaler.apply(x)
    coeff = m.sv_alpha * m.sv_labels
    return coeff @ kernel_cross(m.kernel, m.sv_features, x) + m.bias


def decision_value(m: SvmModel, x: np.ndarray) -> float:
    return float(decision_values(m, x)[0])


def predict_many(m: SvmModel, x: np.ndarray) -> np.ndarray:
    # An exact zero is on the hyperplane; call it +1 so the rule is total.
    return np.where(decision_values(m, x) >= 0.0, 1, -1)


def predict(m: SvmModel, x: np.ndarray) -> int:
    return int(predict_many(m, x)[0])


def margin_width(m: SvmModel) -> float:
    if m.kernel.kind != "linear":
        raise NotLinear("margin width 2/||w|| needs a linear kernel")
    assert m.weight is not None
    norm = float(np.linalg.norm(m.weight))
    return math.inf if norm == 0.0 else 2.0 / norm


def estimate_c_star(ds: Dataset, cfg: TrainConfig) -> float:
    """Smallest hinge box that leaves the hard-margin solution unchanged.

    Trains with an effectively infinite box; the largest dual weight is
    that threshold. Any finite C at or above it reproduces the same model.
    """
    hard = replace(cfg, c=math.inf, variant="l1")
    try:
        model = train(ds, hard)
    except NonConvergence as exc:
        # An unbounded dual never converges; inspect the partial model to
        # tell "not separable" apart from a genuinely exhausted budget.
        partial = exc.partial
        if partial is not None and partial.diagnostics.train_errors > 0:
            raise NotSeparable(
                f"{partial.diagnostics.train_errors} training errors under a "
                "hard margin"
            ) from exc
        raise
    if model.diagnostics.train_errors > 0:
        raise NotSeparable(
            f"{model.diagnostics.train_errors} training errors under a hard margin"
        )
    return float(model.sv_alpha.max())


def loo_sv_bound(m: SvmModel) -> float:
    """Leave-one-out error bound: fraction of training samples that are SVs."""
    return m.n_sv / m.diagnostics.n_train


@dataclass(frozen=True)
class VcInputs:
    n: int
    vc_dim: float
    confidence_eta: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.vc_dim > 0:
            raise ValueError("vc_dim must be positive")
        if not 0.0 < self.confidence_eta < 1.0:
            raise ValueError("confidence_eta must lie in (0, 1)")


def vc_confidence(v: VcInputs) -> float:
    """Capacity term of the risk bound holding with probability 1 - eta."""
    radicand = (
        v.vc_dim * (math.log(2.0 * v.n / v.vc_dim) + 1.0)
        - math.log(v.confidence_eta / 4.0)
    ) / v.n
    if radicand <= 0.0:
        raise DomainError(f"confidence radicand is {radicand:.3e}; bound is vacuous")
    return math.sqrt(radicand)


# --- persistence ------------------------------------------------------------


def save_model(m: SvmModel, path: str | Path) -> None:
    """Write a model as a versioned JSON document.

    Floats go through ``repr`` round-tripping, so a reloaded model gives
    bit-identical decision values.
    """
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "kernel": {
            "kind": m.kernel.kind,
            "sigma2": m.kernel.sigma2,
            "degree": m.kernel.degree,
            "offset": m.kernel.offset,
        },
        "variant": m.variant,
        "c": m.c,
        "bias": m.bias,
        "dim": m.dim,
        "weight": None if m.weight is None else m.weight.tolist(),
        "scaler": None
        if m.scaler is None
        else {"mins": m.scaler.mins.tolist(), "spans": m.scaler.spans.tolist()},
        "sv": [
            {
                "features": m.sv_features[i].tolist(),
                "label": int(m.sv_labels[i]),
                "alpha": float(m.sv_alpha[i]),
            }
            for i in range(m.n_sv)
        ],
        "diagnostics": {
            "n_free_sv": m.diagnostics.n_free_sv,
            "n_bounded_sv": m.diagnostics.n_bounded_sv,
            "margin_width": m.diagnostics.margin_width,
            "slack": m.diagnostics.slack.tolist(),
            "train_errors": m.diagnostics.train_errors,
            "converged": m.diagnostics.converged,
            "iterations": m.diagnostics.iterations,
        },
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_model(path: str | Path) -> SvmModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: not a valid model file: {exc}") from None
    try:
        if doc["version"] != MODEL_FORMAT_VERSION:
            raise SchemaMismatch(
                f"{path}: format version {doc['version']}, "
                f"expected {MODEL_FORMAT_VERSION}"
            )
        kern = doc["kernel"]
        kernel = KernelSpec(
            kind=kern["kind"],
            sigma2=kern["sigma2"],
            degree=kern["degree"],
            offset=kern["offset"],
        )
        scaler = None
        if doc["scaler"] is not None:
            scaler = MinMaxScale(
                mins=np.array(doc["scaler"]["mins"]),
                spans=np.array(doc["scaler"]["spans"]),
            )
        sv = doc["sv"]
        dim = doc["dim"]
        feats = np.array([s["features"] for s in sv], dtype=np.float64).reshape(
            len(sv), dim
        )
        diag = doc["diagnostics"]
        return SvmModel(
            kernel=kernel,
            variant=doc["variant"],
            c=doc["c"],
            bias=doc["bias"],
            sv_features=feats,
            sv_labels=np.array([s["label"] for s in sv], dtype=np.int64),
            sv_alpha=np.array([s["alpha"] for s in sv], dtype=np.float64),
            weight=None if doc["weight"] is None else np.array(doc["weight"]),
            scaler=scaler,
            dim=dim,
            diagnostics=SvDiagnostics(
                n_free_sv=diag["n_free_sv"],
                n_bounded_sv=diag["n_bounded_sv"],
                margin_width=diag["margin_width"],
                slack=np.array(diag["slack"], dtype=np.float64),
                train_errors=diag["train_errors"],
                converged=diag["converged"],
                iterations=diag["iterations"],
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"{path}: broken model document: {exc!r}") from None


# --- internals --------------------------------------------------------------


def _fit_scaler(ds: Dataset) -> MinMaxScale:
    mins = ds.x.min(axis=0)
    spans = ds.x.max(axis=0) - mins
    return MinMaxScale(mins=mins, spans=spans)


def _assemble(
    x: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig,
    scaler: MinMaxScale | None,
    problem: DualProblem,
    solution: DualSolution,
) -> SvmModel:
    alpha = solution.alpha
    bias = compute_bias(problem, alpha)
    box = min(problem.upper_bound, BOX_CAP)
    is_sv = alpha > SV_THRESHOLD
    bounded = is_sv & (alpha >= box - 1e-8 * max(1.0, box))
    weight = None
    if cfg.kernel.kind == "linear":
        weight = (alpha * y) @ x

    sv_idx = np.flatnonzero(is_sv)
    partial = SvmModel(
        kernel=cfg.kernel,
        variant=cfg.variant,
        c=cfg.c,
        bias=bias,
        sv_features=x[sv_idx].copy(),
        sv_labels=y[sv_idx].copy(),
        sv_alpha=alpha[sv_idx].copy(),
        weight=weight,
        scaler=None,  # x is already in scaled space here
        dim=x.shape[1],
        diagnostics=SvDiagnostics(0, 0, None, np.empty(0), 0, False, 0),
    )
    values = decision_values(partial, x)
    slack = np.maximum(0.0, 1.0 - y * values)
    train_errors = int(np.sum(np.where(values >= 0.0, 1, -1) != y))
    width = None
    if cfg.kernel.kind == "linear":
        norm = float(np.linalg.norm(weight))
        width = math.inf if norm == 0.0 else 2.0 / norm
    diagnostics = SvDiagnostics(
        n_free_sv=int(np.sum(is_sv & ~bounded)),
        n_bounded_sv=int(np.sum(bounded)),
        margin_width=width,
        slack=slack,
        train_errors=train_errors,
        converged=solution.converged,
        iterations=solution.iterations,
    )
    return replace(partial, scaler=scaler, diagnostics=diagnostics)
