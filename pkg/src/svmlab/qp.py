"""Dual quadratic programs and two ways to solve them.

``solve_smo`` is the workhorse: pairwise coordinate descent with
maximal-violating-pair selection, safe for any problem size this package
targets. ``solve_kkt_oracle`` instead solves the stationarity system
directly under the assumption that every sample ends up a support vector
with an inactive box; it exists as an independent cross-check and for
small worked examples where that assumption is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._smo import smo_pairs
from .errors import (
    AssumptionViolated,
    DegenerateProblem,
    LengthMismatch,
    SingularSystem,
)
from .kernels import HMatrix

# Box values above this are treated as unbounded in spirit but kept finite
# so the arithmetic stays in ordinary floats.
BOX_CAP = 1e12

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class DualProblem:
    """``min 0.5 a'Ha - f'a`` with ``0 <= a <= upper_bound``, ``y'a = 0``."""

    h: HMatrix
    labels: np.ndarray
    upper_bound: float = math.inf
    linear_coeff: np.ndarray | None = None

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.float64).ravel()
        object.__setattr__(self, "labels", labels)
        if labels.size != self.h.n:
            raise LengthMismatch(f"{labels.size} labels for n={self.h.n}")
        if not self.upper_bound > 0.0:
            raise ValueError("upper_bound must be positive")
        if self.linear_coeff is not None:
            f = np.asarray(self.linear_coeff, dtype=np.float64).ravel()
            if f.size != self.h.n:
                raise LengthMismatch(f"{f.size} linear coefficients for n={self.h.n}")
            object.__setattr__(self, "linear_coeff", f)

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def f(self) -> np.ndarray:
        if self.linear_coeff is None:
            return np.ones(self.n)
        return self.linear_coeff


@dataclass(frozen=True)
class SolverConfig:
    kkt_tolerance: float = 1e-3
    max_passes: int = 1_000_000
    seed: int = 0
    record_objective: bool = False


@dataclass(frozen=True)
class DualSolution:
    alpha: np.ndarray
    equality_multiplier: float
    objective: float
    iterations: int
    max_kkt_violation: float
    converged: bool
    objective_trace: np.ndarray | None = None


def solve_smo(p: DualProblem, cfg: SolverConfig = SolverConfig()) -> DualSolution:
    """Iterate violating pairs until the bias votes agree within tolerance.

    Never raises on hitting the update budget; the returned solution then
    carries ``converged=False`` and the best iterate found. The equality
    multiplier reported is the midpoint of the final vote spread, which at
    optimality equals the bias of the induced decision function.
    """
    _check_two_classes(p.labels)
    if p.linear_coeff is not None and not np.all(p.linear_coeff == 1.0):
        raise ValueError("pairwise solver assumes an all-ones linear term")
    box = min(p.upper_bound, BOX_CAP)
    trace_buf = np.empty(cfg.max_passes if cfg.record_objective else 0)
    alpha, steps, hi, lo, converged = smo_pairs(
        np.ascontiguousarray(p.h.entries),
        p.labels,
        float(box),
        float(cfg.kkt_tolerance),
        int(cfg.max_passes),
        np.uint64(cfg.seed & 0xFFFFFFFFFFFFFFFF),
        trace_buf,
    )
    return DualSolution(
        alpha=alpha,
        equality_multiplier=0.5 * (hi + lo),
        objective=dual_objective(p, alpha),
        iterations=int(steps),
        max_kkt_violation=max(hi - lo, 0.0),
        converged=bool(converged),
        objective_trace=trace_buf[:steps].copy() if cfg.record_objective else None,
    )


def solve_kkt_oracle(p: DualProblem) -> DualSolution:
    """Solve the all-support-vector stationarity system exactly.

    Assembles the bordered system ``[[0, y'], [y, H]] [lam; a] = [0; f]``
    and factorises it densely with partial pivoting. No ridge is ever
    added: a rank-deficient system raises :class:`SingularSystem` so the
    caller learns the solution set is not unique. If any resulting alpha
    is meaningfully negative the all-SV assumption was wrong and
    :class:`AssumptionViolated` is raised. Intended for n up to 50.
    """
    _check_two_classes(p.labels)
    n = p.n
    if n > 50:
        raise ValueError(f"oracle is a small-system tool, got n={n}")
    x, lam = solve_equality_qp(p.h.entries, -p.f, p.labels, 0.0)
    if np.any(x < -1e-9):
        raise AssumptionViolated(
            f"negative alpha {x.min():.3e}: not every sample is an unbounded SV"
        )
    bordered = _bordered(p.h.entries, p.labels)
    rhs = np.concatenate(([0.0], p.f))
    residual = float(np.abs(bordered @ np.concatenate(([-lam], x)) - rhs).max())
    return DualSolution(
        alpha=x,
        equality_multiplier=-lam,
        objective=dual_objective(p, x),
        iterations=0,
        max_kkt_violation=residual,
        converged=True,
    )


def solve_equality_qp(
    q: np.ndarray,
    linear: np.ndarray | float,
    constraint: np.ndarray,
    rhs: float,
) -> tuple[np.ndarray, float]:
    """Solve ``min 0.5 x'Qx + c'x`` subject to ``a'x = b`` exactly.

    Returns ``(x, multiplier)`` with the multiplier in the gradient
    convention ``Qx + c = multiplier * a``.
    """
    q = np.asarray(q, dtype=np.float64)
    a = np.asarray(constraint, dtype=np.float64).ravel()
    n = a.size
    if q.shape != (n, n):
        raise LengthMismatch(f"Q is {q.shape}, constraint has {n} entries")
    c = np.broadcast_to(np.asarray(linear, dtype=np.float64), (n,))
    bordered = _bordered(q, a)
    full_rhs = np.concatenate(([rhs], -c))
    try:
        z = np.linalg.solve(bordered, full_rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"bordered system is singular: {exc}") from None
    cond = np.linalg.cond(bordered)
    if not cond < _COND_LIMIT:
        raise SingularSystem(
            f"bordered system is numerically rank deficient (cond ~ {cond:.2e})"
        )
    return z[1:], float(-z[0])


def dual_objective(p: DualProblem, alpha: np.ndarray) -> float:
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    if alpha.size != p.n:
        raise LengthMismatch(f"{alpha.size} alphas for n={p.n}")
    return float(0.5 * alpha @ p.h.entries @ alpha - p.f @ alpha)


def kkt_violations(p: DualProblem, alpha: np.ndarray, bias: float) -> np.ndarray:
    """Per-sample optimality violation given a bias.

    Zero everywhere (up to tolerance) certifies the pair ``(alpha, bias)``:
    inactive samples must sit outside the margin, box-saturated ones inside,
    and free ones exactly on it.
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    margins = p.h.entries @ alpha + p.labels * bias  # y_i f(x_i) per sample
    box = min(p.upper_bound, BOX_CAP)
    edge = 1e-8 * max(1.0, box)
    at_zero = alpha <= edge
    at_box = alpha >= box - edge
    v = np.abs(1.0 - margins)
    v[at_zero] = np.maximum(1.0 - margins[at_zero], 0.0)
    v[at_box] = np.maximum(margins[at_box] - 1.0, 0.0)
    return v


def _bordered(q: np.ndarray, a: np.ndarray) -> np.ndarray:
    n = a.size
    out = np.zeros((n + 1, n + 1))
    out[0, 1:] = a
    out[1:, 0] = a
    out[1:, 1:] = q
    return out


def _check_two_classes(labels: np.ndarray) -> None:
    if not (np.any(labels > 0) and np.any(labels < 0)):
        raise DegenerateProblem("equality constraint needs both label signs")
