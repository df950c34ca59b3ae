"""Kernel functions and the matrices built from them.

The RBF kernel is parameterised by sigma^2 directly:
``k(a, b) = exp(-||a - b||^2 / (2 * sigma^2))``. Libraries that use a
``gamma`` instead relate to it by ``gamma = 1 / (2 * sigma^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DimensionMismatch, LengthMismatch


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    sigma2: float | None = None
    degree: int | None = None
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("linear", "rbf", "poly"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf":
            if self.sigma2 is None or not self.sigma2 > 0.0:
                raise ValueError("rbf kernel needs sigma2 > 0")
        if self.kind == "poly":
            if self.degree is None or self.degree < 1:
                raise ValueError("poly kernel needs integer degree >= 1")

    @staticmethod
    def linear() -> "KernelSpec":
        return KernelSpec("linear")

    @staticmethod
    def rbf(sigma2: float) -> "KernelSpec":
        return KernelSpec("rbf", sigma2=float(sigma2))

    @staticmethod
    def polynomial(degree: int, offset: float = 0.0) -> "KernelSpec":
        return KernelSpec("poly", degree=int(degree), offset=float(offset))

    def label(self) -> str:
        if self.kind == "rbf":
            return f"rbf(sigma2={self.sigma2:g})"
        if self.kind == "poly":
            return f"poly(degree={self.degree}, offset={self.offset:g})"
        return "linear"


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric kernel matrix over one sample set."""

    n: int
    entries: np.ndarray


@dataclass(frozen=True)
class HMatrix:
    """Label-signed quadratic form ``H_ij = y_i y_j k(x_i, x_j)``.

    ``variant_shift`` is the amount added to the diagonal (``1/C`` for the
    squared-slack variant), kept on record so solutions can be interpreted.
    """

    n: int
    entries: np.ndarray
    variant_shift: float = 0.0


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"vectors of dim {a.size} and {b.size}")
    return float(kernel_cross(spec, a[None, :], b[None, :])[0, 0])


def kernel_cross(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kernel values between every row of ``a`` and every row of ``b``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"feature dims {a.shape[1]} vs {b.shape[1]}")
    dots = a @ b.T
    if spec.kind == "linear":
        return dots
    if spec.kind == "poly":
        return (dots + spec.offset) ** spec.degree
    sq_a = np.sum(a * a, axis=1)
    sq_b = np.sum(b * b, axis=1)
    d2 = np.maximum(sq_a[:, None] + sq_b[None, :] - 2.0 * dots, 0.0)
    assert spec.sigma2 is not None
    return np.exp(-d2 / (2.0 * spec.sigma2))


def gram_matrix(spec: KernelSpec, ds: Dataset | np.ndarray) -> GramMatrix:
    """Kernel matrix of a sample set, exactly symmetric.

    The upper triangle is computed and mirrored, so float round-off can
    never break symmetry. For the RBF kernel the diagonal is pinned to 1.
    """
    x = ds.x if isinstance(ds, Dataset) else np.atleast_2d(np.asarray(ds, dtype=np.float64))
    k = kernel_cross(spec, x, x)
    if spec.kind == "rbf":
        np.fill_diagonal(k, 1.0)
    upper = np.triu(k)
    entries = upper + np.triu(k, 1).T
    return GramMatrix(n=x.shape[0], entries=entries)


def h_matrix(gram: GramMatrix, labels: np.ndarray, variant_shift: float = 0.0) -> HMatrix:
    labels = np.asarray(labels, dtype=np.float64).ravel()
    if labels.size != gram.n:
        raise LengthMismatch(f"{labels.size} labels for a {gram.n}-sample gram matrix")
    if variant_shift < 0.0:
        raise ValueError("variant_shift must be >= 0")
    entries = np.outer(labels, labels) * gram.entries
    if variant_shift:
        entries = entries + variant_shift * np.eye(gram.n)
    return HMatrix(n=gram.n, entries=entries, variant_shift=variant_shift)
