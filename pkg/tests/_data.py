"""Real-dataset loaders for the evaluation tests.

The iris table ships with scikit-learn, so it always loads. The other two
are pulled from OpenML when the network allows; for offline runs drop a
plain numeric CSV (features first, label last) named ``sonar.csv`` or
``breast-w.csv`` into ``tests/data/`` or the directory named by
``SVMLAB_DATA_DIR`` and it will be picked up instead.
"""
from __future__ import annotations

import os
import socket
import warnings
from pathlib import Path

import numpy as np

from svmlab.dataset import Dataset, load_csv

_FETCH_TIMEOUT = 15.0


def _local_dirs() -> list[Path]:
    dirs = [Path(__file__).parent / "data"]
    env = os.environ.get("SVMLAB_DATA_DIR")
    if env:
        dirs.append(Path(env))
    return dirs


def _from_local(name: str, positive_label: str) -> Dataset | None:
    for root in _local_dirs():
        path = root / f"{name}.csv"
        if path.is_file():
            ds = load_csv(path, label_column=-1, positive_label=positive_label)
            return Dataset(ds.x, ds.y, name=name)
    return None


def _from_openml(name: str, version: int, positive_label: str) -> Dataset | None:
    try:
        from sklearn.datasets import fetch_openml
    except ImportError:
        return None
    previous = socket.getdefaulttimeout()
    socket.setdefaulttimeout(_FETCH_TIMEOUT)
    try:
        with warnings.catch_warnings():
            # sklearn warns on every retry; the None return already says it all
            warnings.simplefilter("ignore", UserWarning)
            bunch = fetch_openml(
                name=name, version=version, as_frame=False, parser="auto"
            )
    except Exception:
        return None
    finally:
        socket.setdefaulttimeout(previous)
    x = np.asarray(bunch.data, dtype=np.float64)
    labels = np.asarray(bunch.target).astype(str)
    keep = ~np.isnan(x).any(axis=1)
    x, labels = x[keep], labels[keep]
    y = np.where(labels == positive_label, 1, -1)
    return Dataset(x, y, name=name)


def iris_two_class() -> Dataset:
    """Setosa vs versicolor on all four measurements, setosa mapped to +1."""
    from sklearn.datasets import load_iris

    raw = load_iris()
    keep = raw.target < 2
    y = np.where(raw.target[keep] == 0, 1, -1)
    return Dataset(raw.data[keep], y, name="iris-2class")


def wisconsin_breast() -> Dataset | None:
    """683 complete rows of the 9-feature clinical table, malignant = +1."""
    return _from_local("breast-w", "malignant") or _from_openml(
        "breast-w", 1, "malignant"
    )


def sonar_returns() -> Dataset | None:
    """60 spectral bands, rock echoes mapped to +1 (the smaller class)."""
    return _from_local("sonar", "Rock") or _from_openml("sonar", 1, "Rock")


UNAVAILABLE_NOTICE = (
    "{name} is not available: no local CSV under tests/data or "
    "$SVMLAB_DATA_DIR and OpenML is unreachable. Accuracy window left "
    "unverified on this run."
)
