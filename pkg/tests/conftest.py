"""Shared fixtures plus the acceptance-summary reporting hook."""
from __future__ import annotations

import numpy as np
import pytest

from svmlab import TrainConfig, train
from svmlab.dataset import Dataset
from svmlab.kernels import KernelSpec
from svmlab.qp import SolverConfig

ACCEPTANCE_FILE = "test_acceptance.py"


@pytest.fixture(scope="session")
def warm_solver():
    """Compile the jitted solver before anything timed runs."""
    ds = Dataset(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1, -1, -1, 1]
    )
    train(ds, TrainConfig(kernel=KernelSpec.rbf(0.5), c=2.0))
    train(ds, TrainConfig(kernel=KernelSpec.linear(), c=1.0, variant="l2"))
    return True


@pytest.fixture()
def tight() -> SolverConfig:
    return SolverConfig(kkt_tolerance=1e-10)


@pytest.fixture()
def pair_1d() -> Dataset:
    """Two points on a line; the margin midpoint sits at x = 4."""
    return Dataset([[2.0], [6.0]], [-1, 1])


@pytest.fixture()
def four_corners() -> Dataset:
    """Unit square corners split by the vertical axis."""
    return Dataset(
        [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]], [1, 1, -1, -1]
    )


@pytest.fixture()
def parabola_points() -> Dataset:
    """Three collinear inputs only a quadratic surface can split."""
    return Dataset([[2.0], [6.0], [8.0]], [-1, 1, -1])


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


# --- acceptance summary ------------------------------------------------------
#
# Every test in test_acceptance.py gets one PASS/FAIL/SKIP line in its own
# terminal section, titled by the first docstring line, in definition order.


def pytest_configure(config):
    config._acceptance_lines = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        if item.fspath.basename == ACCEPTANCE_FILE:
            doc = (getattr(item.function, "__doc__", None) or "").strip()
            title = doc.splitlines()[0] if doc else item.name
            config._acceptance_lines[item.nodeid] = {
                "title": title, "outcome": "NOT RUN"
            }


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    lines = getattr(item.config, "_acceptance_lines", {})
    if item.nodeid not in lines:
        return
    if report.when == "call":
        lines[item.nodeid]["outcome"] = (
            "PASS" if report.passed else "SKIP" if report.skipped else "FAIL"
        )
    elif report.when == "setup" and not report.passed:
        lines[item.nodeid]["outcome"] = "SKIP" if report.skipped else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for info in lines.values():
        terminalreporter.write_line(f"[{info['outcome']}] {info['title']}")
