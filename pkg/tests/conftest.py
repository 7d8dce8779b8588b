from __future__ import annotations

import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).resolve().parent.parent
ELEC2_PATH = Path(os.environ.get("ELEC2_CSV", REPO_ROOT / "data" / "elec2.csv"))

ELEC2_HEADER = "date,day,period,nswprice,nswdemand,vicprice,vicdemand,transfer,class"


def make_elec2_like_csv(path: Path, rows: int = 1400, seed: int = 7) -> Path:
    """A synthetic file with the ELEC2 column layout, for adapter tests.

    Not the benchmark itself: values are random with a couple of real
    dependencies so the pipeline has structure to find.
    """
    rng = np.random.default_rng(seed)
    price = rng.uniform(0, 1, rows)
    demand = 0.6 * price + 0.1 * rng.uniform(0, 1, rows)
    vicprice = rng.uniform(0, 1, rows)
    vicdemand = 0.7 * vicprice + 0.1 * rng.uniform(0, 1, rows)
    transfer = rng.uniform(0, 1, rows)
    label = np.where(price + 0.2 * rng.uniform(0, 1, rows) > 0.6, "UP", "DOWN")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ELEC2_HEADER + "\n")
        for k in range(rows):
            fh.write(
                f"{k / rows:.6f},{1 + k % 7},{k % 48},{price[k]:.6f},{demand[k]:.6f},"
                f"{vicprice[k]:.6f},{vicdemand[k]:.6f},{transfer[k]:.6f},{label[k]}\n")
    return path


@pytest.fixture
def elec2_like_csv(tmp_path):
    return make_elec2_like_csv(tmp_path / "elec_like.csv")


@pytest.fixture(scope="session")
def elec2_real():
    """The true benchmark file, when available."""
    if not ELEC2_PATH.exists():
        pytest.skip(
            f"ELEC2 dataset not found at {ELEC2_PATH}; run scripts/fetch_elec2.py "
            "(needs network) or point ELEC2_CSV at a local copy")
    return ELEC2_PATH


_acceptance_results: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance" not in str(item.fspath):
        return
    record = (report.when == "call") or (report.when == "setup" and report.skipped)
    if not record:
        return
    status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(
        report.outcome, report.outcome.upper())
    _acceptance_results.append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, status in _acceptance_results:
        terminalreporter.write_line(f"{status:5s} {name}")
