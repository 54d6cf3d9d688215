"""Shared fixtures and test helpers.

The worker-pool cap must be configured before the kernels module loads,
so the environment tweak at the top runs before any comdet import.
"""

import os

os.environ.setdefault("NUMBA_NUM_THREADS", "8")

from pathlib import Path

import numpy as np
import pytest

from comdet.graph import Graph, build

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Load/compile the JIT kernels once so timing bounds measure the
    algorithms rather than compilation, regardless of test selection."""
    from comdet.louvain import LouvainConfig, louvain_run
    from comdet.lpa import LpaConfig, lpa_run

    tiny = build([(0, 1, 1)], n=2)
    for deterministic in (True, False):
        lpa_run(tiny, LpaConfig(deterministic=deterministic))
        louvain_run(tiny, LouvainConfig(deterministic=deterministic))

BARBELL_EDGES = [(0, 1, 1), (0, 2, 1), (1, 2, 1),
                 (3, 4, 1), (3, 5, 1), (4, 5, 1), (2, 3, 1)]
BARBELL_Q = 5.0 / 14.0  # two triangles + bridge: 2 * (6/14 - 49/196)

TWO_TRIANGLES_EDGES = [(0, 1, 1), (0, 2, 1), (1, 2, 1),
                       (3, 4, 1), (3, 5, 1), (4, 5, 1)]
TWO_TRIANGLES_Q = 0.5  # 2 * (6/12 - 36/144)


@pytest.fixture
def barbell() -> Graph:
    return build(BARBELL_EDGES, n=6)


@pytest.fixture
def two_triangles() -> Graph:
    return build(TWO_TRIANGLES_EDGES, n=6)


@pytest.fixture
def k5_pair() -> Graph:
    edges = []
    for base in (0, 5):
        for i in range(5):
            for j in range(i + 1, 5):
                edges.append((base + i, base + j, 1))
    return build(edges, n=10)


def random_edge_list(rng, n, m, weighted=False, loops=True):
    u = rng.integers(0, n, size=m)
    v = rng.integers(0, n, size=m)
    if not loops:
        mask = u == v
        v[mask] = (v[mask] + 1) % n
    if weighted:
        w = rng.uniform(0.5, 4.0, size=m)
    else:
        w = np.ones(m, dtype=np.float64)
    return u, v, w


def write_snap(path, edges):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# test graph\n")
        for e in edges:
            if len(e) == 2 or e[2] == 1:
                fh.write(f"{e[0]}\t{e[1]}\n")
            else:
                fh.write(f"{e[0]}\t{e[1]}\t{e[2]}\n")
    return path


@pytest.fixture
def barbell_file(tmp_path):
    return write_snap(tmp_path / "barbell.tsv", BARBELL_EDGES)


def find_dataset(*filenames):
    """Locate a SNAP dataset under COMDET_DATA_DIR or ./data, else None."""
    candidates = []
    env = os.environ.get("COMDET_DATA_DIR")
    if env:
        candidates.append(Path(env))
    candidates.append(REPO_ROOT / "data")
    for directory in candidates:
        for name in filenames:
            path = directory / name
            if path.is_file():
                return path
    return None


# -- acceptance reporting ----------------------------------------------------

_acceptance_results = []


def _skip_reason(report):
    if isinstance(report.longrepr, tuple):
        return report.longrepr[2].split(":", 1)[-1].strip()
    return str(report.longrepr or "").strip()


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[-1]
    if report.when == "call":
        if hasattr(report, "wasxfail"):
            outcome = "ADVISORY (xfail)" if report.skipped else "PASS (advisory)"
            reason = str(report.wasxfail).split(":", 1)[-1].strip()
        else:
            outcome = report.outcome.upper()
            reason = _skip_reason(report) if report.skipped else ""
        _acceptance_results.append((name, outcome, reason))
    elif report.when == "setup" and report.skipped:
        _acceptance_results.append((name, "SKIP", _skip_reason(report)))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    tw = terminalreporter
    tw.write_sep("=", "acceptance criteria")
    for name, outcome, reason in _acceptance_results:
        line = f"ACCEPTANCE {name}: {outcome}"
        if reason:
            line += f" [{reason}]"
        tw.write_line(line)
