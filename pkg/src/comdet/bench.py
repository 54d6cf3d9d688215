"""Timing harness: repeated runs, phase breakdown, thread sweeps.

Wall-clock times come from the monotonic high-resolution clock. Parsing
and graph construction are timed as their own phases and never count
toward algorithm time, and neither does modularity evaluation. Worker
count is a process-level knob (``--threads`` flag or ``WORKER_THREADS``
environment variable) applied before the kernels run.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field
from typing import IO, Dict, List, Optional, Sequence

import numpy as np

__all__ = ["BenchReport", "set_worker_threads", "resolve_thread_count",
           "run_bench", "write_report"]

DEFAULT_REPETITIONS = 5

THREADS_ENV_VAR = "WORKER_THREADS"


@dataclass
class BenchReport:
    """One benchmark configuration: per-run totals plus phase means."""

    dataset: str
    algorithm: str
    threads: int
    repetitions: int
    total_seconds_runs: List[float]
    phase_seconds: Dict[str, float] = field(default_factory=dict)
    iterations: Optional[int] = None
    levels: Optional[int] = None
    final_modularity: float = 0.0

    @property
    def total_seconds_mean(self) -> float:
        return float(np.mean(self.total_seconds_runs))

    def to_json_obj(self) -> dict:
        return {
            "dataset": self.dataset,
            "algorithm": self.algorithm,
            "threads": self.threads,
            "repetitions": self.repetitions,
            "total_seconds": {
                "mean": self.total_seconds_mean,
                "runs": list(self.total_seconds_runs),
            },
            "phase_seconds": dict(self.phase_seconds),
            "iterations": self.iterations,
            "levels": self.levels,
            "final_modularity": self.final_modularity,
        }


def max_worker_threads() -> int:
    import numba

    return int(numba.config.NUMBA_NUM_THREADS)


def set_worker_threads(threads: int) -> None:
    """Set the worker-pool size used by the parallel kernels."""
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"invalid thread count {threads}")
    limit = max_worker_threads()
    if threads > limit:
        raise ValueError(
            f"invalid thread count {threads}: this process is capped at "
            f"{limit} workers (raise NUMBA_NUM_THREADS before startup)")
    import numba

    numba.set_num_threads(threads)


def resolve_thread_count(flag_value: Optional[int] = None) -> int:
    """--threads flag wins, then WORKER_THREADS, then the machine core count."""
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        return int(env)
    return min(os.cpu_count() or 1, max_worker_threads())


def _run_once(graph, algorithm: str, cfg) -> BenchReport:
    from .quality import modularity

    if algorithm == "louvain":
        from .louvain import louvain_run

        _, report = louvain_run(graph, cfg)
        return report
    if algorithm == "lpa":
        from .lpa import lpa_run

        t0 = time.perf_counter()
        partition, iterations, _ = lpa_run(graph, cfg)
        elapsed = time.perf_counter() - t0
        return BenchReport(
            dataset="",
            algorithm="lpa",
            threads=0,
            repetitions=1,
            total_seconds_runs=[elapsed],
            phase_seconds={"propagation": elapsed},
            iterations=iterations,
            final_modularity=modularity(graph, partition),
        )
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_bench(graph_path, algorithm: str, cfg, threads: Sequence[int],
              repetitions: int = DEFAULT_REPETITIONS) -> List[BenchReport]:
    """Benchmark one algorithm over a list of thread counts.

    The input graph is parsed and built once (timed as the ``ingest`` and
    ``build`` phases, shared by all reports). For every thread count the
    algorithm executes ``repetitions`` timed runs after one untimed warm-up
    that absorbs JIT compilation.
    """
    from .ingest import parse_snap

    if algorithm not in ("lpa", "louvain"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not threads:
        raise ValueError("thread list must be non-empty")
    for t in threads:
        if int(t) < 1:
            raise ValueError(f"invalid thread count {t}")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    t0 = time.perf_counter()
    with open(graph_path, "r", encoding="utf-8") as fh:
        raw = parse_snap(fh)
    t_ingest = time.perf_counter() - t0
    t0 = time.perf_counter()
    graph = raw.build()
    t_build = time.perf_counter() - t0
    dataset = os.path.basename(os.fspath(graph_path))

    reports: List[BenchReport] = []
    warmed = False
    for t in threads:
        set_worker_threads(int(t))
        if not warmed:
            _run_once(graph, algorithm, cfg)
            warmed = True
        runs: List[BenchReport] = [
            _run_once(graph, algorithm, cfg) for _ in range(repetitions)
        ]
        phases: Dict[str, float] = {"ingest": t_ingest, "build": t_build}
        for key in runs[0].phase_seconds:
            phases[key] = float(np.mean([r.phase_seconds[key] for r in runs]))
        last = runs[-1]
        reports.append(BenchReport(
            dataset=dataset,
            algorithm=algorithm,
            threads=int(t),
            repetitions=repetitions,
            total_seconds_runs=[r.total_seconds_mean for r in runs],
            phase_seconds=phases,
            iterations=last.iterations,
            levels=last.levels,
            final_modularity=last.final_modularity,
        ))
    return reports


CSV_COLUMNS = [
    "dataset", "algorithm", "threads", "repetitions", "phase",
    "phase_mean_seconds", "total_mean_seconds", "iterations", "levels",
    "final_modularity",
]


def write_report(reports: Sequence[BenchReport], format: str,
                 sink: IO[str]) -> None:
    """Serialize reports as a JSON array or one CSV row per (report, phase)."""
    if not reports:
        raise ValueError("no reports to write")
    if format == "json":
        json.dump([r.to_json_obj() for r in reports], sink, indent=2)
        sink.write("\n")
        return
    if format == "csv":
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            phases = r.phase_seconds or {"total": r.total_seconds_mean}
            for phase in sorted(phases):
                writer.writerow([
                    r.dataset, r.algorithm, r.threads, r.repetitions, phase,
                    f"{phases[phase]:.9f}", f"{r.total_seconds_mean:.9f}",
                    "" if r.iterations is None else r.iterations,
                    "" if r.levels is None else r.levels,
                    f"{r.final_modularity:.9f}",
                ])
        return
    raise ValueError(f"unknown report format {format!r}")
