"""Shared-memory parallel community detection toolkit.

Asynchronous label propagation and multi-level Louvain over an immutable
CSR graph, with a modularity/move-gain quality engine, SNAP-format
ingestion, a benchmarking harness, and a CLI.

The algorithm submodules (``lpa``, ``louvain``, ``bench``) load the JIT
kernels on first use; import them lazily so the worker-pool cap
(``NUMBA_NUM_THREADS``) can still be configured at process start.
"""

from __future__ import annotations

from .graph import Graph, build, build_from_arrays
from .ingest import ParseError, RawEdgeList, load_graph, parse_snap, write_assignment
from .quality import (
    Partition,
    brute_force_best_partition,
    community_volumes,
    cut_between,
    delta_q,
    modularity,
)

__version__ = "0.1.0"

__all__ = [
    "Graph", "build", "build_from_arrays",
    "ParseError", "RawEdgeList", "load_graph", "parse_snap", "write_assignment",
    "Partition", "modularity", "delta_q", "cut_between",
    "community_volumes", "brute_force_best_partition",
    "LpaConfig", "lpa_run",
    "LouvainConfig", "Dendrogram", "louvain_run", "local_moving", "aggregate",
    "BenchReport", "run_bench", "write_report", "set_worker_threads",
]

_LAZY = {
    "LpaConfig": ("comdet.lpa", "LpaConfig"),
    "lpa_run": ("comdet.lpa", "lpa_run"),
    "LouvainConfig": ("comdet.louvain", "LouvainConfig"),
    "Dendrogram": ("comdet.louvain", "Dendrogram"),
    "louvain_run": ("comdet.louvain", "louvain_run"),
    "local_moving": ("comdet.louvain", "local_moving"),
    "aggregate": ("comdet.louvain", "aggregate"),
    "BenchReport": ("comdet.bench", "BenchReport"),
    "run_bench": ("comdet.bench", "run_bench"),
    "write_report": ("comdet.bench", "write_report"),
    "set_worker_threads": ("comdet.bench", "set_worker_threads"),
}


def __getattr__(name: str):
    if name in _LAZY:
        import importlib

        module, attr = _LAZY[name]
        return getattr(importlib.import_module(module), attr)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
