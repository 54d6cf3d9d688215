"""Command-line interface: lpa, louvain, modularity, stats, bench.

Exit codes: 0 success, 1 usage error, 2 input/data error. Numeric results
print with fixed 9-decimal formatting so runs can be diffed byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

FLOAT_FMT = "{:.9f}"


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _bootstrap_thread_cap(argv: List[str]) -> None:
    """Raise the worker-pool cap before numba is imported.

    The pool size ceiling is fixed at import time, so the largest thread
    count mentioned on the command line (or in WORKER_THREADS) must be
    known before the kernel modules load.
    """
    if "numba" in sys.modules or "NUMBA_NUM_THREADS" in os.environ:
        return
    wanted = [os.cpu_count() or 1]
    env = os.environ.get("WORKER_THREADS")
    if env and env.isdigit():
        wanted.append(int(env))
    for i, arg in enumerate(argv):
        value = None
        if arg == "--threads" and i + 1 < len(argv):
            value = argv[i + 1]
        elif arg.startswith("--threads="):
            value = arg.split("=", 1)[1]
        if value:
            for part in value.split(","):
                if part.strip().isdigit():
                    wanted.append(int(part))
    os.environ["NUMBA_NUM_THREADS"] = str(max(wanted))


def _parse_thread_list(text: str) -> List[int]:
    try:
        threads = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"bad thread list {text!r}") from None
    if not threads:
        raise ValueError("thread list is empty")
    return threads


def _build_parser() -> _Parser:
    parser = _Parser(prog="comdet",
                     description="Parallel community detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, deterministic=True):
        p.add_argument("graph", help="SNAP-style edge list file")
        p.add_argument("--max-iterations", type=int, default=None)
        if deterministic:
            p.add_argument("--deterministic", action="store_true")
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("-o", "--output", default=None,
                       help="assignment TSV output path")

    p_lpa = sub.add_parser("lpa", help="parallel label propagation")
    add_common(p_lpa)
    p_lpa.add_argument("--threshold", type=int, default=0)

    p_louvain = sub.add_parser("louvain", help="multi-level Louvain")
    add_common(p_louvain)
    p_louvain.add_argument("--max-levels", type=int, default=None)
    p_louvain.add_argument("--levels-out", default=None,
                           help="per-level summary TSV path")

    p_mod = sub.add_parser("modularity", help="modularity of an assignment")
    p_mod.add_argument("graph")
    p_mod.add_argument("assignment")

    p_stats = sub.add_parser("stats", help="basic graph statistics")
    p_stats.add_argument("graph")

    p_bench = sub.add_parser("bench", help="phase-level benchmark harness")
    p_bench.add_argument("graph")
    p_bench.add_argument("--algo", choices=["lpa", "louvain"], required=True)
    p_bench.add_argument("--threads", default="1",
                         help="comma-separated thread counts")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--format", choices=["json", "csv"], default="json")
    p_bench.add_argument("-o", "--output", default=None)
    p_bench.add_argument("--figures", default=None, metavar="DIR",
                         help="also render figures into DIR")
    p_bench.add_argument("--deterministic", action="store_true")
    p_bench.add_argument("--seed", type=int, default=0)
    return parser


def _load(path):
    from .ingest import load_graph

    try:
        return load_graph(path)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_assignment_file(partition, raw, path) -> None:
    from .ingest import write_assignment

    with open(path, "w", encoding="utf-8") as fh:
        write_assignment(partition, raw.reverse_map, fh)


def _cmd_lpa(args) -> int:
    from .bench import resolve_thread_count, set_worker_threads
    from .lpa import LpaConfig, lpa_run
    from .quality import modularity

    set_worker_threads(resolve_thread_count(args.threads))
    cfg = LpaConfig(
        max_iterations=args.max_iterations or 100,
        threshold=args.threshold,
        deterministic=args.deterministic,
        seed=args.seed,
    )
    graph, raw = _load(args.graph)
    partition, iterations, updates = lpa_run(graph, cfg)
    if args.output:
        _write_assignment_file(partition, raw, args.output)
    q = modularity(graph, partition) if graph.total_volume > 0 else 0.0
    print(f"algorithm=lpa iterations={iterations} "
          f"updates_last={updates[-1] if updates else 0} "
          f"communities={partition.k} modularity={FLOAT_FMT.format(q)}")
    return 0


def _cmd_louvain(args) -> int:
    from .bench import resolve_thread_count, set_worker_threads
    from .louvain import LouvainConfig, louvain_run
    from .quality import modularity

    set_worker_threads(resolve_thread_count(args.threads))
    cfg = LouvainConfig(
        max_iterations=args.max_iterations or 20,
        max_levels=args.max_levels or 32,
        deterministic=args.deterministic,
        seed=args.seed,
    )
    graph, raw = _load(args.graph)
    dendrogram, report = louvain_run(graph, cfg)
    for i, q in enumerate(dendrogram.modularity_per_level, start=1):
        coarse, partition = dendrogram.levels[i - 1]
        print(f"level={i} vertices={coarse.n} communities={partition.k} "
              f"modularity={FLOAT_FMT.format(q)}")
    if args.output:
        _write_assignment_file(dendrogram.final, raw, args.output)
    if args.levels_out:
        with open(args.levels_out, "w", encoding="utf-8") as fh:
            fh.write("level\tvertices\tcommunities\tmodularity\n")
            for i, q in enumerate(dendrogram.modularity_per_level, start=1):
                coarse, partition = dendrogram.levels[i - 1]
                fh.write(f"{i}\t{coarse.n}\t{partition.k}\t"
                         f"{FLOAT_FMT.format(q)}\n")
    final_q = modularity(graph, dendrogram.final)
    print(f"algorithm=louvain levels={dendrogram.num_levels} "
          f"communities={dendrogram.final.k} "
          f"modularity={FLOAT_FMT.format(final_q)}")
    return 0


def _cmd_modularity(args) -> int:
    from .ingest import read_assignment
    from .quality import modularity

    graph, raw = _load(args.graph)
    try:
        with open(args.assignment, "r", encoding="utf-8") as fh:
            partition = read_assignment(fh, raw.id_map)
    except OSError as exc:
        raise ValueError(
            f"cannot read {args.assignment}: {exc.strerror or exc}") from exc
    print(FLOAT_FMT.format(modularity(graph, partition)))
    return 0


def _cmd_stats(args) -> int:
    import numpy as np

    graph, _ = _load(args.graph)
    degrees = np.diff(graph.offsets)
    mind = int(degrees.min()) if graph.n else 0
    maxd = int(degrees.max()) if graph.n else 0
    meand = float(degrees.mean()) if graph.n else 0.0
    print(f"n={graph.n} m={graph.num_edges} loops={graph.num_loops} "
          f"volume={FLOAT_FMT.format(graph.total_volume)} "
          f"min_degree={mind} max_degree={maxd} "
          f"mean_degree={FLOAT_FMT.format(meand)}")
    return 0


def _cmd_bench(args) -> int:
    from .bench import run_bench, write_report

    threads = _parse_thread_list(args.threads)
    if args.algo == "louvain":
        from .louvain import LouvainConfig

        cfg = LouvainConfig(deterministic=args.deterministic, seed=args.seed)
    else:
        from .lpa import LpaConfig

        cfg = LpaConfig(deterministic=args.deterministic, seed=args.seed)
    reports = run_bench(args.graph, args.algo, cfg, threads, args.reps)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_report(reports, args.format, fh)
        print(f"wrote {args.format} report to {args.output}")
    else:
        write_report(reports, args.format, sys.stdout)
    if args.figures:
        from .figures import render_bench_figures

        for path in render_bench_figures(reports, args.figures):
            print(f"wrote figure {path}")
    return 0


_COMMANDS = {
    "lpa": _cmd_lpa,
    "louvain": _cmd_louvain,
    "modularity": _cmd_modularity,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    _bootstrap_thread_cap(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"comdet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
