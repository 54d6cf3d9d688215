"""Render benchmark reports as figures next to the delimited output."""

from __future__ import annotations

import os
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchReport

__all__ = ["render_bench_figures"]

_BAR_PHASES = ["local_moving", "aggregation", "propagation", "ingest", "build"]


def _scaling_figure(reports: Sequence[BenchReport], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    by_key: dict = {}
    for r in reports:
        by_key.setdefault((r.dataset, r.algorithm), []).append(r)
    for (dataset, algorithm), group in sorted(by_key.items()):
        group = sorted(group, key=lambda r: r.threads)
        xs = [r.threads for r in group]
        ys = [r.total_seconds_mean for r in group]
        ax.plot(xs, ys, marker="o", label=f"{dataset} {algorithm}")
    ax.set_xlabel("threads")
    ax.set_ylabel("mean total seconds")
    ax.set_xscale("log", base=2)
    ax.set_title("Runtime vs. thread count")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _phase_figure(reports: Sequence[BenchReport], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    reports = sorted(reports, key=lambda r: (r.dataset, r.algorithm, r.threads))
    labels = [f"{r.threads}" for r in reports]
    xs = range(len(reports))
    bottom = [0.0] * len(reports)
    for phase in _BAR_PHASES:
        heights = [r.phase_seconds.get(phase, 0.0) for r in reports]
        if not any(heights):
            continue
        ax.bar(xs, heights, bottom=bottom, label=phase)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_xlabel("threads")
    ax.set_ylabel("mean seconds")
    ax.set_title("Phase breakdown")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench_figures(reports: Sequence[BenchReport],
                         out_dir: str) -> List[str]:
    """Write scaling and phase-breakdown PNGs; returns the file paths."""
    if not reports:
        raise ValueError("no reports to plot")
    os.makedirs(out_dir, exist_ok=True)
    scaling = os.path.join(out_dir, "scaling.png")
    phases = os.path.join(out_dir, "phase_breakdown.png")
    _scaling_figure(reports, scaling)
    _phase_figure(reports, phases)
    return [scaling, phases]
