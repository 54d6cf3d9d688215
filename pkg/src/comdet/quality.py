"""Partition quality: modularity, per-vertex cuts, and single-move gains.

Modularity of a partition C is

    Q = sum_c [ (vol_w(c) - cut_w(c)) / vol_w(V)  -  vol_w(c)^2 / vol_w(V)^2 ]

and the gain of moving vertex v from community A to community B is

    dQ = 2 * [ (cut_w(v, B-) - cut_w(v, A-)) / vol_w(V)
               - deg_w(v) * (vol_w(B-) - vol_w(A-)) / vol_w(V)^2 ]

where A-/B- denote A/B with v excluded. Loops never cross a community
boundary so they contribute to volumes (twice) but never to cuts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .graph import Graph

__all__ = [
    "Partition",
    "community_volumes",
    "modularity",
    "cut_between",
    "delta_q",
    "brute_force_best_partition",
]

BRUTE_FORCE_MAX_N = 12


@dataclass(frozen=True)
class Partition:
    """Vertex -> community assignment over a dense vertex set.

    Labels are non-negative integers; they need not be contiguous until
    :meth:`normalized` is applied (first-appearance order, so the community
    of vertex 0 becomes community 0).
    """

    assignment: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.assignment, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        if arr.size and arr.min() < 0:
            raise ValueError("community ids must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)
        object.__setattr__(self, "k", int(np.unique(arr).size))

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    def normalized(self) -> "Partition":
        """Relabel communities to [0, k) in order of first appearance."""
        if self.n == 0:
            return self
        uniq, first, inverse = np.unique(
            self.assignment, return_index=True, return_inverse=True
        )
        rank = np.empty(uniq.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(uniq.size)
        return Partition(rank[inverse])

    def communities(self) -> List[set]:
        """Communities as a list of vertex sets, ordered by label."""
        out: Dict[int, set] = {}
        for v, c in enumerate(self.assignment):
            out.setdefault(int(c), set()).add(v)
        return [out[c] for c in sorted(out)]

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and np.array_equal(
            self.assignment, other.assignment
        )


def _check_cover(g: Graph, p: Partition) -> None:
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")


def community_volumes(g: Graph, p: Partition) -> np.ndarray:
    """vol_w per community id, indexed 0..max_label."""
    _check_cover(g, p)
    if g.n == 0:
        return np.zeros(0, dtype=np.float64)
    size = int(p.assignment.max()) + 1
    return np.bincount(p.assignment, weights=g.degree_weighted, minlength=size)


def modularity(g: Graph, p: Partition) -> float:
    """Modularity Q of a partition; always within [-0.5, 1].

    Raises ValueError for a graph with zero total volume (Q undefined).
    """
    _check_cover(g, p)
    vol = g.total_volume
    if vol <= 0.0:
        raise ValueError("modularity undefined: graph has zero total volume")
    labels = p.assignment
    size = int(labels.max()) + 1
    vol_c = np.bincount(labels, weights=g.degree_weighted, minlength=size)
    src = g.arc_sources()
    crossing = labels[src] != labels[g.neighbors]
    if crossing.any():
        cut_c = np.bincount(labels[src[crossing]],
                            weights=g.weights[crossing], minlength=size)
    else:
        cut_c = np.zeros(size, dtype=np.float64)
    return float(np.sum((vol_c - cut_c) / vol - (vol_c / vol) ** 2))


def cut_between(g: Graph, p: Partition, v: int) -> Dict[int, float]:
    """Weight of v's edges into each adjacent community, v itself excluded.

    The vertex's own community maps to cut_w(v, A \\ {v}); loops are ignored.
    Communities with no edge from v are absent from the result.
    """
    _check_cover(g, p)
    nbrs, wts = g.neighbor_slice(v)
    out: Dict[int, float] = {}
    labels = p.assignment
    for u, w in zip(nbrs, wts):
        if u == v:
            continue
        c = int(labels[u])
        out[c] = out.get(c, 0.0) + float(w)
    return out


def delta_q(g: Graph, p: Partition, v: int, target: int,
            vol_com: np.ndarray) -> float:
    """Exact modularity change from moving v to community ``target``.

    ``vol_com`` must hold the current community volumes (as from
    :func:`community_volumes`). Matches Q(after) - Q(before) up to
    floating-point rounding.
    """
    _check_cover(g, p)
    target = int(target)
    if not 0 <= target < len(vol_com):
        raise ValueError(f"target community {target} out of range")
    a = int(p.assignment[v])
    if target == a:
        return 0.0
    cuts = cut_between(g, p, v)
    d = g.degree_w(v)
    vol = g.total_volume
    cut_a = cuts.get(a, 0.0)
    cut_b = cuts.get(target, 0.0)
    vol_a_minus = float(vol_com[a]) - d
    vol_b_minus = float(vol_com[target])
    return 2.0 * ((cut_b - cut_a) / vol
                  - d * (vol_b_minus - vol_a_minus) / (vol * vol))


def _set_partitions(n: int):
    """Enumerate all set partitions of range(n) as restricted growth strings."""
    labels = np.zeros(n, dtype=np.int64)
    maxes = np.zeros(n, dtype=np.int64)  # maxes[i] = max(labels[:i+1])

    yield labels.copy()
    if n <= 1:
        return
    while True:
        # advance the rightmost position that can still grow
        i = n - 1
        while i > 0 and labels[i] > maxes[i - 1]:
            labels[i] = 0
            i -= 1
        if i == 0:
            return
        labels[i] += 1
        for j in range(i, n):
            maxes[j] = max(maxes[j - 1], labels[j]) if j else labels[0]
        yield labels.copy()


def brute_force_best_partition(g: Graph) -> Tuple[Partition, float]:
    """Exhaustive modularity maximum by Bell-number enumeration; n <= 12 only."""
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(
            f"brute force enumeration refused for n={g.n} > {BRUTE_FORCE_MAX_N}"
        )
    if g.n == 0 or g.total_volume <= 0.0:
        raise ValueError("brute force requires a non-empty graph with edges")
    best_q = -np.inf
    best = None
    for labels in _set_partitions(g.n):
        q = modularity(g, Partition(labels))
        if q > best_q:
            best_q = q
            best = labels
    return Partition(best), float(best_q)
