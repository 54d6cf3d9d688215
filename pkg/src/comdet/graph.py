"""Immutable CSR-encoded weighted undirected graph with loop support.

Degree conventions: an edge contributes its weight to both endpoints'
weighted degrees; a loop contributes twice to its own vertex. Weighted
volume of a vertex set is the sum of weighted degrees over the set.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence, Tuple

import numpy as np

__all__ = ["Graph", "build", "build_from_arrays"]


class Graph:
    """Compressed sparse row adjacency of an undirected weighted multigraph.

    Parallel input edges are merged by weight summation at build time.
    Loops appear once in the adjacency row of their vertex and once in
    ``loop_weight``, so the weighted degree counts them twice.

    Instances are immutable after construction and safe for unrestricted
    concurrent reads.
    """

    __slots__ = (
        "n",
        "offsets",
        "neighbors",
        "weights",
        "loop_weight",
        "degree_weighted",
        "total_volume",
    )

    def __init__(self, n, offsets, neighbors, weights, loop_weight):
        self.n = int(n)
        self.offsets = offsets
        self.neighbors = neighbors
        self.weights = weights
        self.loop_weight = loop_weight
        # deg_w(v) = sum of incident edge weights + loop weight (loop twice total)
        deg_w = np.zeros(self.n, dtype=np.float64)
        if len(neighbors):
            src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(offsets))
            deg_w = np.bincount(src, weights=weights, minlength=self.n)
        self.degree_weighted = deg_w + loop_weight
        self.total_volume = float(self.degree_weighted.sum())
        for arr in (self.offsets, self.neighbors, self.weights,
                    self.loop_weight, self.degree_weighted):
            arr.setflags(write=False)

    # -- counts ---------------------------------------------------------

    @property
    def num_arcs(self) -> int:
        """Stored directed arcs: 2 per non-loop edge, 1 per loop."""
        return int(self.neighbors.shape[0])

    @property
    def num_loops(self) -> int:
        return int(np.count_nonzero(self.loop_weight))

    @property
    def num_edges(self) -> int:
        """Merged undirected edges, loops included."""
        loops = self.num_loops
        return (self.num_arcs - loops) // 2 + loops

    # -- per-vertex accessors --------------------------------------------

    def _check_vertex(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")
        return v

    def degree(self, v: int) -> int:
        """Number of incident merged edges (a loop counts once)."""
        v = self._check_vertex(v)
        return int(self.offsets[v + 1] - self.offsets[v])

    def degree_w(self, v: int) -> float:
        """Weighted degree: sum of incident edge weights with the loop counted twice."""
        v = self._check_vertex(v)
        return float(self.degree_weighted[v])

    def neighbors_of(self, v: int) -> Iterator[Tuple[int, float]]:
        """Yield (neighbor, weight) pairs in ascending neighbor order.

        Each merged edge appears exactly once; a loop yields (v, loop_weight).
        """
        v = self._check_vertex(v)
        lo, hi = self.offsets[v], self.offsets[v + 1]
        for i in range(lo, hi):
            yield int(self.neighbors[i]), float(self.weights[i])

    def neighbor_slice(self, v: int) -> Tuple[np.ndarray, np.ndarray]:
        """Array view of (neighbor ids, weights) for vertex v."""
        v = self._check_vertex(v)
        lo, hi = self.offsets[v], self.offsets[v + 1]
        return self.neighbors[lo:hi], self.weights[lo:hi]

    def arc_sources(self) -> np.ndarray:
        """Source vertex of every stored arc, aligned with ``neighbors``."""
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.offsets))

    def edge_list(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Merged undirected edge list (u, v, w) with u <= v, loops included once."""
        src = self.arc_sources()
        keep = src <= self.neighbors
        return src[keep], self.neighbors[keep].copy(), self.weights[keep].copy()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, volume={self.total_volume})"


def _validate_edges(u: np.ndarray, v: np.ndarray, w: np.ndarray, n: int) -> None:
    if u.shape != v.shape or u.shape != w.shape:
        raise ValueError("endpoint and weight arrays must have equal length")
    if len(u) == 0:
        return
    if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
        bad = int(max(u.max(initial=-1), v.max(initial=-1)))
        raise ValueError(f"edge endpoint {bad} out of range for n={n}")
    if not np.all(np.isfinite(w)):
        raise ValueError("edge weights must be finite")
    if w.min() <= 0:
        raise ValueError("edge weights must be positive")


def build_from_arrays(u, v, w=None, *, n: int | None = None) -> Graph:
    """Build a graph from parallel endpoint/weight arrays.

    Duplicate edges (in any orientation) are merged by summing weights.
    Missing ``w`` means unit weights. The result is identical for any
    permutation of the input, bit for bit.
    """
    u = np.ascontiguousarray(u, dtype=np.int64)
    v = np.ascontiguousarray(v, dtype=np.int64)
    if w is None:
        w = np.ones(len(u), dtype=np.float64)
    else:
        w = np.ascontiguousarray(w, dtype=np.float64)
    if n is None:
        n = int(max(u.max(initial=-1), v.max(initial=-1))) + 1
    n = int(n)
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    _validate_edges(u, v, w, n)

    if len(u) == 0:
        return Graph(
            n,
            np.zeros(n + 1, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
            np.zeros(n, dtype=np.float64),
        )

    # canonical orientation, then sort with weight as the final key so that
    # duplicate-group summation order is independent of input order
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]

    new_group = np.empty(len(lo), dtype=bool)
    new_group[0] = True
    new_group[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    starts = np.flatnonzero(new_group)
    mu = lo[starts]
    mv = hi[starts]
    mw = np.add.reduceat(w, starts)

    is_loop = mu == mv
    loop_weight = np.zeros(n, dtype=np.float64)
    if is_loop.any():
        loop_weight = np.bincount(mu[is_loop], weights=mw[is_loop],
                                  minlength=n).astype(np.float64)

    eu, ev, ew = mu[~is_loop], mv[~is_loop], mw[~is_loop]
    lu = mu[is_loop]
    src = np.concatenate([eu, ev, lu])
    dst = np.concatenate([ev, eu, lu])
    aw = np.concatenate([ew, ew, mw[is_loop]])

    arc_order = np.lexsort((dst, src))
    src, dst, aw = src[arc_order], dst[arc_order], aw[arc_order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])

    return Graph(n, offsets, dst, aw, loop_weight)


def build(edge_list: Iterable[Sequence], n: int | None = None) -> Graph:
    """Build a graph from an iterable of (u, v) or (u, v, w) triples."""
    us, vs, ws = [], [], []
    for edge in edge_list:
        if len(edge) == 2:
            a, b = edge
            c = 1.0
        else:
            a, b, c = edge
        us.append(a)
        vs.append(b)
        ws.append(c)
    return build_from_arrays(
        np.array(us, dtype=np.int64),
        np.array(vs, dtype=np.int64),
        np.array(ws, dtype=np.float64),
        n=n,
    )
