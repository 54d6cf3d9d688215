"""Synthetic test graphs with planted community structure.

Used by the test suite and for desk-scale benchmarking when the public
SNAP datasets are not on disk.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, build_from_arrays

__all__ = ["planted_partition_graph", "random_graph"]


def planted_partition_graph(num_communities: int, community_size: int,
                            intra_degree: float, inter_edges: int,
                            seed: int = 0) -> tuple[Graph, np.ndarray]:
    """Planted-partition graph: dense blocks plus random cross edges.

    Each community is an Erdos-Renyi block whose edge probability is chosen
    so vertices have ``intra_degree`` intra-community neighbors on average;
    ``inter_edges`` distinct cross-community edges are overlaid. Returns the
    graph and the planted assignment.
    """
    rng = np.random.default_rng(seed)
    n = num_communities * community_size
    labels = np.repeat(np.arange(num_communities), community_size)

    p_in = min(1.0, intra_degree / max(community_size - 1, 1))
    iu, ju = np.triu_indices(community_size, k=1)
    us = []
    vs = []
    for c in range(num_communities):
        mask = rng.random(iu.size) < p_in
        base = c * community_size
        us.append(base + iu[mask])
        vs.append(base + ju[mask])

    if inter_edges > 0:
        a = rng.integers(0, n, size=2 * inter_edges)
        b = rng.integers(0, n, size=2 * inter_edges)
        cross = labels[a] != labels[b]
        us.append(a[cross][:inter_edges])
        vs.append(b[cross][:inter_edges])

    u = np.concatenate(us)
    v = np.concatenate(vs)
    return build_from_arrays(u, v, n=n), labels


def random_graph(n: int, avg_degree: float, seed: int = 0,
                 weighted: bool = False, integer_weights: bool = False,
                 allow_loops: bool = False) -> Graph:
    """Uniform random multigraph (duplicates merge at build time)."""
    rng = np.random.default_rng(seed)
    m = max(1, int(n * avg_degree / 2))
    u = rng.integers(0, n, size=m)
    v = rng.integers(0, n, size=m)
    if not allow_loops:
        loops = u == v
        v[loops] = (v[loops] + 1) % n
    if integer_weights:
        w = rng.integers(1, 10, size=m).astype(np.float64)
    elif weighted:
        w = rng.uniform(0.1, 5.0, size=m)
    else:
        w = None
    return build_from_arrays(u, v, w, n=n)
