"""Numba kernels for the label-propagation and local-moving sweeps.

Shared-memory model: one parallel-for over vertices per sweep. Neighbor
labels are read without synchronization (stale values are tolerated and
repaired by later sweeps); community volumes are updated with real atomic
read-modify-write; per-vertex flags are single-byte stores. A full barrier
separates sweeps (the kernels return between sweeps).

Deterministic mode uses the sequential variants: one in-place pass in
ascending vertex id, which is also what guarantees strictly monotone
modularity for Louvain.
"""

from __future__ import annotations

import warnings

import numpy as np

# TBB may be too old in some environments; the omp/workqueue fallback is fine
warnings.filterwarnings("ignore", message=".*TBB.*", category=Warning)

from numba import get_thread_id, njit, prange, types
from numba.core import cgutils
from numba.extending import intrinsic


@intrinsic
def _atomic_fadd(typingctx, arr_t, idx_t, val_t):
    """Atomic arr[idx] += val for float64 arrays; returns the old value."""
    if not isinstance(arr_t, types.Array) or arr_t.dtype != types.float64:
        return None
    sig = arr_t.dtype(arr_t, types.intp, arr_t.dtype)

    def codegen(context, builder, signature, args):
        arr, idx, val = args
        aryty = signature.args[0]
        ary = context.make_array(aryty)(context, builder, arr)
        ptr = cgutils.get_item_pointer(context, builder, aryty, ary, [idx],
                                       wraparound=False)
        return builder.atomic_rmw("fadd", ptr, val, ordering="monotonic")

    return sig, codegen


# ---------------------------------------------------------------------------
# label propagation
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _best_label(offsets, nbrs, wts, labels, v, wrow, touched):
    """Heaviest neighbor label of v; ties prefer the current label, then
    the smallest id. Returns the current label when v has no proper
    neighbors (a loop is not a neighbor for this purpose)."""
    cur = labels[v]
    ntouched = 0
    for i in range(offsets[v], offsets[v + 1]):
        u = nbrs[i]
        if u == v:
            continue
        lab = labels[u]
        if wrow[lab] == 0.0:
            touched[ntouched] = lab
            ntouched += 1
        wrow[lab] += wts[i]
    if ntouched == 0:
        return cur
    best_w = -1.0
    best = cur
    for t in range(ntouched):
        lab = touched[t]
        lw = wrow[lab]
        if lw > best_w or (lw == best_w and lab < best):
            best_w = lw
            best = lab
    if wrow[cur] == best_w:
        best = cur
    for t in range(ntouched):
        wrow[touched[t]] = 0.0
    return best


@njit(parallel=True, cache=True)
def lpa_sweep_parallel(offsets, nbrs, wts, labels, active, next_active,
                       scratch_w, scratch_lab):
    n = labels.size
    moved = 0
    for v in prange(n):
        if active[v] == 0:
            continue
        tid = get_thread_id()
        best = _best_label(offsets, nbrs, wts, labels, v,
                           scratch_w[tid], scratch_lab[tid])
        if best != labels[v]:
            labels[v] = best
            moved += 1
            for i in range(offsets[v], offsets[v + 1]):
                next_active[nbrs[i]] = 1
    return moved


@njit(cache=True)
def lpa_sweep_sequential(offsets, nbrs, wts, labels, active, next_active,
                         wrow, touched):
    n = labels.size
    moved = 0
    for v in range(n):
        if active[v] == 0:
            continue
        best = _best_label(offsets, nbrs, wts, labels, v, wrow, touched)
        if best != labels[v]:
            labels[v] = best
            moved += 1
            for i in range(offsets[v], offsets[v + 1]):
                next_active[nbrs[i]] = 1
    return moved


# ---------------------------------------------------------------------------
# Louvain local moving
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _best_move(offsets, nbrs, wts, com_id, vol_vertex, vol_com, inv_vol, v,
               wrow, touched):
    """Neighboring community with the largest strictly positive move gain
    for v, smallest id on ties; returns v's community when no gain exists."""
    a = com_id[v]
    ntouched = 0
    for i in range(offsets[v], offsets[v + 1]):
        u = nbrs[i]
        if u == v:
            continue
        c = com_id[u]
        if wrow[c] == 0.0:
            touched[ntouched] = c
            ntouched += 1
        wrow[c] += wts[i]
    if ntouched == 0:
        return a
    d = vol_vertex[v]
    cut_a = wrow[a]
    vol_a_minus = vol_com[a] - d
    best_gain = 0.0
    best = -1
    for t in range(ntouched):
        c = touched[t]
        if c == a:
            continue
        gain = 2.0 * ((wrow[c] - cut_a) * inv_vol
                      - d * (vol_com[c] - vol_a_minus) * inv_vol * inv_vol)
        if gain <= 0.0:
            continue
        if gain > best_gain or (gain == best_gain and (best < 0 or c < best)):
            best_gain = gain
            best = c
    for t in range(ntouched):
        wrow[touched[t]] = 0.0
    return a if best < 0 else best


@njit(parallel=True, cache=True)
def louvain_sweep_parallel(offsets, nbrs, wts, com_id, vol_vertex, vol_com,
                           need, tmp_need, inv_vol, scratch_w, scratch_com):
    n = com_id.size
    moved = 0
    for v in prange(n):
        if need[v] == 0:
            continue
        tid = get_thread_id()
        best = _best_move(offsets, nbrs, wts, com_id, vol_vertex, vol_com,
                          inv_vol, v, scratch_w[tid], scratch_com[tid])
        a = com_id[v]
        if best != a:
            d = vol_vertex[v]
            _atomic_fadd(vol_com, a, -d)
            _atomic_fadd(vol_com, best, d)
            com_id[v] = best
            tmp_need[v] = 1
            moved += 1
    return moved


@njit(cache=True)
def louvain_sweep_sequential(offsets, nbrs, wts, com_id, vol_vertex, vol_com,
                             need, tmp_need, inv_vol, wrow, touched):
    n = com_id.size
    moved = 0
    for v in range(n):
        if need[v] == 0:
            continue
        best = _best_move(offsets, nbrs, wts, com_id, vol_vertex, vol_com,
                          inv_vol, v, wrow, touched)
        a = com_id[v]
        if best != a:
            d = vol_vertex[v]
            vol_com[a] -= d
            vol_com[best] += d
            com_id[v] = best
            tmp_need[v] = 1
            moved += 1
    return moved


@njit(parallel=True, cache=True)
def propagate_need_check(offsets, nbrs, tmp_need, need):
    """need <- tmp_need plus every neighbor of a vertex that moved."""
    n = need.size
    for v in prange(n):
        need[v] = tmp_need[v]
    for v in prange(n):
        if tmp_need[v] == 1:
            for i in range(offsets[v], offsets[v + 1]):
                need[nbrs[i]] = 1


@njit(parallel=True, cache=True)
def recompute_volumes(com_id, vol_vertex, vol_com):
    """Exact vol_com from scratch (atomic accumulation, order not fixed)."""
    for c in prange(vol_com.size):
        vol_com[c] = 0.0
    for v in prange(com_id.size):
        _atomic_fadd(vol_com, com_id[v], vol_vertex[v])
