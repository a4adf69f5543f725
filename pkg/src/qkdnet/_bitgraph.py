"""Bitmask representation of the intermediate-node graph, plus numba kernels.

The endpoints are kept out of the mask universe: ``src`` marks intermediates
adjacent to A, ``tgt`` those adjacent to B, and ``adj[i]`` is the neighbor
mask of intermediate i.  "Removing" a node subset S asks whether A can still
reach B through the alive intermediates, which is a bitmask BFS.

The exhaustive kernels iterate over removal masks in plain integer order and
expose an explicit [lo, hi) chunk parameter, so a sweep can be split into
disjoint ranges and summed, deterministically, regardless of how the chunks
are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .net_model import Network

_MASK_LIMIT = 62  # masks are int64; well beyond the enumeration caps


@dataclass(frozen=True)
class BitGraph:
    order: tuple[str, ...]
    adj: np.ndarray  # int64 neighbor masks, len(order)
    src: int  # intermediates adjacent to A
    tgt: int  # intermediates adjacent to B
    ab_adjacent: bool

    @property
    def size(self) -> int:
        return len(self.order)


def from_network(net: Network) -> BitGraph:
    order = net.intermediates
    if len(order) > _MASK_LIMIT:
        raise ValueError(f"too many intermediate nodes for bitmask form: {len(order)}")
    index = {v: i for i, v in enumerate(order)}
    adj = np.zeros(len(order), dtype=np.int64)
    src = tgt = 0
    for u, v in net.edges:
        ends = {u, v}
        if net.endpoint_a in ends and net.endpoint_b in ends:
            continue  # the direct link is tracked by the ab_adjacent flag
        if net.endpoint_a in ends:
            (other,) = ends - {net.endpoint_a}
            src |= 1 << index[other]
        elif net.endpoint_b in ends:
            (other,) = ends - {net.endpoint_b}
            tgt |= 1 << index[other]
        else:
            adj[index[u]] |= 1 << index[v]
            adj[index[v]] |= 1 << index[u]
    return BitGraph(
        order=order,
        adj=adj,
        src=src,
        tgt=tgt,
        ab_adjacent=net.has_edge(net.endpoint_a, net.endpoint_b),
    )


def subset_mask(bg: BitGraph, nodes) -> int:
    index = {v: i for i, v in enumerate(bg.order)}
    mask = 0
    for v in nodes:
        mask |= 1 << index[v]
    return mask


def connected_python(bg: BitGraph, removed_mask: int) -> bool:
    """Pure-Python reachability check, used for small one-off queries."""
    if bg.ab_adjacent:
        return True
    alive = ~removed_mask
    visited = bg.src & alive & ((1 << bg.size) - 1)
    if visited & bg.tgt:
        return True
    frontier = visited
    while frontier:
        lsb = frontier & -frontier
        v = lsb.bit_length() - 1
        frontier ^= lsb
        new = int(bg.adj[v]) & alive & ~visited
        if new:
            if new & bg.tgt:
                return True
            visited |= new
            frontier |= new
    return False


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


@njit(cache=True)
def _connected(adj, alive, src, tgt):
    visited = src & alive
    if visited & tgt:
        return True
    frontier = visited
    while frontier:
        lsb = frontier & -frontier
        v = _popcount(lsb - 1)
        frontier ^= lsb
        new = adj[v] & alive & ~visited
        if new:
            if new & tgt:
                return True
            visited |= new
            frontier |= new
    return False


@njit(cache=True)
def census_chunk(adj, src, tgt, m, lo, hi):
    """Count disconnecting removal masks in [lo, hi), tallied by popcount."""
    counts = np.zeros(m + 1, dtype=np.int64)
    for mask in range(lo, hi):
        if not _connected(adj, ~mask, src, tgt):
            counts[_popcount(mask)] += 1
    return counts


@njit(cache=True)
def count_cut_masks(adj, src, tgt, masks):
    """Number of removal masks in the given array that disconnect A from B."""
    hits = 0
    for i in range(masks.shape[0]):
        if not _connected(adj, ~masks[i], src, tgt):
            hits += 1
    return hits


def census_counts(bg: BitGraph, chunk_bits: int = 22) -> np.ndarray:
    """Exhaustive cut census: counts[k] = number of size-k disconnecting subsets.

    Enumerates all 2^m removal masks in fixed chunks.  If A and B are
    directly adjacent no subset disconnects them.
    """
    m = bg.size
    counts = np.zeros(m + 1, dtype=np.int64)
    if bg.ab_adjacent:
        return counts
    total = 1 << m
    step = 1 << chunk_bits
    for lo in range(0, total, step):
        counts += census_chunk(bg.adj, bg.src, bg.tgt, m, lo, min(lo + step, total))
    return counts
