"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's bitmask/flow machinery:
connectivity is a plain set-based search over adjacency dicts, census counts
come from itertools subset enumeration, and disjoint path systems come from
exhaustive simple-path enumeration.  Library results are checked against
these on small graphs.
"""

from __future__ import annotations

from itertools import combinations

import pytest

from qkdnet import Network, build_mnop


def removal_disconnects(net: Network, removed) -> bool:
    """Set-based reachability check: does removing `removed` separate A and B?"""
    removed = set(removed)
    a, b = net.endpoint_a, net.endpoint_b
    if b in net.adjacency[a]:
        return False
    seen = {a} | removed
    stack = [v for v in net.adjacency[a] if v not in seen]
    while stack:
        v = stack.pop()
        if v == b:
            return False
        if v in seen:
            continue
        seen.add(v)
        stack.extend(w for w in net.adjacency[v] if w not in seen)
    return True


def census_by_subsets(net: Network) -> list[int]:
    """Exhaustive census via itertools, independent of the numba kernel."""
    inter = net.intermediates
    counts = [0] * (len(inter) + 1)
    for k in range(len(inter) + 1):
        for sub in combinations(inter, k):
            if removal_disconnects(net, sub):
                counts[k] += 1
    return counts


def brute_min_cut_order(net: Network) -> int:
    """Smallest k admitting a disconnecting k-subset, by direct enumeration."""
    inter = net.intermediates
    for k in range(len(inter) + 1):
        if any(removal_disconnects(net, sub) for sub in combinations(inter, k)):
            return k
    return len(inter) + 1  # unreachable for finite graphs


def all_simple_paths(net: Network) -> list[tuple[str, ...]]:
    """Every simple A-B path, as its tuple of intermediate nodes."""
    a, b = net.endpoint_a, net.endpoint_b
    out = []

    def walk(v, trail):
        for w in sorted(net.adjacency[v]):
            if w == b:
                out.append(tuple(trail))
            elif w != a and w not in trail:
                walk(w, trail + [w])

    walk(a, [])
    return out


def min_disjoint_total(net: Network, count: int) -> int | None:
    """Minimum summed length over all systems of `count` disjoint simple paths."""
    paths = all_simple_paths(net)
    best = None
    for combo in combinations(paths, count):
        nodes = [v for p in combo for v in p]
        if len(nodes) != len(set(nodes)):
            continue
        total = len(nodes)
        if best is None or total < best:
            best = total
    return best


def two_bridges(n: int, p: float) -> Network:
    """The single-vs-two-paths example network.

    A short route crosses just the bridge relays 1 and 2; the two disjoint
    routes take a length-n chain plus one bridge relay each.
    """
    nodes = {"A", "B", "1", "2"}
    edges = {("A", "1"), ("1", "2"), ("2", "B")}
    c = [f"c{k}" for k in range(1, n + 1)]
    d = [f"d{k}" for k in range(1, n + 1)]
    nodes.update(c)
    nodes.update(d)
    for hops in (["A", *c, "2"], ["1", *d, "B"]):
        edges.update(zip(hops, hops[1:]))
    trust = {v: p for v in nodes - {"A", "B"}}
    return Network(frozenset(nodes), frozenset(edges), "A", "B", trust)


def grid_example_net(p: float = 0.1) -> Network:
    """The worked 2x3 overlapping-paths example with relays named 1..6."""
    edges = [
        ("A", "1"), ("1", "2"), ("2", "3"), ("3", "B"),
        ("A", "4"), ("4", "5"), ("5", "6"), ("6", "B"),
        ("1", "4"), ("2", "5"), ("3", "6"),
    ]
    nodes = frozenset("AB123456")
    return Network(nodes, frozenset(edges), "A", "B", {c: p for c in "123456"})


@pytest.fixture
def fig1_net() -> Network:
    return build_mnop([2, 2], 0.1)


@pytest.fixture
def grid_net() -> Network:
    return grid_example_net()
