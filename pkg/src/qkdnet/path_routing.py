"""Vertex connectivity: minimum A-B cut order and disjoint path extraction.

Every intermediate node is split into an in/out pair joined by a
unit-capacity arc, so the maximum A-B flow equals the order of the minimum
A-B vertex cut and each unit of flow is a vertex-disjoint path.  Putting
cost 1 on the split arcs (and 0 elsewhere) makes successive shortest-path
augmentation return the disjoint system with the fewest total intermediate
nodes.

Graphs here are small (tens of nodes), so plain BFS augmentation and
Bellman-Ford searches are used; arcs are laid out in sorted order so results
are deterministic for a given network.

Scope note: everything here serves a single communicating pair.  Routing
disjoint paths for several pairs at once (the k-disjoint-paths problem) is
NP-complete in the number of pairs and is deliberately out of scope; so is
biasing path choice by link load via edge weights.
"""

from __future__ import annotations

from .errors import DirectLinkError, InfeasibleError
from .net_model import Network, PathSystem

_UNREACHED = float("inf")


class FlowNetwork:
    """Unit-capacity directed graph obtained by splitting intermediate nodes.

    Node indices: 0 is A (out side only), 1 is B (in side only), and the i-th
    intermediate (in sorted id order) occupies 2+2i (in) and 3+2i (out).
    Arcs are stored in pairs; arc k^1 is the residual twin of arc k.
    """

    def __init__(self, net: Network):
        self.net = net
        inter = net.intermediates
        self.node_in = {net.endpoint_a: 0, net.endpoint_b: 1}
        self.node_out = {net.endpoint_a: 0, net.endpoint_b: 1}
        names: list[str] = [net.endpoint_a, net.endpoint_b]
        for i, v in enumerate(inter):
            self.node_in[v] = 2 + 2 * i
            self.node_out[v] = 3 + 2 * i
            names += [v, v]
        self.node_count = 2 + 2 * len(inter)
        self.arc_to: list[int] = []
        self.arc_cap: list[int] = []
        self.arc_cost: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for v in inter:
            self._add_arc(self.node_in[v], self.node_out[v], 1, 1)
        for u, v in sorted(net.edges):
            self._add_arc(self.node_out[u], self.node_in[v], 1, 0)
            self._add_arc(self.node_out[v], self.node_in[u], 1, 0)

    def _add_arc(self, u: int, v: int, cap: int, cost: int) -> None:
        self.adj[u].append(len(self.arc_to))
        self.arc_to.append(v)
        self.arc_cap.append(cap)
        self.arc_cost.append(cost)
        self.adj[v].append(len(self.arc_to))
        self.arc_to.append(u)
        self.arc_cap.append(0)
        self.arc_cost.append(-cost)

    @property
    def forward_arc_count(self) -> int:
        return len(self.arc_to) // 2

    def max_flow(self) -> int:
        """Edmonds-Karp augmentation from A (node 0) to B (node 1)."""
        flow = 0
        while True:
            parent_arc = [-1] * self.node_count
            parent_arc[0] = -2
            queue = [0]
            while queue and parent_arc[1] == -1:
                nxt = []
                for u in queue:
                    for k in self.adj[u]:
                        v = self.arc_to[k]
                        if self.arc_cap[k] > 0 and parent_arc[v] == -1:
                            parent_arc[v] = k
                            nxt.append(v)
                queue = nxt
            if parent_arc[1] == -1:
                return flow
            v = 1
            while v != 0:
                k = parent_arc[v]
                self.arc_cap[k] -= 1
                self.arc_cap[k ^ 1] += 1
                v = self.arc_to[k ^ 1]
            flow += 1

    def augment_cheapest(self) -> bool:
        """Push one unit along a minimum-cost residual path; False if none exists."""
        dist = [_UNREACHED] * self.node_count
        parent_arc = [-1] * self.node_count
        dist[0] = 0.0
        # Bellman-Ford with strict improvement and fixed arc order keeps the
        # chosen path deterministic among equal-cost alternatives.
        for _ in range(self.node_count):
            changed = False
            for k in range(len(self.arc_to)):
                if self.arc_cap[k] <= 0:
                    continue
                u = self.arc_to[k ^ 1]
                if dist[u] + self.arc_cost[k] < dist[self.arc_to[k]]:
                    dist[self.arc_to[k]] = dist[u] + self.arc_cost[k]
                    parent_arc[self.arc_to[k]] = k
                    changed = True
            if not changed:
                break
        if dist[1] == _UNREACHED:
            return False
        v = 1
        while v != 0:
            k = parent_arc[v]
            self.arc_cap[k] -= 1
            self.arc_cap[k ^ 1] += 1
            v = self.arc_to[k ^ 1]
        return True

    def extract_paths(self) -> list[list[str]]:
        """Decompose the current flow into node-disjoint A-B paths."""
        out_flow: dict[int, list[int]] = {}
        for k in range(0, len(self.arc_to), 2):
            used = self.arc_cap[k ^ 1]  # residual on the twin = pushed flow
            if used > 0:
                u = self.arc_to[k ^ 1]
                out_flow.setdefault(u, []).append(k)
        for arcs in out_flow.values():
            arcs.sort(key=lambda k: self.arc_to[k])
        names = {idx: v for v, idx in self.node_in.items()}
        paths: list[list[str]] = []
        while out_flow.get(0):
            k = out_flow[0].pop(0)
            path: list[str] = []
            v = self.arc_to[k]
            while v != 1:
                if v in names and v >= 2:
                    path.append(names[v])
                k = out_flow[v].pop(0)
                v = self.arc_to[k]
            paths.append(path)
        return paths


def min_vertex_cut_order(net: Network) -> int:
    """Order of the smallest intermediate-node set separating A from B.

    By duality this equals the maximum number of vertex-disjoint A-B paths.
    Raises DirectLinkError if the endpoints share an edge (no intermediate
    cut exists in that case); returns 0 if they are already disconnected.
    """
    if net.has_edge(net.endpoint_a, net.endpoint_b):
        raise DirectLinkError("endpoints are directly linked; no intermediate vertex cut exists")
    return FlowNetwork(net).max_flow()


def find_disjoint_paths(net: Network, count: int) -> PathSystem:
    """Extract `count` vertex-disjoint A-B paths of minimum total length.

    Total length is the summed number of intermediate nodes, globally minimal
    for the requested count.  Raises InfeasibleError (carrying the cut order)
    when count exceeds the minimum cut order.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    order = min_vertex_cut_order(net)
    if count > order:
        raise InfeasibleError(
            f"requested {count} disjoint paths but the minimum A-B cut order is {order}",
            cut_order=order,
        )
    fn = FlowNetwork(net)
    for _ in range(count):
        if not fn.augment_cheapest():  # pragma: no cover - guarded by cut order
            raise InfeasibleError("augmentation failed below the cut order", cut_order=order)
    return PathSystem(tuple(sorted(tuple(p) for p in fn.extract_paths())))


def path_system_hack_probability(sys: PathSystem, trust) -> float:
    """Exact compromise probability of a disjoint-path system.

    Each path falls if at least one of its nodes falls; the whole system is
    compromised only if every path falls, hence the product of per-path
    complements.
    """
    total = 1.0
    for path in sys.paths:
        survive = 1.0
        for v in path:
            if v not in trust:
                raise ValueError(f"no trust entry for node {v!r}")
            survive *= 1.0 - trust[v]
        total *= 1.0 - survive
    return total


def evaluate_path_counts(net: Network, p: float, max_paths: int):
    """Minimum-length system and its (mean-length * p)^N bound for each N.

    Returns a list of (count, system, total_intermediates, bound) tuples for
    N = 1 .. min(max_paths, cut order).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if max_paths < 1:
        raise ValueError(f"max_paths must be >= 1, got {max_paths}")
    order = min_vertex_cut_order(net)
    if order == 0:
        raise InfeasibleError("endpoints are disconnected", cut_order=0)
    rows = []
    for count in range(1, min(max_paths, order) + 1):
        system = find_disjoint_paths(net, count)
        bound = (system.mean_length * p) ** count
        rows.append((count, system, system.total_intermediates, bound))
    return rows


def optimize_path_count(net: Network, p: float, max_paths: int):
    """Pick the path count minimizing the (mean-length * p)^N bound.

    Ties break toward fewer paths.  Returns (best_count, system, bound).
    """
    rows = evaluate_path_counts(net, p, max_paths)
    best = min(rows, key=lambda r: (r[3], r[0]))
    return best[0], best[1], best[3]
