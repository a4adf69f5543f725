"""Graph model of trusted-node QKD networks.

A network is a simple undirected graph with two distinguished endpoints A
(Alice) and B (Bob).  Every other node is a classical relay that handles key
material in plaintext, so each carries a probability of compromise.  Two
generator families are provided:

* ``build_mnop`` -- N vertex-disjoint relay chains between A and B
  (the multiple non-overlapping paths layout, MNOP),
* ``build_lscheme`` -- l parallel chains of n relays each, cross-connected by
  vertical interlinks in every (l-1)-th column (the overlapping-paths
  l-scheme, MOP).

Networks are immutable once constructed and safe to share read-only between
threads.  A line-oriented text format is provided for interchange.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import NetworkParseError

NodeId = str


@dataclass(frozen=True)
class Network:
    """Simple undirected graph with endpoints and per-relay compromise odds.

    Invariants enforced on construction: the endpoints are distinct and
    present in ``nodes``; edges are unordered pairs of declared nodes with no
    self-loops; every non-endpoint node has a trust entry in [0, 1] and the
    endpoints have none.
    """

    nodes: frozenset[NodeId]
    edges: frozenset[tuple[NodeId, NodeId]]
    endpoint_a: NodeId
    endpoint_b: NodeId
    trust: Mapping[NodeId, float]

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop on node {u!r}")
            norm.add((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "trust", MappingProxyType(dict(self.trust)))

        a, b = self.endpoint_a, self.endpoint_b
        if a == b:
            raise ValueError("endpoints must be distinct")
        if a not in self.nodes or b not in self.nodes:
            raise ValueError("both endpoints must be declared nodes")
        for u, v in self.edges:
            if u not in self.nodes or v not in self.nodes:
                raise ValueError(f"edge ({u!r}, {v!r}) references an undeclared node")
        expected = self.nodes - {a, b}
        if set(self.trust) != expected:
            missing = expected - set(self.trust)
            extra = set(self.trust) - expected
            if missing:
                raise ValueError(f"missing trust entry for node {sorted(missing)[0]!r}")
            raise ValueError(f"trust entry for non-relay node {sorted(extra)[0]!r}")
        for node, p in self.trust.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"trust for node {node!r} out of [0, 1]: {p}")

    @cached_property
    def adjacency(self) -> Mapping[NodeId, frozenset[NodeId]]:
        adj: dict[NodeId, set[NodeId]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return MappingProxyType({v: frozenset(nb) for v, nb in adj.items()})

    @cached_property
    def intermediates(self) -> tuple[NodeId, ...]:
        """Non-endpoint nodes, sorted for deterministic iteration order."""
        return tuple(sorted(self.nodes - {self.endpoint_a, self.endpoint_b}))

    def neighbors(self, v: NodeId) -> frozenset[NodeId]:
        return self.adjacency[v]

    def degree(self, v: NodeId) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        if u == v:
            return False
        key = (u, v) if u <= v else (v, u)
        return key in self.edges


@dataclass(frozen=True)
class LSchemeParams:
    """Parameters of the interlinked l-scheme: l chains of n relays, uniform trust."""

    n: int
    l: int
    uniform_p: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.l < 1:
            raise ValueError(f"l must be >= 1, got {self.l}")
        if not 0.0 <= self.uniform_p <= 1.0:
            raise ValueError(f"uniform_p out of [0, 1]: {self.uniform_p}")


@dataclass(frozen=True)
class PathSystem:
    """An ordered family of vertex-disjoint A-B paths.

    Each path lists intermediate node ids only; A and B are implicit at the
    ends.  Disjointness over intermediates is checked at construction; edge
    validity against a host network is checked by :meth:`check_on`.
    """

    paths: tuple[tuple[NodeId, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))
        seen: set[NodeId] = set()
        for path in self.paths:
            if not path:
                raise ValueError("a path must contain at least one intermediate node")
            for v in path:
                if v in seen:
                    raise ValueError(f"paths are not vertex-disjoint: node {v!r} repeats")
                seen.add(v)

    @property
    def count(self) -> int:
        return len(self.paths)

    @property
    def total_intermediates(self) -> int:
        return sum(len(p) for p in self.paths)

    @property
    def mean_length(self) -> float:
        return self.total_intermediates / len(self.paths)

    def check_on(self, net: Network) -> None:
        """Raise ValueError unless every hop of every path is an edge of net."""
        inter = set(net.intermediates)
        for path in self.paths:
            for v in path:
                if v not in inter:
                    raise ValueError(f"path node {v!r} is not an intermediate of the network")
            hops = [(net.endpoint_a, path[0])]
            hops += list(zip(path, path[1:]))
            hops.append((path[-1], net.endpoint_b))
            for u, v in hops:
                if v not in net.adjacency[u]:
                    raise ValueError(f"path hop ({u!r}, {v!r}) is not an edge of the network")


def build_mnop(path_lengths: Iterable[int], uniform_p: float) -> Network:
    """Build N disjoint relay chains between A and B.

    ``path_lengths[j]`` relays on chain j, all with trust probability
    ``uniform_p``.  Relay ids are ``p{path}_{position}``, 1-based.
    """
    lengths = list(path_lengths)
    if not lengths:
        raise ValueError("path_lengths must be non-empty")
    if any(n < 1 for n in lengths):
        raise ValueError(f"every path length must be >= 1, got {lengths}")
    if not 0.0 <= uniform_p <= 1.0:
        raise ValueError(f"uniform_p out of [0, 1]: {uniform_p}")

    nodes = {"A", "B"}
    edges = set()
    trust = {}
    for j, n in enumerate(lengths, start=1):
        chain = [f"p{j}_{k}" for k in range(1, n + 1)]
        nodes.update(chain)
        trust.update((v, float(uniform_p)) for v in chain)
        hops = ["A", *chain, "B"]
        edges.update(zip(hops, hops[1:]))
    return Network(frozenset(nodes), frozenset(edges), "A", "B", trust)


def lscheme_interlink_columns(n: int, l: int) -> list[int]:
    """Columns of the l-scheme that carry vertical interlinks.

    These are the multiples of (l-1) up to n; an l=1 scheme has none.
    """
    if l < 2:
        return []
    return list(range(l - 1, n + 1, l - 1))


def build_lscheme(params: LSchemeParams) -> Network:
    """Build the interlinked l-scheme network.

    Relays are laid out as a grid ``g{row}_{column}`` with l rows and n
    columns.  Each row is an A-B chain of n+1 links; every column divisible
    by (l-1) additionally connects vertically adjoined rows, which adds at
    most n interlink edges in total.  l=1 degenerates to a bare single chain.
    """
    n, l, p = params.n, params.l, params.uniform_p
    nodes = {"A", "B"}
    edges = set()
    trust = {}
    for i in range(1, l + 1):
        chain = [f"g{i}_{j}" for j in range(1, n + 1)]
        nodes.update(chain)
        trust.update((v, float(p)) for v in chain)
        hops = ["A", *chain, "B"]
        edges.update(zip(hops, hops[1:]))
    for j in lscheme_interlink_columns(n, l):
        for i in range(1, l):
            edges.add((f"g{i}_{j}", f"g{i + 1}_{j}"))
    return Network(frozenset(nodes), frozenset(edges), "A", "B", trust)


def serialize_network(net: Network) -> str:
    """Render a network in the line-oriented text format.

    Output is deterministic: one ``endpoints`` line, then ``node`` lines
    sorted by id, then ``edge`` lines sorted by their (ordered) pair.
    """
    for v in net.nodes:
        if any(c.isspace() for c in v) or "#" in v:
            raise ValueError(f"node id {v!r} cannot be serialized (whitespace or '#')")
    lines = [f"endpoints {net.endpoint_a} {net.endpoint_b}"]
    for v in net.intermediates:
        lines.append(f"node {v} {net.trust[v]!r}")
    for u, v in sorted(net.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def parse_network(text: str) -> Network:
    """Parse the text format produced by :func:`serialize_network`.

    Grammar (one directive per line, ``#`` starts a comment):

    * ``endpoints <idA> <idB>`` -- required, exactly once
    * ``node <id> <trust>``     -- one per relay, trust in [0, 1]
    * ``edge <id1> <id2>``      -- both ids must be declared above or below

    Raises :class:`NetworkParseError` with the offending line number.
    """
    endpoints: tuple[str, str] | None = None
    trust: dict[str, float] = {}
    node_lines: dict[str, int] = {}
    edge_decls: list[tuple[int, str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        directive, args = parts[0], parts[1:]
        if directive == "endpoints":
            if endpoints is not None:
                raise NetworkParseError(line_no, "duplicate endpoints line")
            if len(args) != 2:
                raise NetworkParseError(line_no, "endpoints requires exactly two ids")
            if args[0] == args[1]:
                raise NetworkParseError(line_no, "endpoints must be distinct")
            endpoints = (args[0], args[1])
        elif directive == "node":
            if len(args) != 2:
                raise NetworkParseError(line_no, "node requires an id and a trust value")
            name = args[0]
            if endpoints is not None and name in endpoints:
                raise NetworkParseError(line_no, f"endpoint {name!r} cannot be declared as node")
            if name in trust:
                raise NetworkParseError(line_no, f"duplicate node {name!r}")
            try:
                p = float(args[1])
            except ValueError:
                raise NetworkParseError(line_no, f"bad trust value {args[1]!r}") from None
            if not 0.0 <= p <= 1.0:
                raise NetworkParseError(line_no, f"trust {p} out of [0, 1]")
            trust[name] = p
            node_lines[name] = line_no
        elif directive == "edge":
            if len(args) != 2:
                raise NetworkParseError(line_no, "edge requires exactly two ids")
            if args[0] == args[1]:
                raise NetworkParseError(line_no, f"self-loop on node {args[0]!r}")
            edge_decls.append((line_no, args[0], args[1]))
        else:
            raise NetworkParseError(line_no, f"unknown directive {directive!r}")

    if endpoints is None:
        raise NetworkParseError(len(text.splitlines()) + 1, "missing endpoints line")
    if endpoints[0] in trust or endpoints[1] in trust:
        bad = endpoints[0] if endpoints[0] in trust else endpoints[1]
        raise NetworkParseError(node_lines[bad], f"endpoint {bad!r} cannot be declared as node")

    declared = set(trust) | set(endpoints)
    edges = set()
    for line_no, u, v in edge_decls:
        for w in (u, v):
            if w not in declared:
                raise NetworkParseError(line_no, f"edge references undeclared node {w!r}")
        key = (u, v) if u <= v else (v, u)
        if key in edges:
            raise NetworkParseError(line_no, f"duplicate edge ({u!r}, {v!r})")
        edges.add(key)

    return Network(frozenset(declared), frozenset(edges), endpoints[0], endpoints[1], trust)
