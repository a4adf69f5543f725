"""Executable models of the XOR key-relay protocols, with an exact leakage test.

Every link of the network carries one independent uniformly random key, and
every quantity exchanged by a protocol run is an XOR of such symbols.  A
transcript therefore records each classical message twice: as a concrete
bitstring and as a GF(2) vector over the symbol basis.  Deciding whether a
set of compromised relays (plus the always-public classical messages) pins
down the final key is then a linear-span question, answered exactly by
Gaussian elimination, independent of the key length.

Three schemes are modeled:

* ``run_hop_by_hop``       -- Alice samples one fresh subkey per disjoint
  path and relays it hop by hop under one-time-pad re-encryption; the final
  key is the XOR of the subkeys.
* ``run_hop_by_hop_combined`` -- the single-step relay variant: each node
  forwards one XOR of its two chain keys folded into the incoming message,
  so the per-path key telescopes to Alice's first link key.
* ``run_mops_broadcast`` / ``run_mops_pathcover`` -- the overlapping-paths
  schemes: every relay contributes the XOR of all its incident link keys,
  either broadcast straight to Bob or accumulated along a spanning system of
  disjoint paths.  Both derive the XOR of Alice's incident link keys.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from . import gf2
from .errors import ProtocolError, SizeCapError
from .net_model import Network, NodeId, PathSystem

SWEEP_NODE_CAP = 16


@dataclass(frozen=True)
class KeySpace:
    """The independent random symbols of one protocol run, in a fixed order."""

    symbols: tuple[str, ...]
    bits: tuple[int, ...]
    key_length: int
    seed: int

    def vector_bits(self, vector: int) -> int:
        """Concrete bitstring of a GF(2) combination of symbols."""
        out = 0
        i = 0
        while vector:
            if vector & 1:
                out ^= self.bits[i]
            vector >>= 1
            i += 1
        return out


@dataclass(frozen=True)
class Message:
    sender: NodeId
    receiver: NodeId
    vector: int
    bits: int


@dataclass(frozen=True)
class KeyShare:
    vector: int
    bits: int


@dataclass(frozen=True)
class Transcript:
    """Record of one protocol run.

    ``node_views`` lists, per relay, the extra symbol vectors an adversary
    learns by compromising that relay (its link keys, plus any subkey it
    handles in plaintext).  Classical messages are public regardless.
    """

    scheme: str
    endpoints: tuple[NodeId, NodeId]
    key_space: KeySpace
    messages: tuple[Message, ...]
    alice_key: KeyShare
    bob_key: KeyShare
    node_views: Mapping[NodeId, tuple[int, ...]]

    def symbol_names(self, vector: int) -> tuple[str, ...]:
        names = []
        i = 0
        while vector:
            if vector & 1:
                names.append(self.key_space.symbols[i])
            vector >>= 1
            i += 1
        return tuple(names)


class _Run:
    """Shared symbol bookkeeping for the protocol builders."""

    def __init__(self, net: Network, extra_symbols: Iterable[str], key_length: int, seed: int):
        if key_length < 1:
            raise ValueError(f"key_length must be >= 1, got {key_length}")
        self.net = net
        self.links = sorted(net.edges)
        self.edge_index = {e: i for i, e in enumerate(self.links)}
        symbols = tuple(f"K[{u}:{v}]" for u, v in self.links) + tuple(extra_symbols)
        rng = random.Random(seed)
        bits = tuple(rng.getrandbits(key_length) for _ in symbols)
        self.key_space = KeySpace(symbols=symbols, bits=bits, key_length=key_length, seed=seed)

    def link_vec(self, u: NodeId, v: NodeId) -> int:
        key = (u, v) if u <= v else (v, u)
        return 1 << self.edge_index[key]

    def extra_vec(self, i: int) -> int:
        return 1 << (len(self.links) + i)

    def incident_vec(self, v: NodeId) -> int:
        vec = 0
        for u in self.net.adjacency[v]:
            vec ^= self.link_vec(v, u)
        return vec

    def share(self, vector: int) -> KeyShare:
        return KeyShare(vector, self.key_space.vector_bits(vector))

    def message(self, sender: NodeId, receiver: NodeId, vector: int) -> Message:
        return Message(sender, receiver, vector, self.key_space.vector_bits(vector))

    def base_views(self) -> dict[NodeId, list[int]]:
        """A compromised relay yields every one of its link keys individually."""
        return {
            v: [self.link_vec(v, u) for u in sorted(self.net.adjacency[v])]
            for v in self.net.intermediates
        }

    def finish(self, scheme, messages, alice_vec, bob_vec, views) -> Transcript:
        return Transcript(
            scheme=scheme,
            endpoints=(self.net.endpoint_a, self.net.endpoint_b),
            key_space=self.key_space,
            messages=tuple(messages),
            alice_key=self.share(alice_vec),
            bob_key=self.share(bob_vec),
            node_views={v: tuple(vecs) for v, vecs in views.items()},
        )


def _connected_via_intermediates(net: Network) -> bool:
    a, b = net.endpoint_a, net.endpoint_b
    seen = {a}
    stack = [v for v in net.adjacency[a] if v != b]
    while stack:
        v = stack.pop()
        if v == b:
            return True
        if v in seen:
            continue
        seen.add(v)
        stack.extend(net.adjacency[v])
    return False


def run_hop_by_hop(net: Network, sys: PathSystem, key_length: int = 128, seed: int = 0) -> Transcript:
    """Relay one fresh subkey per path under per-hop one-time-pad encryption.

    Every hop publishes the ciphertext subkey XOR link-key; each relay
    decrypts and re-encrypts, so it holds the path subkey in plaintext.
    Final key: XOR of all subkeys.
    """
    sys.check_on(net)
    run = _Run(net, (f"K{j}" for j in range(1, sys.count + 1)), key_length, seed)
    views = run.base_views()
    messages = []
    alice_vec = 0
    bob_vec = 0
    for j, path in enumerate(sys.paths):
        sub = run.extra_vec(j)
        alice_vec ^= sub
        hops = [net.endpoint_a, *path, net.endpoint_b]
        for x, y in zip(hops, hops[1:]):
            messages.append(run.message(x, y, sub ^ run.link_vec(x, y)))
        for v in path:
            views[v].append(sub)
        # Bob decrypts the last hop with his own link key.
        bob_vec ^= messages[-1].vector ^ run.link_vec(path[-1], net.endpoint_b)
    return run.finish("hop-by-hop", messages, alice_vec, bob_vec, views)


def run_hop_by_hop_combined(
    net: Network, sys: PathSystem, key_length: int = 128, seed: int = 0
) -> Transcript:
    """Single-step relay: each node forwards the incoming message XOR both
    of its chain keys, with no decryption.

    The accumulated message telescopes, so the subkey Bob recovers for a
    path is Alice's first link key on it; the final key is their XOR.
    """
    sys.check_on(net)
    run = _Run(net, (), key_length, seed)
    views = run.base_views()
    messages = []
    alice_vec = 0
    bob_vec = 0
    for path in sys.paths:
        alice_vec ^= run.link_vec(net.endpoint_a, path[0])
        acc = 0
        for i, v in enumerate(path):
            prev = path[i - 1] if i else net.endpoint_a
            nxt = path[i + 1] if i + 1 < len(path) else net.endpoint_b
            acc ^= run.link_vec(prev, v) ^ run.link_vec(v, nxt)
            messages.append(run.message(v, nxt, acc))
        bob_vec ^= messages[-1].vector ^ run.link_vec(path[-1], net.endpoint_b)
    return run.finish("hop-by-hop-combined", messages, alice_vec, bob_vec, views)


def run_mops_broadcast(net: Network, key_length: int = 128, seed: int = 0) -> Transcript:
    """Every relay broadcasts the XOR of all its incident link keys to Bob.

    Keys on relay-relay links appear in exactly two broadcasts and cancel in
    the total, leaving Alice's and Bob's link keys; Bob folds his own out.
    Both parties end with the XOR of Alice's incident link keys.
    """
    if not _connected_via_intermediates(net):
        raise ProtocolError("endpoints are not connected through intermediate nodes")
    run = _Run(net, (), key_length, seed)
    views = run.base_views()
    messages = []
    total = 0
    for v in net.intermediates:
        vec = run.incident_vec(v)
        messages.append(run.message(v, net.endpoint_b, vec))
        total ^= vec
    alice_vec = _endpoint_link_sum(run, net.endpoint_a)
    bob_vec = total ^ _endpoint_link_sum(run, net.endpoint_b)
    return run.finish("mops-broadcast", messages, alice_vec, bob_vec, views)


def run_mops_pathcover(
    net: Network, cover: PathSystem, key_length: int = 128, seed: int = 0
) -> Transcript:
    """Accumulate the per-relay XOR contributions along a spanning path system.

    Each relay folds all its incident link keys into the message it forwards
    to its successor on the cover, so Bob receives one message per path and
    derives the same key as the broadcast scheme with far fewer messages.
    """
    cover.check_on(net)
    covered = {v for path in cover.paths for v in path}
    if covered != set(net.intermediates):
        missing = sorted(set(net.intermediates) - covered)
        raise ValueError(f"cover does not span all intermediates; missing {missing}")
    run = _Run(net, (), key_length, seed)
    views = run.base_views()
    messages = []
    finals = 0
    for path in cover.paths:
        acc = 0
        for i, v in enumerate(path):
            nxt = path[i + 1] if i + 1 < len(path) else net.endpoint_b
            acc ^= run.incident_vec(v)
            messages.append(run.message(v, nxt, acc))
        finals ^= acc
    alice_vec = _endpoint_link_sum(run, net.endpoint_a)
    bob_vec = finals ^ _endpoint_link_sum(run, net.endpoint_b)
    return run.finish("mops-pathcover", messages, alice_vec, bob_vec, views)


def _endpoint_link_sum(run: _Run, endpoint: NodeId) -> int:
    other = run.net.endpoint_b if endpoint == run.net.endpoint_a else run.net.endpoint_a
    vec = 0
    for u in run.net.adjacency[endpoint]:
        if u != other:
            vec ^= run.link_vec(endpoint, u)
    return vec


@dataclass(frozen=True)
class AdversaryView:
    """Everything a given compromised set knows, as GF(2) symbol vectors.

    Public classical messages are always included; compromising a relay adds
    its link keys and any subkey it handled in plaintext.
    """

    compromised: frozenset[NodeId]
    known_vectors: tuple[int, ...]

    def knows(self, vector: int) -> bool:
        return gf2.in_span(gf2.span_basis(self.known_vectors), vector)


def adversary_view(transcript: Transcript, compromised: Iterable[NodeId]) -> AdversaryView:
    compromised = frozenset(compromised)
    for v in compromised:
        if v in transcript.endpoints:
            raise ValueError(f"endpoint {v!r} cannot be marked compromised")
        if v not in transcript.node_views:
            raise ValueError(f"unknown node {v!r}")
    vectors = [msg.vector for msg in transcript.messages]
    for v in sorted(compromised):
        vectors.extend(transcript.node_views[v])
    return AdversaryView(compromised=compromised, known_vectors=tuple(vectors))


def leakage_oracle(transcript: Transcript, compromised: Iterable[NodeId]) -> str:
    """Decide whether a compromised relay set learns the final key.

    The adversary knows every classical message plus the per-node vectors of
    the compromised relays; the verdict is "compromised" exactly when the
    final key's symbol vector lies in the GF(2) span of that knowledge.
    """
    view = adversary_view(transcript, compromised)
    return "compromised" if view.knows(transcript.alice_key.vector) else "secure"


def leakage_sweep(transcript: Transcript) -> list[tuple[tuple[NodeId, ...], str]]:
    """Leakage verdict for every subset of relays, smallest subsets first."""
    nodes = sorted(transcript.node_views)
    if len(nodes) > SWEEP_NODE_CAP:
        raise SizeCapError(f"{len(nodes)} relays exceeds the sweep cap of {SWEEP_NODE_CAP}")
    public = gf2.new_basis()
    for msg in transcript.messages:
        gf2.insert(public, msg.vector)
    target = transcript.alice_key.vector
    out = []
    for size in range(len(nodes) + 1):
        for subset in combinations(nodes, size):
            basis = dict(public)
            for v in subset:
                for vec in transcript.node_views[v]:
                    gf2.insert(basis, vec)
            verdict = "compromised" if gf2.in_span(basis, target) else "secure"
            out.append((subset, verdict))
    return out


def transcript_csv(transcript: Transcript) -> str:
    """Messages as CSV: sender,receiver,symbolic,bits_hex."""
    width = (transcript.key_space.key_length + 3) // 4
    lines = ["sender,receiver,symbolic,bits_hex"]
    for msg in transcript.messages:
        symbolic = "^".join(transcript.symbol_names(msg.vector))
        lines.append(f"{msg.sender},{msg.receiver},{symbolic},{msg.bits:0{width}x}")
    return "\n".join(lines) + "\n"


def sweep_csv(results: Iterable[tuple[tuple[NodeId, ...], str]]) -> str:
    """Sweep results as CSV: subset,leaks (1 for compromised, 0 for secure)."""
    lines = ["subset,leaks"]
    for subset, verdict in results:
        lines.append(f"{';'.join(subset)},{1 if verdict == 'compromised' else 0}")
    return "\n".join(lines) + "\n"
