from itertools import combinations

import pytest

from qkdnet import (
    LSchemeParams,
    Network,
    PathSystem,
    ProtocolError,
    SizeCapError,
    build_lscheme,
    build_mnop,
    find_disjoint_paths,
    leakage_oracle,
    leakage_sweep,
    run_hop_by_hop,
    run_hop_by_hop_combined,
    run_mops_broadcast,
    run_mops_pathcover,
)
from qkdnet.key_protocol import sweep_csv, transcript_csv

from conftest import removal_disconnects


def names(transcript, vector):
    return set(transcript.symbol_names(vector))


def rows_cover(net):
    """Horizontal rows of a generated scheme/chain network as a path system."""
    by_row: dict[str, list[str]] = {}
    for v in net.intermediates:
        row, col = v[1:].split("_")
        by_row.setdefault(row, []).append(v)
    return PathSystem(
        tuple(tuple(sorted(vs, key=lambda x: int(x.split("_")[1]))) for _, vs in sorted(by_row.items()))
    )


class TestHopByHop:
    def test_fig1_run(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        t = run_hop_by_hop(fig1_net, sys, key_length=64, seed=1)
        assert len(t.messages) == 6  # three hops per chain
        assert names(t, t.alice_key.vector) == {"K1", "K2"}
        assert t.alice_key.bits == t.bob_key.bits
        assert t.alice_key.vector == t.bob_key.vector

    def test_single_path_degenerate(self):
        net = build_mnop([1], 0.0)
        t = run_hop_by_hop(net, find_disjoint_paths(net, 1), key_length=32, seed=0)
        assert len(t.messages) == 2
        assert names(t, t.alice_key.vector) == {"K1"}
        assert t.alice_key.bits == t.bob_key.bits

    def test_messages_are_xor_of_their_symbols(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        t = run_hop_by_hop(fig1_net, sys, key_length=16, seed=9)
        for msg in t.messages:
            assert msg.bits == t.key_space.vector_bits(msg.vector)

    def test_invalid_system_rejected(self, fig1_net):
        with pytest.raises(ValueError, match="not an edge"):
            run_hop_by_hop(fig1_net, PathSystem((("p1_1", "p2_2"),)), 16, 0)


class TestHopByHopCombined:
    def test_one_relay_path(self):
        net = build_mnop([1], 0.0)
        t = run_hop_by_hop_combined(net, find_disjoint_paths(net, 1), 32, 0)
        assert len(t.messages) == 1
        assert names(t, t.messages[0].vector) == {"K[A:p1_1]", "K[B:p1_1]"}
        assert names(t, t.bob_key.vector) == {"K[A:p1_1]"}
        assert t.alice_key.bits == t.bob_key.bits

    def test_three_relay_path_telescopes(self):
        net = build_mnop([3], 0.0)
        t = run_hop_by_hop_combined(net, find_disjoint_paths(net, 1), 32, 0)
        assert names(t, t.messages[-1].vector) == {"K[A:p1_1]", "K[B:p1_3]"}

    def test_relay_identity_with_hop_by_hop(self, fig1_net):
        # single-step relaying only folds the per-hop ciphertexts together:
        # combined message i == (first hop) XOR (hop i), bitwise, per path
        sys = find_disjoint_paths(fig1_net, 2)
        hop = run_hop_by_hop(fig1_net, sys, key_length=64, seed=5)
        comb = run_hop_by_hop_combined(fig1_net, sys, key_length=64, seed=5)
        start = 0
        for path in sys.paths:
            first = next(m for m in hop.messages if m.sender == "A" and m.receiver == path[0])
            hop_msgs = [m for m in hop.messages if m.sender in path]
            comb_msgs = comb.messages[start : start + len(path)]
            start += len(path)
            for hm, cm in zip(hop_msgs, comb_msgs):
                assert cm.bits == first.bits ^ hm.bits
                assert cm.vector == first.vector ^ hm.vector

    def test_key_is_alice_side_link_keys(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        t = run_hop_by_hop_combined(fig1_net, sys, 32, 2)
        assert names(t, t.alice_key.vector) == {"K[A:p1_1]", "K[A:p2_1]"}
        assert t.alice_key.bits == t.bob_key.bits


class TestMopsBroadcast:
    def test_grid_example_message_total(self, grid_net):
        t = run_mops_broadcast(grid_net, key_length=64, seed=4)
        assert len(t.messages) == 6
        total = 0
        for msg in t.messages:
            assert msg.receiver == "B"
            total ^= msg.vector
        assert names(t, total) == {"K[1:A]", "K[4:A]", "K[3:B]", "K[6:B]"}
        assert names(t, t.alice_key.vector) == {"K[1:A]", "K[4:A]"}
        assert t.alice_key.bits == t.bob_key.bits

    def test_interlink_free_matches_combined_key(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        broadcast = run_mops_broadcast(fig1_net, key_length=32, seed=6)
        combined = run_hop_by_hop_combined(fig1_net, sys, key_length=32, seed=6)
        assert broadcast.alice_key.vector == combined.alice_key.vector
        assert broadcast.alice_key.bits == combined.alice_key.bits

    def test_single_chain(self):
        net = build_mnop([2], 0.0)
        t = run_mops_broadcast(net, 32, 0)
        assert names(t, t.alice_key.vector) == {"K[A:p1_1]"}
        assert t.alice_key.bits == t.bob_key.bits

    def test_disconnected_fails(self):
        net = Network(frozenset("ABx"), frozenset({("A", "x")}), "A", "B", {"x": 0.1})
        with pytest.raises(ProtocolError):
            run_mops_broadcast(net, 32, 0)


class TestMopsPathcover:
    def test_grid_example_messages(self, grid_net):
        cover = PathSystem((("1", "2", "3"), ("4", "5", "6")))
        t = run_mops_pathcover(grid_net, cover, key_length=64, seed=4)
        got = [(m.sender, m.receiver, names(t, m.vector)) for m in t.messages]
        assert got == [
            ("1", "2", {"K[1:A]", "K[1:2]", "K[1:4]"}),
            ("2", "3", {"K[1:A]", "K[1:4]", "K[2:3]", "K[2:5]"}),
            ("3", "B", {"K[1:A]", "K[1:4]", "K[2:5]", "K[3:6]", "K[3:B]"}),
            ("4", "5", {"K[4:A]", "K[4:5]", "K[1:4]"}),
            ("5", "6", {"K[4:A]", "K[1:4]", "K[2:5]", "K[5:6]"}),
            ("6", "B", {"K[4:A]", "K[1:4]", "K[2:5]", "K[3:6]", "K[6:B]"}),
        ]
        assert names(t, t.alice_key.vector) == {"K[1:A]", "K[4:A]"}
        assert t.alice_key.bits == t.bob_key.bits

    def test_same_key_as_broadcast(self, grid_net):
        cover = PathSystem((("1", "2", "3"), ("4", "5", "6")))
        a = run_mops_pathcover(grid_net, cover, key_length=64, seed=12)
        b = run_mops_broadcast(grid_net, key_length=64, seed=12)
        assert a.alice_key == b.alice_key
        assert a.bob_key == b.bob_key

    def test_interlink_free_reduces_to_combined(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        cover = run_mops_pathcover(fig1_net, sys, key_length=32, seed=3)
        combined = run_hop_by_hop_combined(fig1_net, sys, key_length=32, seed=3)
        assert [m.vector for m in cover.messages] == [m.vector for m in combined.messages]
        assert cover.alice_key == combined.alice_key

    def test_non_spanning_cover_rejected(self, grid_net):
        with pytest.raises(ValueError, match="missing \\['4', '5', '6'\\]"):
            run_mops_pathcover(grid_net, PathSystem((("1", "2", "3"),)), 32, 0)


class TestLeakageOracle:
    def test_adversary_view_contents(self, fig1_net):
        from qkdnet import adversary_view

        t = run_mops_broadcast(fig1_net, 32, 0)
        empty = adversary_view(t, set())
        assert len(empty.known_vectors) == len(t.messages)
        one = adversary_view(t, {"p1_1"})
        assert one.compromised == frozenset({"p1_1"})
        assert len(one.known_vectors) == len(t.messages) + 2  # two incident links
        assert not one.knows(t.alice_key.vector)

    def test_one_relay_per_path_leaks(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        t = run_hop_by_hop(fig1_net, sys, 32, 0)
        assert leakage_oracle(t, {"p1_1", "p2_2"}) == "compromised"

    def test_single_path_fully_compromised_stays_secure(self, fig1_net):
        sys = find_disjoint_paths(fig1_net, 2)
        t = run_hop_by_hop(fig1_net, sys, 32, 0)
        assert leakage_oracle(t, {"p1_1", "p1_2"}) == "secure"

    def test_endpoint_rejected(self, fig1_net):
        t = run_mops_broadcast(fig1_net, 32, 0)
        with pytest.raises(ValueError, match="endpoint"):
            leakage_oracle(t, {"A"})
        with pytest.raises(ValueError, match="unknown"):
            leakage_oracle(t, {"nope"})

    def test_public_messages_alone_never_leak(self, grid_net, fig1_net):
        for t in (
            run_mops_broadcast(grid_net, 32, 0),
            run_mops_broadcast(fig1_net, 32, 0),
            run_hop_by_hop(fig1_net, find_disjoint_paths(fig1_net, 2), 32, 0),
        ):
            assert leakage_oracle(t, set()) == "secure"

    def test_minimal_cut_leaks_on_grid(self, grid_net):
        t = run_mops_broadcast(grid_net, 32, 0)
        assert leakage_oracle(t, {"2", "5"}) == "compromised"
        assert leakage_oracle(t, {"1", "5"}) == "compromised"  # diagonal cut
        assert leakage_oracle(t, {"1", "6"}) == "secure"  # not a cut

    @pytest.mark.parametrize(
        "make_net",
        [
            lambda: build_mnop([2, 2], 0.1),
            lambda: build_lscheme(LSchemeParams(3, 2, 0.1)),
            lambda: build_lscheme(LSchemeParams(2, 3, 0.1)),
        ],
    )
    def test_cut_equivalence_broadcast_and_pathcover(self, make_net):
        net = make_net()
        transcripts = [
            run_mops_broadcast(net, 16, 1),
            run_mops_pathcover(net, rows_cover(net), 16, 1),
        ]
        inter = net.intermediates
        for r in range(len(inter) + 1):
            for subset in combinations(inter, r):
                expected = "compromised" if removal_disconnects(net, subset) else "secure"
                for t in transcripts:
                    assert leakage_oracle(t, set(subset)) == expected, (t.scheme, subset)

    @pytest.mark.parametrize(
        "make_net",
        [
            lambda: build_mnop([1, 1], 0.1),
            lambda: build_mnop([2, 2], 0.1),
            lambda: build_mnop([2, 3], 0.1),
            # interlinks weaken the chain relays: hitting each row suffices
            # even when the subset is not a vertex cut
            lambda: build_lscheme(LSchemeParams(3, 2, 0.1)),
        ],
    )
    def test_cut_equivalence_hop_by_hop(self, make_net):
        # for the chain relay the criterion is hitting every path, not cutting
        net = make_net()
        sys = rows_cover(net)
        for t in (run_hop_by_hop(net, sys, 16, 2), run_hop_by_hop_combined(net, sys, 16, 2)):
            inter = net.intermediates
            for r in range(len(inter) + 1):
                for subset in combinations(inter, r):
                    hits_all = all(any(v in subset for v in path) for path in sys.paths)
                    expected = "compromised" if hits_all else "secure"
                    assert leakage_oracle(t, set(subset)) == expected, (t.scheme, subset)


class TestKeyAgreementSweep:
    @pytest.mark.parametrize("seed", range(12))
    def test_all_schemes_agree(self, seed):
        nets = [build_mnop([2, 2], 0.1), build_lscheme(LSchemeParams(2, 3, 0.1))]
        for net in nets:
            sys = rows_cover(net)
            runs = [
                run_hop_by_hop(net, sys, 48, seed),
                run_hop_by_hop_combined(net, sys, 48, seed),
                run_mops_broadcast(net, 48, seed),
                run_mops_pathcover(net, sys, 48, seed),
            ]
            for t in runs:
                assert t.alice_key.bits == t.bob_key.bits
                assert t.alice_key.vector == t.bob_key.vector


class TestExports:
    def test_transcript_csv(self, grid_net):
        t = run_mops_broadcast(grid_net, key_length=64, seed=0)
        lines = transcript_csv(t).splitlines()
        assert lines[0] == "sender,receiver,symbolic,bits_hex"
        assert len(lines) == 7
        sender, receiver, symbolic, bits_hex = lines[1].split(",", 3)
        assert (sender, receiver) == ("1", "B")
        assert "K[1:A]" in symbolic and "^" in symbolic
        assert len(bits_hex) == 16

    def test_sweep_csv_and_cap(self, fig1_net):
        t = run_mops_broadcast(fig1_net, 16, 0)
        results = leakage_sweep(t)
        assert len(results) == 16
        text = sweep_csv(results)
        assert text.splitlines()[0] == "subset,leaks"
        assert text.splitlines()[1] == ",0"  # empty subset never leaks
        leaks = {subset: v for subset, v in results}
        assert leaks[("p1_1", "p2_1")] == "compromised"

    def test_sweep_cap(self):
        net = build_mnop([9, 9], 0.1)
        t = run_mops_broadcast(net, 16, 0)
        with pytest.raises(SizeCapError):
            leakage_sweep(t)
