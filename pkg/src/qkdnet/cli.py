"""Command-line interface.

One subcommand per analysis operation; tabular results are CSV with a header
row, scalar results print bare.  Exit codes: 0 on success, 2 on precondition
or usage violations, 1 on internal errors.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis, attack_sim, cut_combinatorics, key_protocol, net_model, path_routing


def _read_net(path: str) -> net_model.Network:
    with open(path, encoding="utf-8") as fh:
        return net_model.parse_network(fh.read())


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _cmd_gen_mnop(args):
    net = net_model.build_mnop(args.lengths, args.p)
    _emit(args, net_model.serialize_network(net))


def _cmd_gen_lscheme(args):
    net = net_model.build_lscheme(net_model.LSchemeParams(n=args.n, l=args.l, uniform_p=args.p))
    _emit(args, net_model.serialize_network(net))


def _cmd_min_cut(args):
    _emit(args, str(path_routing.min_vertex_cut_order(_read_net(args.net))))


def _cmd_disjoint_paths(args):
    system = path_routing.find_disjoint_paths(_read_net(args.net), args.count)
    lines = ["path,nodes"]
    for i, path in enumerate(system.paths, start=1):
        lines.append(f"{i},{';'.join(path)}")
    _emit(args, "\n".join(lines) + "\n")


def _cmd_optimize_paths(args):
    net = _read_net(args.net)
    rows = path_routing.evaluate_path_counts(net, args.p, args.max_paths)
    best = min(rows, key=lambda r: (r[3], r[0]))[0]
    lines = ["count,total_intermediates,bound,selected"]
    for count, _system, total, bound in rows:
        lines.append(f"{count},{total},{bound:.6g},{1 if count == best else 0}")
    _emit(args, "\n".join(lines) + "\n")


def _cmd_alpha(args):
    if args.closed_form:
        _emit(args, repr(cut_combinatorics.alpha_closed(args.l)))
    elif args.l == 1:
        _emit(args, "1")
    else:
        _emit(args, str(cut_combinatorics.alpha_matrix(args.l)))


def _cmd_count_min_cuts(args):
    _emit(args, str(cut_combinatorics.count_min_cuts_dp(args.n, args.l)))


def _cmd_count_cuts(args):
    _emit(args, str(cut_combinatorics.count_cuts_bruteforce(_read_net(args.net), args.k)))


def _cmd_verify_beta(args):
    report = cut_combinatorics.verify_beta_lemma(args.n, args.l)
    verdict = "PASS" if report.passed else "FAIL"
    if report.max_ratio is None:
        _emit(args, f"{verdict} (no ratios: census too small)")
    else:
        _emit(
            args,
            f"{verdict} max_ratio={report.max_ratio:.6g} at k={report.max_ratio_k} "
            f"first_ratio={report.first_ratio:.6g}",
        )
    if not report.passed:
        raise ValueError(f"growth bound violated for n={args.n}, l={args.l}")


def _cmd_exact_prob(args):
    _emit(args, repr(cut_combinatorics.exact_hack_probability(_read_net(args.net), args.p)))


def _cmd_bound(args):
    _emit(args, repr(cut_combinatorics.hack_prob_upper_bound(args.n, args.l, args.p, args.r)))


def _cmd_census(args):
    _emit(args, cut_combinatorics.cut_census(_read_net(args.net)).to_csv())


def _cmd_mc_attack(args):
    if args.net:
        net = _read_net(args.net)
        scheme, n, l = "file", None, None
        if args.p is not None:
            trust = {v: args.p for v in net.trust}
            net = net_model.Network(net.nodes, net.edges, net.endpoint_a, net.endpoint_b, trust)
    else:
        if args.n is None or args.l is None or args.p is None:
            raise ValueError("mc-attack needs either --net or all of --n, --l, --p")
        net = net_model.build_lscheme(net_model.LSchemeParams(n=args.n, l=args.l, uniform_p=args.p))
        scheme, n, l = "lscheme", args.n, args.l
    result = attack_sim.simulate_uncorrelated(net, args.trials, args.seed)
    values = set(net.trust.values())
    exact = None
    if len(values) == 1 and len(net.intermediates) <= cut_combinatorics.ENUMERATION_CAP:
        exact = cut_combinatorics.exact_hack_probability(net, values.pop())
    _emit(args, attack_sim.mc_csv_rows(scheme, n, l, args.p, result, exact))


def _cmd_correlated(args):
    system = net_model.PathSystem(
        tuple(tuple(f"p{j}_{k}" for k in range(1, n + 1)) for j, n in enumerate(args.paths, 1))
    )
    attack, optimal = attack_sim.correlated_optimal_attack(system, args.alpha_slope, args.resources)
    grid_alloc, grid_best = attack_sim.correlated_grid_oracle(
        args.paths, args.alpha_slope, args.resources, args.grid_steps
    )
    lines = ["source,probability,allocation"]
    opt_cells = ";".join(f"{v}={r:.6g}" for v, r in sorted(attack.allocation.items()))
    lines.append(f"optimal,{optimal:.6g},{opt_cells}")
    grid_cells = ";".join(f"{v}={r:.6g}" for v, r in sorted(grid_alloc.items()))
    lines.append(f"grid,{grid_best:.6g},{grid_cells}")
    _emit(args, "\n".join(lines) + "\n")


def _cmd_crossover(args):
    p1, p2, best = attack_sim.path_count_crossover(args.n, args.p)
    _emit(args, "n,p,p1,p2,best\n" f"{args.n},{args.p:.6g},{p1:.6g},{p2:.6g},{best}\n")


def _cmd_eta(args):
    report = analysis.eta(args.n, args.l, args.p, args.r)
    _emit(
        args,
        "n,l,p,r,mu,eta,eta_corrected,verdict\n"
        f"{report.n},{report.l},{report.p:.6g},{report.r:.6g},{report.mu:.6g},"
        f"{report.eta:.6g},{report.eta_corrected:.6g},{report.verdict}\n",
    )


def _cmd_gamma(args):
    _emit(args, repr(analysis.gamma(args.mu)))


def _cmd_p_range(args):
    window = analysis.p_range(args.n, args.l, args.r, corrected=args.corrected)
    _emit(
        args,
        "p_min,p_max,nonempty\n"
        f"{window.p_min:.6g},{window.p_max:.6g},{'true' if window.nonempty else 'false'}\n",
    )


def _cmd_single_link(args):
    report = analysis.single_link_report(args.n)
    _emit(
        args,
        "n,column,cuts_with_link,cuts_without_link,ratio\n"
        f"{report.n},{report.column},{report.cuts_with_link},"
        f"{report.cuts_without_link},{report.ratio:.6g}\n",
    )


def _run_scheme(args, net):
    if args.scheme == "mops-broadcast":
        return key_protocol.run_mops_broadcast(net, args.key_length, args.seed)
    order = path_routing.min_vertex_cut_order(net)
    system = path_routing.find_disjoint_paths(net, order)
    if args.scheme == "hop-by-hop":
        return key_protocol.run_hop_by_hop(net, system, args.key_length, args.seed)
    if args.scheme == "hop-by-hop-combined":
        return key_protocol.run_hop_by_hop_combined(net, system, args.key_length, args.seed)
    return key_protocol.run_mops_pathcover(net, system, args.key_length, args.seed)


def _cmd_simulate(args):
    transcript = _run_scheme(args, _read_net(args.net))
    _emit(args, key_protocol.transcript_csv(transcript))


def _cmd_leakage(args):
    transcript = _run_scheme(args, _read_net(args.net))
    if args.sweep:
        results = key_protocol.leakage_sweep(transcript)
    else:
        subset = tuple(x for x in (args.compromised or "").split(",") if x)
        results = [(subset, key_protocol.leakage_oracle(transcript, subset))]
    _emit(args, key_protocol.sweep_csv(results))


def _cmd_figure_data(args):
    rows = analysis.figure_data(r=args.r, n_max=args.n_max, l_max=args.l_max)
    _emit(args, analysis.figure_csv(rows))


_SCHEMES = ["hop-by-hop", "hop-by-hop-combined", "mops-broadcast", "mops-pathcover"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdnet",
        description="Security analysis of multipath key exchange in trusted-node QKD networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--out", help="write output to a file instead of stdout")
        return p

    p = add("gen-mnop", _cmd_gen_mnop, "generate a disjoint-chains network file")
    p.add_argument("--lengths", type=_int_list, required=True, help="e.g. 2,2")
    p.add_argument("--p", type=float, default=0.0)

    p = add("gen-lscheme", _cmd_gen_lscheme, "generate an interlinked l-scheme network file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=float, default=0.0)

    p = add("min-cut", _cmd_min_cut, "minimum A-B vertex cut order")
    p.add_argument("--net", required=True)

    p = add("disjoint-paths", _cmd_disjoint_paths, "minimum-length disjoint path system")
    p.add_argument("--net", required=True)
    p.add_argument("--count", type=int, required=True)

    p = add("optimize-paths", _cmd_optimize_paths, "best path count under the (mean*p)^N bound")
    p.add_argument("--net", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--max-paths", type=int, default=10)

    p = add("alpha", _cmd_alpha, "minimal cuts per column of the l-scheme")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--closed-form", action="store_true", help="evaluate the closed form instead")

    p = add("count-min-cuts", _cmd_count_min_cuts, "exact minimal-cut count of the (n,l) scheme")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)

    p = add("count-cuts", _cmd_count_cuts, "brute-force count of size-k disconnecting subsets")
    p.add_argument("--net", required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("verify-beta", _cmd_verify_beta, "validate the cut-count growth bound by census")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)

    p = add("exact-prob", _cmd_exact_prob, "exact compromise probability by enumeration")
    p.add_argument("--net", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("bound", _cmd_bound, "geometric upper bound on the compromise probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)

    p = add("census", _cmd_census, "full table of disconnecting-subset counts")
    p.add_argument("--net", required=True)

    p = add("mc-attack", _cmd_mc_attack, "Monte Carlo estimate of the compromise probability")
    p.add_argument("--net")
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("correlated", _cmd_correlated, "optimal finite-resource attack and grid check")
    p.add_argument("--paths", type=_int_list, required=True, help="path lengths, e.g. 2,2")
    p.add_argument("--alpha-slope", type=float, required=True)
    p.add_argument("--resources", type=float, required=True)
    p.add_argument("--grid-steps", type=int, default=10)

    p = add("crossover", _cmd_crossover, "single-path vs two-path comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("eta", _cmd_eta, "efficiency ratio of the l-scheme vs l+1 chains")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)

    p = add("gamma", _cmd_gamma, "linearization correction factor")
    p.add_argument("--mu", type=float, required=True)

    p = add("p-range", _cmd_p_range, "window of p where the l-scheme wins")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--corrected", action="store_true")

    p = add("single-link", _cmd_single_link, "2-cut reduction from one mid-column link")
    p.add_argument("--n", type=int, required=True)

    p = add("simulate", _cmd_simulate, "run a key-relay protocol and dump the transcript")
    p.add_argument("--scheme", choices=_SCHEMES, required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--key-length", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)

    p = add("leakage", _cmd_leakage, "leakage verdict for compromised relay sets")
    p.add_argument("--scheme", choices=_SCHEMES, required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--compromised", help="comma-separated relay ids")
    p.add_argument("--sweep", action="store_true", help="all subsets instead of one")
    p.add_argument("--key-length", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)

    p = add("figure-data", _cmd_figure_data, "admissible-p grid as CSV")
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--l-max", type=int, default=10)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
