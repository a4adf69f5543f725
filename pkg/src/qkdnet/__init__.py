"""Security analysis of multipath key exchange in trusted-node QKD networks."""

from .analysis import (
    EtaReport,
    FigureRow,
    PRange,
    SingleLinkReport,
    eta,
    figure_data,
    gamma,
    p_range,
    single_link_factor,
    single_link_report,
    v_n,
)
from .attack_sim import (
    MonteCarloResult,
    ResourceAttack,
    correlated_grid_oracle,
    correlated_optimal_attack,
    path_count_crossover,
    simulate_uncorrelated,
    single_path_extrema,
)
from .cut_combinatorics import (
    BetaLemmaReport,
    CutCensus,
    alpha_closed,
    alpha_matrix,
    count_cuts_bruteforce,
    count_min_cuts_dp,
    cut_census,
    exact_hack_probability,
    hack_prob_upper_bound,
    lscheme_cut_census,
    sample_cut_fraction,
    verify_beta_lemma,
)
from .errors import (
    DirectLinkError,
    InfeasibleError,
    NetworkParseError,
    ProtocolError,
    SizeCapError,
)
from .key_protocol import (
    AdversaryView,
    KeySpace,
    Transcript,
    adversary_view,
    leakage_oracle,
    leakage_sweep,
    run_hop_by_hop,
    run_hop_by_hop_combined,
    run_mops_broadcast,
    run_mops_pathcover,
)
from .net_model import (
    LSchemeParams,
    Network,
    PathSystem,
    build_lscheme,
    build_mnop,
    lscheme_interlink_columns,
    parse_network,
    serialize_network,
)
from .path_routing import (
    FlowNetwork,
    evaluate_path_counts,
    find_disjoint_paths,
    min_vertex_cut_order,
    optimize_path_count,
    path_system_hack_probability,
)

__version__ = "0.1.0"
