"""cyclestop: exact and Monte Carlo checks of stopping-time identities for
random insertion processes on graphs and matroids."""

from .exactnum import (
    alt_stirling_sum_a,
    alt_stirling_sum_b,
    binom_ratio_sum,
    binomial,
    stirling2,
)
from .graphs import (
    ComponentStructure,
    Graph,
    GraphParseError,
    SetPartition,
    UnionFind,
    c_pair,
    complete,
    complete_bipartite,
    components,
    connected_graphs,
    cycle,
    d_pair,
    d_split_bruteforce,
    d_split_sum_partition,
    d_split_table,
    expected_stop_exact,
    family_graph,
    is_split,
    kn_identity,
    load_graph,
    parse_graph_text,
    path,
    q_connected,
    set_partitions,
    star,
    theorem_avg_graph,
    two_triangles,
)
from .matroids import (
    FlatLattice,
    IntPolynomial,
    Matroid,
    beta_invariant,
    char_poly,
    char_poly_deriv_at_1,
    closure,
    contract,
    d_matroid,
    enumerate_flats,
    expected_stop_matroid,
    gf_rank,
    graphic,
    lemma_flat_sum,
    linear_gf,
    prop_mu_contraction,
    prop_mu_intermediate,
    prop_mu_prank,
    theorem_avg_matroid,
    uniform,
)
from .procsim import (
    RNG_ALGORITHM,
    SimulationReport,
    exhaustive_stop_distribution,
    exhaustive_stop_mean,
    monte_carlo_element,
    monte_carlo_element_averaged,
    monte_carlo_first_edge,
    simulate_stop,
    trial_generator,
)

__version__ = "0.1.0"
