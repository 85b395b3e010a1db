"""Exact couplings and monotonicity certification for loop, random-current
and FK-Ising percolation models on finite multigraphs."""

__version__ = "0.1.0"

from .checkers import (
    DominationReport,
    FkgReport,
    fkg_pair_gap,
    fkg_report,
    lattice_condition,
    monotonicity_scan,
    stochastic_domination,
    union_preservation_test,
)
from .errors import (
    CapExceededError,
    GraphMismatchError,
    GraphStructureError,
    LoopCurrentsError,
    ParametrizationError,
    PoleError,
)
from .events import (
    Event,
    Statistic,
    all_open,
    check_increasing,
    connect,
    connect_sets,
    custom,
    cyclic_count,
    edge_count,
    edge_open,
    edge_open_cyclic,
    parse_event,
    statistic_dist,
    verified_increasing,
)
from .graphs import (
    CycleBasis,
    Graph,
    Marks,
    complete_graph,
    counter_family,
    cycle_space_basis,
    cyclic_edges,
    even_subgraph_count,
    even_subgraphs,
    generalized_theta,
    graph_from_json,
    graph_to_json,
    is_connected,
)
from .intervals import Interval, certify_decreasing_pair, sqrt_interval
from .measures import (
    CurrentParams,
    Dist,
    bernoulli,
    double_cluster,
    double_current,
    double_current_lis,
    double_loop,
    loop_o1,
    point_mass,
    prob,
    push_uniform_even,
    random_cluster,
    single_current,
    union,
    union_bernoulli,
)
from .rationals import (
    Polynomial,
    Rational,
    RationalFunction,
    dyadic_grid,
    find_decreasing_pair,
)
from .sampler import SamplerConfig, sample_coupled, sample_loop_mcmc
