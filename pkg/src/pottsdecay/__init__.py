"""Correlation-decay approximation of anti-ferromagnetic Potts marginals.

The package computes deterministic estimates of Gibbs marginals on sparse
graphs by recursing over minimal permissive blocks, telescopes those
estimates into partition function approximations, and samples configurations
from the estimated conditionals. Exact brute-force oracles and random-graph
property verifiers back every estimate.
"""

from .blocks import (
    Block,
    feasible_block_configs,
    feasible_tuples,
    first_feasible_tuple,
    minimal_permissive_block,
    verify_locally_sparse,
)
from .counting import PartitionEstimate, estimate_partition, find_feasible_config
from .decay import (
    DepthBudget,
    MargDiagnostics,
    RecursionLimits,
    build_subinstance,
    error_bound,
    escape_paths,
    marg,
    marg_block,
    marg_coloring,
    marginal_distribution,
    marginal_vector,
)
from .errors import BudgetError, InfeasibleError, ParseError, PottsError
from .exact import (
    GibbsTable,
    exact_block_marginal,
    exact_gibbs_table,
    exact_marginal,
    exact_marginal_vector,
    exact_partition,
    is_feasible,
)
from .graph import (
    Graph,
    dist,
    generate,
    generate_caterpillar,
    generate_complete,
    generate_cycle,
    generate_gnp,
    generate_path,
    generate_star,
    load_graph,
    serialize_graph,
)
from .model import (
    Configuration,
    Instance,
    PottsParams,
    log_weight,
    monochromatic_edges,
    parse_activity,
    weight,
)
from .randstats import (
    GrowthProcessReport,
    expected_contraction,
    simulate_block_growth,
    verify_gnp_properties,
)
from .sampling import SampleBatch, empirical_tv, sample_batch, sample_config
from .saw import (
    build_saw_tree,
    e_delta,
    e_delta_profile,
    enumerate_saws,
    saw_count,
    saw_count_profile,
    verify_contraction,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "BudgetError",
    "Configuration",
    "DepthBudget",
    "GibbsTable",
    "Graph",
    "GrowthProcessReport",
    "InfeasibleError",
    "Instance",
    "MargDiagnostics",
    "ParseError",
    "PartitionEstimate",
    "PottsError",
    "PottsParams",
    "RecursionLimits",
    "SampleBatch",
    "build_saw_tree",
    "build_subinstance",
    "dist",
    "e_delta",
    "e_delta_profile",
    "empirical_tv",
    "enumerate_saws",
    "error_bound",
    "escape_paths",
    "estimate_partition",
    "exact_block_marginal",
    "exact_gibbs_table",
    "exact_marginal",
    "exact_marginal_vector",
    "exact_partition",
    "expected_contraction",
    "feasible_block_configs",
    "feasible_tuples",
    "find_feasible_config",
    "first_feasible_tuple",
    "generate",
    "generate_caterpillar",
    "generate_complete",
    "generate_cycle",
    "generate_gnp",
    "generate_path",
    "generate_star",
    "is_feasible",
    "load_graph",
    "log_weight",
    "marg",
    "marg_block",
    "marg_coloring",
    "marginal_distribution",
    "marginal_vector",
    "minimal_permissive_block",
    "monochromatic_edges",
    "parse_activity",
    "sample_batch",
    "sample_config",
    "saw_count",
    "saw_count_profile",
    "serialize_graph",
    "simulate_block_growth",
    "verify_contraction",
    "verify_gnp_properties",
    "verify_locally_sparse",
    "weight",
]
