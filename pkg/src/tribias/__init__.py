"""Friendship-paradox bias computations on graphs.

Exact rational bias invariants on deterministic multigraphs, the
partially-completed-star-graph family with its gluing calculus, sparse
Erdos-Renyi and configuration-model expectations with enumeration
oracles, dense graphon limits, and a deterministic Monte Carlo engine.
"""

__version__ = "0.1.0"

from .errors import DomainError, GraphInputError, InvariantError, TribiasError
from .graphon import (
    BlockGraphon,
    ConstantGraphon,
    GridGraphon,
    RankOneGraphon,
    TwoBlockFactors,
    TwoBlockGraphon,
    dense_bias_limit,
    dense_bias_limit_quadrature,
    degree_density,
    graphon_from_json,
    graphon_to_json,
    profile_moments,
    rank_one_bias_limit,
    sample_graph,
    triangle_density,
    two_block_factors,
)
from .graphs import (
    BiasReport,
    Multigraph,
    attribute_bias,
    attribute_bias_covariance,
    count_triangles,
    degree_bias,
    format_edge_list,
    has_triangle,
    parse_edge_list,
    random_neighbor_weights,
    triangle_bias,
    triangle_counts,
    total_attribute_bias,
    total_triangle_bias,
    vertex_stats,
    wedge_bias,
    wedge_counts,
)
from .mc import (
    ConfigurationModel,
    ErdosRenyiModel,
    ExperimentConfig,
    GraphonModel,
    McEstimate,
    derive_trial_seed,
    run_mc,
)
from .sparse import (
    DegreeSequence,
    cm_triangle_free_limit,
    configuration_model_mean_bias,
    configuration_model_mean_bias_enumerated,
    er_triangle_free_limit,
    erdos_renyi_mean_bias,
    erdos_renyi_mean_bias_enumerated,
    sample_configuration_model,
    sample_erdos_renyi,
    zeta_cm,
    zeta_er,
)
from .star import (
    GlueBreakdown,
    PartialStarSpec,
    build_partial_star,
    glue_breakdown,
    glue_partial_stars,
    glue_vertex_by_role,
    iter_partial_stars,
    low_bias_catalogue,
    merge_at,
    partial_star_bias,
)
