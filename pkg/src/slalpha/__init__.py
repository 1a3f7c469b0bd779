"""Density-aware single linkage: SL(alpha), SL*(alpha) and chaining analysis."""

from .alpha import BlockGraph, InternalError, StarMergePlan, block_graph, classify_blocks, sl_alpha, sl_star_alpha, star_merge_plan
from .chains import (
    BridgeScenario,
    ChainReport,
    Hypothesis,
    ModerateScenario,
    ScenarioCheck,
    check_sl_order_dominance,
    detect_chained,
    detect_single_edge_chained,
    detect_smaller_block_chained,
    verify_bridge_unchaining,
    verify_completely_chaining,
    verify_moderate_bridge_theorem,
    verify_strongly_chaining,
    verify_weakly_unchaining,
)
from .dbscan import DbscanLabeling, DbscanParams, dbscan
from .dendrogram import (
    Dendrogram,
    DendrogramError,
    Ultrametric,
    check,
    from_ultrametric,
    partition_at,
    to_newick,
    to_ultrametric,
    validate,
)
from .linkage import agglomerate, linkage_value, single_linkage_components
from .metric import (
    FiniteMetricSpace,
    MetricError,
    Partition,
    connectivity_threshold,
    distance_levels,
    epsilon_components,
    from_distance_matrix,
    from_weighted_graph,
)
from .rips import cross_link_admissible, max_cross_simplex_dim, rips_dim

__all__ = [
    "BlockGraph", "BridgeScenario", "ChainReport", "DbscanLabeling", "DbscanParams", "Dendrogram",
    "DendrogramError", "FiniteMetricSpace", "Hypothesis", "InternalError", "MetricError", "ModerateScenario",
    "Partition", "ScenarioCheck", "StarMergePlan", "Ultrametric", "agglomerate", "block_graph", "check",
    "check_sl_order_dominance", "classify_blocks", "connectivity_threshold", "cross_link_admissible", "dbscan",
    "detect_chained", "detect_single_edge_chained", "detect_smaller_block_chained", "distance_levels",
    "epsilon_components", "from_distance_matrix", "from_ultrametric", "from_weighted_graph", "linkage_value",
    "max_cross_simplex_dim", "partition_at", "rips_dim", "single_linkage_components", "sl_alpha", "sl_star_alpha",
    "star_merge_plan", "to_newick", "to_ultrametric", "validate", "verify_bridge_unchaining",
    "verify_completely_chaining", "verify_moderate_bridge_theorem", "verify_strongly_chaining",
    "verify_weakly_unchaining",
]
