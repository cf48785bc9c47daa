"""Structural analysis of class dependency networks.

Build directed dependency networks from source-code signatures, measure
degree mixing and (degree-corrected) clustering, extract statistically
significant node groups with a tabu-search objective against an
Erdos-Renyi null model, relate group structure back to mixing, and
predict node labels from network position.

The heavy kernels (group search, triangle counting) run as numba-compiled
code by default with an equivalent pure-numpy path; set ``SWNET_NUMBA=0``
to force the fallback.  ``SWNET_THREADS`` caps worker threads.
"""

__version__ = "0.1.0"

from .accel import NUMBA_ENABLED
from .clustering import (
    ClusteringReport,
    clustering_c,
    clustering_d,
    clustering_mixing,
    clustering_report,
    degree_clustering_profile,
    neighbor_clustering_profile,
)
from .graph import (
    DegreeSummary,
    DependencyNetwork,
    GraphError,
    NodeRecord,
    degree_summary,
    from_links,
    largest_component,
    reduce_to_simple,
)
from .groupmix import (
    GroupMixingReport,
    group_means,
    group_mixing,
    group_mixing_report,
    group_profiles,
)
from .groups import (
    ExtractionConfig,
    ExtractionResult,
    NodeGroup,
    criterion_w,
    extract_all,
    group_summary,
    sample_gnm_edges,
    significance_threshold,
    tabu_search_best_group,
)
from .mixing import (
    MixingReport,
    PowerLawFit,
    degree_mixing,
    edge_end_pearson,
    fit_power_law,
    mixing_report,
    neighbor_connectivity,
    sample_power_law,
    sigma_degree,
)
from .netbuild import (
    BuildResult,
    ClassModel,
    CorpusError,
    build_network,
    explicit_edges,
    parse_signatures,
    propagate_implicit,
)
from .netio import load_network, read_node_table, save_edge_list, save_node_table
from .predict import (
    PredictionConfig,
    PredictionResult,
    evaluate,
    jaccard_similarity,
    labels_from_attributes,
    predict_label,
    truncate_label,
    truncate_labels,
)

__all__ = [name for name in dir() if not name.startswith("_")]
