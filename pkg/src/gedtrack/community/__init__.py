from .cliques import CliqueSet, cpm_extract, enumerate_k_cliques, maximal_cliques, percolate
from .louvain import (
    HierarchicalPartition,
    ModularityState,
    louvain_extract,
    modularity,
    modularity_gain,
)

__all__ = [
    "CliqueSet",
    "HierarchicalPartition",
    "ModularityState",
    "cpm_extract",
    "enumerate_k_cliques",
    "louvain_extract",
    "maximal_cliques",
    "modularity",
    "modularity_gain",
    "percolate",
]
