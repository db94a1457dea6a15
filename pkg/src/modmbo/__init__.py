"""Community detection on weighted graphs via TV-energy threshold dynamics."""

from .baselines import newman_recursive_bipartition, spectral_clustering
from .eigen import (EigenBasis, EigenConvergenceError, default_n_eig,
                    smallest_eigenpairs)
from .functional import (Partition, balance, energy_h, energy_h_subgraph,
                         indicator_from_labels, labels_from_indicator,
                         modularity, tv, weighted_mean)
from .graph import (Graph, Laplacian, build_graph, cut, induced_subgraph,
                    laplacian, volume)
from .mbo import MboConfig, MboResult, initial_function, run_mbo, threshold
from .metrics import ContingencyTable, community_sizes, nmi, purity
from .pipeline import (PlantedPartitionSpec, knn_graph, planted_partition,
                       read_edge_list, read_features, read_labels,
                       read_partition, write_edge_list, write_partition)
from .schemes import MultiSweepResult, SchemeConfig, run_multi_n, run_rmm

__version__ = "0.1.0"

__all__ = [
    "Graph", "Laplacian", "build_graph", "laplacian", "volume", "cut",
    "induced_subgraph",
    "EigenBasis", "EigenConvergenceError", "smallest_eigenpairs",
    "default_n_eig",
    "Partition", "modularity", "tv", "weighted_mean", "balance", "energy_h",
    "energy_h_subgraph", "indicator_from_labels", "labels_from_indicator",
    "MboConfig", "MboResult", "initial_function", "threshold", "run_mbo",
    "SchemeConfig", "MultiSweepResult", "run_rmm", "run_multi_n",
    "spectral_clustering", "newman_recursive_bipartition",
    "ContingencyTable", "nmi", "purity", "community_sizes",
    "PlantedPartitionSpec", "knn_graph", "planted_partition",
    "read_edge_list", "write_edge_list", "read_partition", "write_partition",
    "read_labels", "read_features",
    "__version__",
]
