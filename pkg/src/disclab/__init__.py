"""disclab: discrepancy of spanning subgraphs in 2-edge-colored complete graphs.

Library + CLI covering: graph/coloring generators, biased-bisection search,
expectation and pair-switching embedders with exactly re-verifiable
certificates, extremal K_k-factor and 2-factor constants, exact and
Monte-Carlo checks of the underlying probabilistic inequalities, and exact
brute-force oracles at small n.
"""

from .graphcore import (
    CapacityError,
    Coloring,
    DimensionError,
    DiscrepancyReport,
    DisclabError,
    Embedding,
    Graph,
    GraphParseError,
    InfeasibleDegreeError,
    InvalidEmbeddingError,
    ParameterError,
    Seed,
    all_blue_coloring,
    all_red_coloring,
    bipartite_construction,
    complete_bipartite_coloring,
    discrepancy,
    count_red_edges,
    parse_coloring,
    parse_graph,
    random_coloring,
    random_embedding,
    random_regular_graph,
    star_clique_path_guest,
    two_cliques_coloring,
    write_coloring,
    write_graph,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
