"""Graph generation from latent positions and graph CSV I/O."""

from .generators import (
    build_dcsbm_factors,
    build_factors,
    build_rdpg_factors,
    build_sbm_factors,
    gen_rdpg,
    sample_network,
)
from .io import read_dense, read_edge_list, read_graph, write_dense, write_edge_list

__all__ = [
    "build_dcsbm_factors",
    "build_factors",
    "build_rdpg_factors",
    "build_sbm_factors",
    "gen_rdpg",
    "sample_network",
    "read_dense",
    "read_edge_list",
    "read_graph",
    "write_dense",
    "write_edge_list",
]
