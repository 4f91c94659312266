"""Spectral toolkit for Dirac operators with delta-shell interactions on star-graphs."""

from .graph import (
    EdgeConstants,
    StarGraph,
    broken_line_graph,
    convention_map_broken_line,
    derive_edge_constants,
    inverse_convention_map,
    make_graph,
    symmetric_graph,
    validate,
)
from .solver import SolverOptions, deficiency_indices, find_eigenvalues, sweep
from .transfer import edge_transfer, monodromy, secular, secular_det_oracle, wrap_transfer

__version__ = "0.1.0"
