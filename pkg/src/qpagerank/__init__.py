"""Quantum PageRank on directed graphs via Szegedy walks with arbitrary phase rotations."""

__version__ = "0.1.0"

from .cluster import ClusterLabeling, cluster_distributions, representative_cells
from .errors import (
    CellError,
    ConvergenceError,
    DimensionError,
    DuplicateEdgeError,
    FitError,
    GraphRangeError,
    ParameterError,
    ParseError,
    QPageRankError,
    SchemaError,
)
from .google import GoogleMatrix, classical_pagerank, google_matrix, transition_matrix
from .graph import DirectedGraph, generate_scale_free, load_edge_list, reverse
from .metrics import BetaFit, beta_fit, entanglement_entropy, fidelity, l1_coherence, variance
from .sweep import CellRecord, GridSpec, SweepResult, read_sweep, run_sweep, write_sweep
from .walk import (
    PhaseSchedule,
    RunResult,
    Scheme,
    WalkState,
    apply_pi,
    apply_swap,
    apply_u,
    evolve,
    initial_state,
    instantaneous_rank,
    reduced_density,
    step,
)
