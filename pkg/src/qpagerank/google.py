"""Transition matrix, damped Google matrix and classical PageRank.

Layout convention: ``M[i, j]`` is the probability of moving from source
node ``j`` to target node ``i``, so every column sums to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError
from .graph import DirectedGraph

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class GoogleMatrix:
    """Column-stochastic ``alpha * E + (1 - alpha) / n``."""

    alpha: float
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


def transition_matrix(g: DirectedGraph) -> np.ndarray:
    """Link-following matrix ``E``; dangling nodes jump uniformly."""
    n = g.n
    E = np.zeros((n, n))
    outdeg = g.out_degree()
    for u, v in g.edges:
        E[v, u] = 1.0 / outdeg[u]
    E[:, outdeg == 0] = 1.0 / n
    return E


def google_matrix(g: DirectedGraph, alpha: float = DEFAULT_ALPHA) -> GoogleMatrix:
    if not (0.0 <= alpha <= 1.0):
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    E = transition_matrix(g)
    return GoogleMatrix(alpha, alpha * E + (1.0 - alpha) / g.n)


def classical_pagerank(
    G: GoogleMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> np.ndarray:
    """Power iteration from the uniform vector.

    Stops once the L1 change between iterates drops below ``tol``; raises
    ``ConvergenceError`` (with the last residual) after ``max_iter`` steps.
    """
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    M = G.entries
    r = np.full(G.n, 1.0 / G.n)
    change = np.inf
    for _ in range(max_iter):
        nxt = M @ r
        nxt /= nxt.sum()
        change = np.abs(nxt - r).sum()
        r = nxt
        if change < tol:
            return r
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps (last change {change:.3e})",
        residual=float(np.abs(M @ r - r).sum()),
    )
