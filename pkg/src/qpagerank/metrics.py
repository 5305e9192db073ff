"""Scalar metrics over ranking distributions and reduced density matrices.

``l1_coherence`` and ``entanglement_entropy`` accept a single ``(n, n)``
matrix or a stack ``(..., n, n)`` and return a float or an array to match.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FitError, ParameterError
from .linalg import jacobi_eigvalsh

EIGEN_FLOOR = 1e-12
BETA_FLOOR = 1e-12


@dataclass(frozen=True)
class BetaFit:
    """Least-squares fit of ``log I_i = intercept - beta * log i``."""

    beta: float
    intercept: float
    r2: float
    points_used: int


def fidelity(a, b) -> float:
    """Bhattacharyya overlap ``sum_i sqrt(a_i * b_i)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    f = float(np.sum(np.sqrt(np.clip(a, 0.0, None) * np.clip(b, 0.0, None))))
    return min(f, 1.0)


def variance(a) -> float:
    """Population variance of the probabilities about their mean ``1/n``."""
    a = np.asarray(a, dtype=float)
    return float(np.mean((a - 1.0 / a.size) ** 2))


def l1_coherence(rho):
    rho = np.asarray(rho)
    absr = np.abs(rho)
    total = absr.sum(axis=(-2, -1)) - np.trace(absr, axis1=-2, axis2=-1)
    total = np.maximum(total, 0.0)
    return float(total) if rho.ndim == 2 else total


def _entropy_from_eigs(lam: np.ndarray):
    lam = np.where(lam < EIGEN_FLOOR, 0.0, lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0.0, -lam * np.log2(lam), 0.0)
    return np.maximum(terms.sum(axis=-1), 0.0)


def entanglement_entropy(rho, method: str = "lapack"):
    """Von Neumann entropy in bits, ``-sum lambda log2 lambda``.

    Eigenvalues below ``EIGEN_FLOOR`` (including round-off negatives)
    contribute zero. ``method="jacobi"`` uses the in-house cyclic Jacobi
    solver instead of LAPACK and only supports a single matrix.
    """
    rho = np.asarray(rho)
    if method == "lapack":
        lam = np.linalg.eigvalsh(rho)
    elif method == "jacobi":
        if rho.ndim != 2:
            raise DimensionError("jacobi method takes a single matrix")
        lam = jacobi_eigvalsh(rho)
    else:
        raise ParameterError(f"unknown eigen method {method!r}")
    s = _entropy_from_eigs(lam)
    return float(s) if rho.ndim == 2 else s


def beta_fit(a) -> BetaFit:
    """Fit the power-law exponent of a ranking distribution.

    Probabilities are sorted in descending order, entries at or below
    ``BETA_FLOOR`` are dropped, and ``log I`` is regressed on ``log i`` for
    the 1-based sorted index ``i``. A constant response is a perfect fit
    (``r2 = 1``).
    """
    p = np.sort(np.asarray(a, dtype=float))[::-1]
    p = p[p > BETA_FLOOR]
    k = p.size
    if k < 2:
        raise FitError(f"need at least 2 probabilities above {BETA_FLOOR}, got {k}")
    x = np.log(np.arange(1, k + 1, dtype=float))
    y = np.log(p)
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    slope = float(dx @ dy) / sxx
    intercept = ym - slope * xm
    if syy == 0.0:
        r2 = 1.0
    else:
        resid = y - (intercept + slope * x)
        r2 = 1.0 - float(resid @ resid) / syy
    return BetaFit(
        beta=max(-slope, 0.0),
        intercept=float(intercept),
        r2=min(max(r2, 0.0), 1.0),
        points_used=k,
    )
