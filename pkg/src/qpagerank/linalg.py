"""Cyclic Jacobi eigenvalue solver for small dense symmetric/Hermitian matrices.

Kept independent of LAPACK so it can cross-check the production eigensolver.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(a.diagonal())
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigvalsh_real(a, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pairs ``(p, q)`` until the Frobenius norm of
    the off-diagonal part is at most ``tol``. Returns eigenvalues ascending.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= tol:
            return np.sort(a.diagonal())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) plane rotation
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    off = _off_norm(a)
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", residual=float(off))


def jacobi_eigvalsh(h, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    ``H = X + iY`` is embedded in the real symmetric ``[[X, -Y], [Y, X]]``,
    whose spectrum is that of ``H`` with every eigenvalue doubled.
    """
    h = np.asarray(h)
    if not np.iscomplexobj(h):
        return jacobi_eigvalsh_real(h, tol, max_sweeps)
    x, y = h.real, h.imag
    big = np.block([[x, -y], [y, x]])
    vals = jacobi_eigvalsh_real(big, tol, max_sweeps)
    return vals[::2]
