"""Cluster-phase labelling of per-cell ranking distributions.

Plain Euclidean k-means on the raw probability vectors with k-means++
seeding and a fixed set of restarts, so a labelling is a pure function of
``(data, k, seed)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .sweep import SweepResult

N_RESTARTS = 10
MAX_ITER = 500


@dataclass(frozen=True, eq=False)
class ClusterLabeling:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    seed: int

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ikd,ikd->ik", diff, diff)


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    m = X.shape[0]
    chosen = [int(rng.integers(m))]
    d2 = _sq_dists(X, X[chosen])[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = int(rng.choice(m, p=d2 / total))
        else:
            # every point coincides with a centre already; take an unused one
            free = np.setdiff1d(np.arange(m), chosen)
            idx = int(rng.choice(free))
        chosen.append(idx)
        d2 = np.minimum(d2, _sq_dists(X, X[idx : idx + 1])[:, 0])
    return X[chosen].copy()


def _means(X: np.ndarray, labels: np.ndarray, C: np.ndarray) -> np.ndarray:
    out = C.copy()
    for j in range(C.shape[0]):
        mask = labels == j
        if mask.any():
            out[j] = X[mask].mean(axis=0)
    return out


def _lloyd(X: np.ndarray, C: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray]:
    k = C.shape[0]
    labels = np.argmin(_sq_dists(X, C), axis=1)
    for _ in range(max_iter):
        # an empty cluster takes the point farthest from its own centre
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts == 0):
            d = _sq_dists(X, C)[np.arange(X.shape[0]), labels]
            donors = np.bincount(labels, minlength=k)[labels] > 1
            d = np.where(donors, d, -1.0)
            far = int(np.argmax(d))
            if d[far] < 0.0:
                break
            labels[far] = j
            C[j] = X[far]
        C = _means(X, labels, C)
        new = np.argmin(_sq_dists(X, C), axis=1)
        if np.array_equal(new, labels):
            break
        labels = new
    C = _means(X, labels, C)
    return labels, C


def kmeans(X, k: int, seed: int = 0, restarts: int = N_RESTARTS, max_iter: int = MAX_ITER):
    """Best of ``restarts`` k-means runs seeded ``seed, seed+1, ...``.

    The run with the lowest inertia wins; ties go to the earlier restart.
    Returns ``(labels, centroids, inertia)``.
    """
    X = np.asarray(X, dtype=float)
    m = X.shape[0]
    if not (1 <= k <= m):
        raise ParameterError(f"k must lie in [1, {m}], got {k}")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        C = _kmeanspp(X, k, rng)
        labels, C = _lloyd(X, C, max_iter)
        inertia = float(_sq_dists(X, C)[np.arange(m), labels].sum())
        if best is None or inertia < best[2]:
            best = (labels, C, inertia)
    return best


def cluster_distributions(r: SweepResult | np.ndarray, k: int = 7, seed: int = 0) -> ClusterLabeling:
    """Label every sweep cell (row-major) with one of ``k`` cluster tags."""
    X = r.ranks() if isinstance(r, SweepResult) else np.asarray(r, dtype=float)
    labels, C, inertia = kmeans(X, k, seed)
    return ClusterLabeling(k=k, labels=labels, centroids=C, inertia=inertia, seed=seed)


def representative_cells(r: SweepResult | np.ndarray, lab: ClusterLabeling) -> list[int]:
    """Per cluster, the member nearest its centroid (lowest index on ties).

    Empty clusters map to ``-1``.
    """
    X = r.ranks() if isinstance(r, SweepResult) else np.asarray(r, dtype=float)
    out = []
    for j in range(lab.k):
        members = np.flatnonzero(lab.labels == j)
        if members.size == 0:
            out.append(-1)
            continue
        d = _sq_dists(X[members], lab.centroids[j : j + 1])[:, 0]
        out.append(int(members[int(np.argmin(d))]))
    return out


def same_partition(a, b) -> bool:
    """True when two label sequences induce the same partition."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    fwd: dict = {}
    back: dict = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def write_labels(r: SweepResult, lab: ClusterLabeling, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta1", "theta2", "label"])
        for c, label in zip(r.cells, lab.labels):
            w.writerow([format(c.theta1, ".17g"), format(c.theta2, ".17g"), int(label)])


def write_centroids(lab: ClusterLabeling, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in lab.centroids:
            w.writerow([format(float(x), ".17g") for x in row])


def read_labels(path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["theta1", "theta2", "label"]:
        raise ParameterError(f"{path}: not a label-map file")
    return np.array([int(row[2]) for row in rows[1:]], dtype=np.int64)
