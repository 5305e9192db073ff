import itertools

import numpy as np
import pytest

from qpagerank.cluster import (
    cluster_distributions,
    kmeans,
    read_labels,
    representative_cells,
    same_partition,
    write_centroids,
    write_labels,
)
from qpagerank.errors import ParameterError
from qpagerank.graph import generate_scale_free
from qpagerank.sweep import run_sweep


def blobs():
    X = np.zeros((16, 4))
    X[:8, 0] = 1.0
    X[8:, 1] = 1.0
    return X


def brute_force_best_partition(X, k):
    best = None
    for labels in itertools.product(range(k), repeat=X.shape[0]):
        labels = np.array(labels)
        if len(set(labels.tolist())) < k:
            continue
        inertia = sum(((X[labels == j] - X[labels == j].mean(0)) ** 2).sum() for j in range(k))
        if best is None or inertia < best[1] - 1e-15:
            best = (labels, inertia)
    return best


def test_identical_cells_single_cluster():
    X = np.tile([0.25, 0.25, 0.5], (9, 1))
    lab = cluster_distributions(X, k=1, seed=0)
    assert set(lab.labels.tolist()) == {0}
    assert lab.inertia == 0.0


def test_two_blobs_exact_partition():
    lab = cluster_distributions(blobs(), k=2, seed=3)
    assert same_partition(lab.labels, [0] * 8 + [1] * 8)
    assert lab.inertia == 0.0


def test_small_case_matches_enumeration():
    rng = np.random.default_rng(5)
    X = np.vstack([rng.normal(0, 0.1, (4, 2)), rng.normal(3, 0.1, (4, 2))])
    labels, inertia = brute_force_best_partition(X, 2)
    lab = cluster_distributions(X, k=2, seed=0)
    assert same_partition(lab.labels, labels)
    assert lab.inertia == pytest.approx(inertia, abs=1e-12)


def test_k_equals_cells_zero_inertia():
    rng = np.random.default_rng(1)
    X = rng.dirichlet(np.ones(5), size=12)
    lab = cluster_distributions(X, k=12, seed=0)
    assert lab.inertia == pytest.approx(0.0, abs=1e-30)
    assert sorted(lab.labels.tolist()) == list(range(12))


def test_k_out_of_range():
    with pytest.raises(ParameterError):
        kmeans(blobs(), 0)
    with pytest.raises(ParameterError):
        kmeans(blobs(), 17)


def test_duplicates_with_large_k_never_fail():
    X = np.vstack([np.tile([1.0, 0.0], (5, 1)), np.tile([0.0, 1.0], (5, 1))])
    lab = cluster_distributions(X, k=4, seed=2)
    assert lab.inertia == 0.0
    assert lab.labels.max() < 4


def test_centroids_are_member_means():
    rng = np.random.default_rng(2)
    X = rng.dirichlet(np.ones(6), size=60)
    lab = cluster_distributions(X, k=5, seed=9)
    for j in range(5):
        members = X[lab.labels == j]
        if len(members):
            assert np.abs(lab.centroids[j] - members.mean(0)).max() <= 1e-9


def test_deterministic():
    rng = np.random.default_rng(4)
    X = rng.dirichlet(np.ones(6), size=50)
    a = cluster_distributions(X, k=4, seed=11)
    b = cluster_distributions(X, k=4, seed=11)
    assert np.array_equal(a.labels, b.labels) and a.inertia == b.inertia


def test_restarts_pick_lowest_inertia():
    rng = np.random.default_rng(6)
    X = rng.dirichlet(np.ones(4), size=40)
    _, _, best = kmeans(X, 4, seed=0, restarts=10)
    singles = [kmeans(X, 4, seed=s, restarts=1)[2] for s in range(10)]
    assert best == min(singles)


def test_representatives():
    X = blobs()
    lab = cluster_distributions(X, k=2, seed=0)
    reps = representative_cells(X, lab)
    # coincident members: lowest index of each blob
    assert sorted(reps) == [0, 8]


def test_representative_single_member():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [0.25, 0.75]])
    lab = cluster_distributions(X, k=2, seed=0)
    reps = representative_cells(X, lab)
    assert 0 in reps
    other = [r for r in reps if r != 0][0]
    # centroid (0.125, 0.875) is exactly equidistant from both members; tie -> lowest index
    assert other == 1


def test_same_partition_helper():
    assert same_partition([0, 0, 1, 2], [2, 2, 0, 1])
    assert not same_partition([0, 0, 1], [0, 1, 1])
    assert not same_partition([0, 1], [0, 0])


def test_sweep_labels_symmetric_and_files(tmp_path):
    g = generate_scale_free(10, 2, 2)
    r = run_sweep(g, "standard", 6, T=40, dt=10)
    lab = cluster_distributions(r, k=3, seed=1)
    G = r.grid.resolution
    mirror = [r.grid.mirror_index(i1) * G + r.grid.mirror_index(i2)
              for i1 in range(G) for i2 in range(G)]
    assert np.array_equal(lab.labels, lab.labels[mirror])
    write_labels(r, lab, tmp_path / "labels.csv")
    write_centroids(lab, tmp_path / "cent.csv")
    assert np.array_equal(read_labels(tmp_path / "labels.csv"), lab.labels)
    rows = (tmp_path / "cent.csv").read_text().splitlines()
    assert len(rows) == 3 and all(len(row.split(",")) == 10 for row in rows)
