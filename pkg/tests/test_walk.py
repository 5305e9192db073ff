import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    dense_basis,
    dense_projector,
    dense_scheme,
    dense_swap,
    dense_u,
    partial_trace_copy2,
    random_graph_edges,
    random_state,
)
from qpagerank.errors import DimensionError, ParameterError
from qpagerank.google import google_matrix
from qpagerank.graph import DirectedGraph, generate_scale_free
from qpagerank.walk import (
    PhaseSchedule,
    Scheme,
    WalkState,
    apply_pi,
    apply_swap,
    apply_u,
    basis_states,
    evolve,
    evolve_batch,
    initial_state,
    instantaneous_rank,
    reduced_density,
    step,
)

ALL_SCHEMES = list(Scheme)
PAPER_SCHEMES = [s for s in Scheme if s is not Scheme.GENERAL_FOUR]


def ket(n, i, j):
    v = np.zeros(n * n, dtype=complex)
    v[i * n + j] = 1.0
    return WalkState(n, v)


# --- schedule ------------------------------------------------------------------

def test_schedule_reduces_angles():
    s = PhaseSchedule("standard", -math.pi / 2, 5 * math.pi)
    assert s.theta1 == pytest.approx(1.5 * math.pi)
    assert s.theta2 == pytest.approx(math.pi)
    assert 0.0 <= s.theta1 < 2 * math.pi


def test_schedule_rejects_non_finite():
    with pytest.raises(ParameterError):
        PhaseSchedule("standard", float("inf"), 0.0)


def test_schedule_parse_aliases():
    assert PhaseSchedule("AF").scheme is Scheme.ALTERNATE_FIXED
    assert PhaseSchedule("alternate_opposite").scheme is Scheme.ALTERNATE_OPPOSITE
    with pytest.raises(ParameterError):
        PhaseSchedule("nonsense")


def test_phase_orders():
    a, b, c, d = 0.1, 0.2, 0.3, 0.4
    assert PhaseSchedule("standard", a, b).phases() == (a, b)
    assert PhaseSchedule("general-four", a, b, c, d).phases() == (d, b, c, a)
    assert PhaseSchedule("alternate-equal", a, b).phases() == (b, b, a, a)
    assert PhaseSchedule("alternate-opposite", a, b).phases() == (-b, b, -a, a)
    assert PhaseSchedule("alternate-fixed", a, b).phases() == (b, math.pi, a, math.pi)


# --- initial state and projector -------------------------------------------------

def test_initial_state_uniform(graph32):
    s = initial_state(google_matrix(graph32, 0.0))
    assert np.allclose(s.amps, 1 / 32, atol=1e-16)


def test_initial_state_formula(G6):
    n = G6.n
    s = initial_state(G6)
    for i in range(n):
        for k in range(n):
            assert s.amps[i * n + k] == pytest.approx(math.sqrt(G6.entries[k, i]) / math.sqrt(n))
    assert s.norm() == pytest.approx(1.0, abs=1e-14)


def test_basis_gram_identity():
    rng = np.random.default_rng(8)
    for n in range(2, 12):
        G = google_matrix(DirectedGraph(n, tuple(random_graph_edges(rng, n))), rng.uniform(0, 1))
        psi = dense_basis(G.entries)
        assert np.abs(psi.T @ psi - np.eye(n)).max() <= 1e-12
        assert np.allclose(basis_states(G), psi.T)


def test_pi_fixes_initial_state(G6):
    s = initial_state(G6)
    assert np.allclose(apply_pi(s, G6).amps, s.amps, atol=1e-15)


def test_pi_kills_orthogonal_state(G6):
    n = G6.n
    rng = np.random.default_rng(1)
    v = random_state(rng, n)
    P = dense_projector(G6.entries)
    perp = v - P @ v
    assert np.abs(apply_pi(WalkState(n, perp), G6).amps).max() <= 1e-15


def test_pi_idempotent_and_matches_dense(G6):
    rng = np.random.default_rng(2)
    P = dense_projector(G6.entries)
    for _ in range(5):
        s = WalkState(G6.n, random_state(rng, G6.n))
        once = apply_pi(s, G6)
        twice = apply_pi(once, G6)
        assert np.abs(twice.amps - once.amps).max() <= 1e-12
        assert np.abs(once.amps - P @ s.amps).max() <= 1e-14


def test_dimension_mismatch(G6):
    s = initial_state(google_matrix(generate_scale_free(5, 2, 0)))
    with pytest.raises(DimensionError):
        apply_pi(s, G6)
    with pytest.raises(DimensionError):
        step(s, G6, PhaseSchedule())
    with pytest.raises(DimensionError):
        WalkState(3, np.zeros(8))


# --- swap and U ------------------------------------------------------------------

def test_swap_basis_ket():
    out = apply_swap(ket(3, 0, 1))
    assert np.array_equal(out.amps, ket(3, 1, 0).amps)


def test_swap_involution_norm():
    rng = np.random.default_rng(3)
    s = WalkState(5, random_state(rng, 5))
    assert np.array_equal(apply_swap(apply_swap(s)).amps, s.amps)
    assert apply_swap(s).norm() == pytest.approx(1.0, abs=1e-15)
    assert np.array_equal(apply_swap(s).amps, dense_swap(5) @ s.amps)


def test_u_pi_is_szegedy_reflection(G6):
    rng = np.random.default_rng(4)
    s = WalkState(G6.n, random_state(rng, G6.n))
    P = dense_projector(G6.entries)
    ref = dense_swap(G6.n) @ (2 * P - np.eye(G6.n**2))
    assert np.abs(apply_u(s, G6, math.pi).amps - ref @ s.amps).max() <= 1e-14


def test_u_zero_is_minus_swap(G6):
    rng = np.random.default_rng(5)
    s = WalkState(G6.n, random_state(rng, G6.n))
    assert np.array_equal(apply_u(s, G6, 0.0).amps, -apply_swap(s).amps)


def test_u_matches_dense_and_is_unitary():
    rng = np.random.default_rng(6)
    for n in range(2, 7):
        G = google_matrix(DirectedGraph(n, tuple(random_graph_edges(rng, n))))
        for _ in range(4):
            theta = rng.uniform(0, 2 * math.pi)
            s = WalkState(n, random_state(rng, n))
            out = apply_u(s, G, theta)
            assert abs(out.norm() - 1.0) <= 1e-12
            assert np.abs(out.amps - dense_u(G.entries, theta) @ s.amps).max() <= 1e-12


# --- step ------------------------------------------------------------------------

def test_standard_zero_is_identity(G6):
    rng = np.random.default_rng(7)
    s = WalkState(G6.n, random_state(rng, G6.n))
    assert np.array_equal(step(s, G6, PhaseSchedule("standard", 0, 0)).amps, s.amps)


def test_standard_pi_pi_is_two_reflections(G6):
    s = initial_state(G6)
    manual = apply_u(apply_u(s, G6, math.pi), G6, math.pi)
    assert np.allclose(step(s, G6, PhaseSchedule("standard", math.pi, math.pi)).amps, manual.amps)


def test_alternate_fixed_pi_equals_two_standard_pi_steps():
    G = google_matrix(generate_scale_free(5, 2, 11))
    af = dense_scheme(G.entries, "alternate-fixed", math.pi, math.pi)
    std = dense_scheme(G.entries, "standard", math.pi, math.pi)
    assert np.abs(af - std @ std).max() <= 1e-12
    s = initial_state(G)
    a = step(s, G, PhaseSchedule("alternate-fixed", math.pi, math.pi))
    sched = PhaseSchedule("standard", math.pi, math.pi)
    b = step(step(s, G, sched), G, sched)
    assert np.abs(a.amps - b.amps).max() <= 1e-12


@pytest.mark.parametrize("scheme", ALL_SCHEMES, ids=lambda s: s.value)
def test_step_matches_dense_oracle(scheme):
    rng = np.random.default_rng(ALL_SCHEMES.index(scheme))
    for n in range(3, 7):
        G = google_matrix(DirectedGraph(n, tuple(random_graph_edges(rng, n))))
        for _ in range(3):
            angles = rng.uniform(0, 2 * math.pi, 4)
            sched = PhaseSchedule(scheme, *angles)
            M = dense_scheme(G.entries, scheme.value, sched.theta1, sched.theta2,
                             sched.theta1p, sched.theta2p)
            s = WalkState(n, random_state(rng, n))
            assert np.abs(step(s, G, sched).amps - M @ s.amps).max() <= 1e-11


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ALL_SCHEMES), st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4),
       st.integers(2, 7), st.integers(0, 1000))
def test_step_norm_preserved(scheme, angles, n, seed):
    G = google_matrix(generate_scale_free(n, 1, seed))
    s = initial_state(G)
    for _ in range(20):
        s = step(s, G, PhaseSchedule(scheme, *angles))
    assert abs(s.norm() - 1.0) <= 20 * 4e-13


# --- projections -----------------------------------------------------------------

def test_rank_of_basis_ket():
    r = instantaneous_rank(ket(8, 3, 5))
    assert r[5] == 1.0 and r.sum() == 1.0


def test_rank_initial_uniform(graph32):
    r = instantaneous_rank(initial_state(google_matrix(graph32, 0.0)))
    assert np.allclose(r, 1 / 32, atol=1e-16)


def test_rank_initial_is_row_sums(G6):
    r = instantaneous_rank(initial_state(G6))
    # |amp[j, i]|^2 = G[i, j] / n, summed over j
    expected = np.array([sum(G6.entries[i, j] for j in range(G6.n)) / G6.n for i in range(G6.n)])
    assert np.allclose(r, expected, atol=1e-15)


def test_reduced_density_product_state():
    n = 4
    v = np.zeros((n, n), dtype=complex)
    v[0, :] = 1 / 2
    rho = reduced_density(WalkState.from_matrix(v))
    expected = np.zeros((n, n))
    expected[0, 0] = 1.0
    assert np.allclose(rho, expected, atol=1e-15)


def test_reduced_density_max_correlated():
    n = 5
    rho = reduced_density(WalkState.from_matrix(np.eye(n) / math.sqrt(n) + 0j))
    assert np.allclose(rho, np.eye(n) / n, atol=1e-15)


def test_reduced_density_brute_force():
    rng = np.random.default_rng(9)
    for n in range(2, 7):
        psi = random_state(rng, n)
        rho = reduced_density(WalkState(n, psi))
        assert np.abs(rho - partial_trace_copy2(psi, n)).max() <= 1e-14
        assert np.abs(rho - rho.conj().T).max() <= 1e-10
        assert abs(np.trace(rho) - 1.0) <= 1e-9
        assert np.linalg.eigvalsh(rho).min() >= -1e-10


# --- evolve ----------------------------------------------------------------------

def test_evolve_zero_phase_frozen(graph32):
    G = google_matrix(graph32)
    res = evolve(G, PhaseSchedule("standard", 0, 0), T=50, dt=10)
    assert np.abs(res.rank - G.row_sums() / G.n).max() <= 1e-12


def test_evolve_parameter_errors(G6):
    with pytest.raises(ParameterError):
        evolve(G6, PhaseSchedule(), T=5, dt=6)
    with pytest.raises(ParameterError):
        evolve(G6, PhaseSchedule(), T=5, dt=0)


def test_evolve_window_matches_manual_loop(G6):
    sched = PhaseSchedule("alternate-opposite", 1.1, 2.3)
    T, dt = 12, 4
    s = initial_state(G6)
    ranks, cohs = [], []
    for t in range(T):
        s = step(s, G6, sched)
        if t >= T - dt:
            ranks.append(instantaneous_rank(s))
            rho = reduced_density(s)
            cohs.append(np.abs(rho).sum() - np.abs(np.diag(rho)).sum())
    res = evolve(G6, sched, T, dt, trace=True)
    assert np.allclose(res.rank, np.mean(ranks, axis=0), atol=1e-14)
    assert res.coherence == pytest.approx(np.mean(cohs), abs=1e-13)
    assert res.trace.shape == (T, G6.n)
    assert np.allclose(res.trace[-dt:].mean(axis=0), res.rank, atol=1e-14)


@pytest.mark.parametrize("scheme", PAPER_SCHEMES, ids=lambda s: s.value)
def test_evolve_conjugation_symmetry(scheme):
    G = google_matrix(generate_scale_free(16, 2, 4))
    t1, t2 = 0.9, 4.1
    a = evolve(G, PhaseSchedule(scheme, t1, t2), T=60, dt=20)
    b = evolve(G, PhaseSchedule(scheme, 2 * math.pi - t1, 2 * math.pi - t2), T=60, dt=20)
    assert np.abs(a.rank - b.rank).max() <= 1e-9
    assert a.coherence == pytest.approx(b.coherence, abs=1e-9)
    assert a.entanglement == pytest.approx(b.entanglement, abs=1e-9)


def test_evolve_entropy_bounds_and_rank_sum(graph32):
    G = google_matrix(graph32)
    for res in evolve_batch(G, [PhaseSchedule("standard", a, b)
                                for a, b in [(0.3, 1.2), (2.0, 5.5), (math.pi, math.pi)]],
                            T=40, dt=10, trace=True):
        assert 0.0 <= res.entanglement <= 5.0 + 1e-9
        assert abs(res.rank.sum() - 1.0) <= 1e-9
        assert np.abs(res.trace.sum(axis=1) - 1.0).max() <= 1e-10


def test_batch_equals_single(graph32):
    G = google_matrix(graph32)
    scheds = [PhaseSchedule("alternate-equal", a, b) for a, b in [(0.1, 0.2), (3.0, 1.0)]]
    batch = evolve_batch(G, scheds, T=30, dt=7)
    for sched, res in zip(scheds, batch):
        one = evolve(G, sched, T=30, dt=7)
        assert np.array_equal(one.rank, res.rank)
        assert one.coherence == res.coherence and one.entanglement == res.entanglement


def test_batch_rejects_mixed_lengths(G6):
    with pytest.raises(ParameterError):
        evolve_batch(G6, [PhaseSchedule("standard"), PhaseSchedule("alternate-fixed")], 4, 2)
