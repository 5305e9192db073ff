"""Szegedy quantum walk with arbitrary phase rotations.

The walk lives on the doubled edge space ``|i>_1 |j>_2``. A state is a
complex vector of length ``n*n`` with flat index ``i*n + j``; internally it is
handled as an ``(n, n)`` amplitude matrix ``A[i, j]`` (row = copy 1,
column = copy 2), optionally with leading batch axes.

Operators (with ``B[i, k] = sqrt(G[k, i])``):

* ``psi_i = |i> (x) sum_k B[i, k] |k>``
* ``Pi = sum_k |psi_k><psi_k|`` acts as ``A -> c[:, None] * B`` with
  ``c_i = sum_j B[i, j] A[i, j]``
* ``S`` swaps the two copies, i.e. transposes ``A``
* ``U(theta) = S((1 - e^{i theta}) Pi - 1)``

``W(a, b) = U(b) U(a)`` applies ``U(a)`` first. All schedules are flattened
into the list of phases fed to ``U`` in application order, so one schedule
step is a fixed, small number of ``O(n^2)`` updates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ParameterError
from .google import GoogleMatrix
from .metrics import entanglement_entropy, l1_coherence

TWO_PI = 2.0 * math.pi


class Scheme(str, enum.Enum):
    STANDARD = "standard"
    ALTERNATE_EQUAL = "alternate-equal"
    ALTERNATE_OPPOSITE = "alternate-opposite"
    ALTERNATE_FIXED = "alternate-fixed"
    GENERAL_FOUR = "general-four"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {"ae": "alternate-equal", "ao": "alternate-opposite", "af": "alternate-fixed"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ParameterError(f"unknown scheme {name!r}; expected one of {valid}") from None


def _reduce_angle(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"phase must be finite, got {x}")
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class PhaseSchedule:
    """Which evolution operator makes up one time step.

    ``theta1p`` and ``theta2p`` are the primed phases and only matter for
    ``Scheme.GENERAL_FOUR``. All phases are stored reduced to ``[0, 2*pi)``.
    """

    scheme: Scheme = Scheme.STANDARD
    theta1: float = 0.0
    theta2: float = 0.0
    theta1p: float = 0.0
    theta2p: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        for name in ("theta1", "theta2", "theta1p", "theta2p"):
            object.__setattr__(self, name, _reduce_angle(getattr(self, name)))

    def phases(self) -> tuple[float, ...]:
        """Phases of the ``U`` applications making up one step, in order."""
        t1, t2 = self.theta1, self.theta2
        s = self.scheme
        if s is Scheme.STANDARD:
            # W(t1, t2)
            return (t1, t2)
        if s is Scheme.ALTERNATE_EQUAL:
            # W(t1, t1) W(t2, t2)
            return (t2, t2, t1, t1)
        if s is Scheme.ALTERNATE_OPPOSITE:
            # W(-t1, t1) W(-t2, t2)
            return (-t2, t2, -t1, t1)
        if s is Scheme.ALTERNATE_FIXED:
            # W(t1, pi) W(t2, pi)
            return (t2, math.pi, t1, math.pi)
        # W(t1', t1) W(t2', t2)
        return (self.theta2p, t2, self.theta1p, t1)

    def factors(self) -> np.ndarray:
        """``1 - e^{i theta}`` for each phase in :meth:`phases`."""
        return np.array([1.0 - np.exp(1j * t) for t in self.phases()])


@dataclass(frozen=True, eq=False)
class WalkState:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != self.n * self.n:
            raise DimensionError(f"expected {self.n * self.n} amplitudes, got {amps.size}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_matrix(cls, a: np.ndarray) -> "WalkState":
        return cls(a.shape[-1], np.ascontiguousarray(a).reshape(-1))

    def matrix(self) -> np.ndarray:
        return self.amps.reshape(self.n, self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(eq=False)
class RunResult:
    """Time averages over the final window of an evolution.

    ``trace`` holds the instantaneous rank after every step (shape
    ``(T, n)``) when requested, otherwise ``None``.
    """

    rank: np.ndarray
    coherence: float
    entanglement: float
    trace: np.ndarray | None = field(default=None, repr=False)


def sqrt_columns(G: GoogleMatrix) -> np.ndarray:
    """``B[i, k] = sqrt(G[k, i])``: row ``i`` is the copy-2 part of ``psi_i``."""
    return np.ascontiguousarray(np.sqrt(G.entries).T)


def _check(s: WalkState, G: GoogleMatrix) -> None:
    if s.n != G.n:
        raise DimensionError(f"state has n={s.n}, matrix has n={G.n}")


def initial_state(G: GoogleMatrix) -> WalkState:
    return WalkState.from_matrix(sqrt_columns(G) / math.sqrt(G.n) + 0j)


def basis_states(G: GoogleMatrix) -> np.ndarray:
    """Rows are the flattened ``psi_k`` vectors, shape ``(n, n*n)``."""
    n = G.n
    B = sqrt_columns(G)
    out = np.zeros((n, n, n))
    out[np.arange(n), np.arange(n), :] = B
    return out.reshape(n, n * n)


# --- fast kernel on amplitude matrices (..., n, n) ---------------------------

def _pi(a: np.ndarray, B: np.ndarray) -> np.ndarray:
    c = np.sum(a * B, axis=-1)
    return c[..., :, None] * B


def _u(a: np.ndarray, B: np.ndarray, factor) -> np.ndarray:
    factor = np.asarray(factor)[..., None, None]
    out = factor * _pi(a, B) - a
    return np.ascontiguousarray(np.swapaxes(out, -1, -2))


def _rank(a: np.ndarray) -> np.ndarray:
    p = a.real**2 + a.imag**2
    return p.sum(axis=-2)


def _rho(a: np.ndarray) -> np.ndarray:
    return a @ np.conj(np.swapaxes(a, -1, -2))


# --- public single-state operations ------------------------------------------

def apply_pi(s: WalkState, G: GoogleMatrix) -> WalkState:
    _check(s, G)
    return WalkState.from_matrix(_pi(s.matrix(), sqrt_columns(G)))


def apply_swap(s: WalkState) -> WalkState:
    return WalkState.from_matrix(s.matrix().T)


def apply_u(s: WalkState, G: GoogleMatrix, theta: float) -> WalkState:
    _check(s, G)
    return WalkState.from_matrix(_u(s.matrix(), sqrt_columns(G), 1.0 - np.exp(1j * theta)))


def step(s: WalkState, G: GoogleMatrix, sched: PhaseSchedule) -> WalkState:
    _check(s, G)
    B = sqrt_columns(G)
    a = s.matrix()
    for f in sched.factors():
        a = _u(a, B, f)
    return WalkState.from_matrix(a)


def instantaneous_rank(s: WalkState) -> np.ndarray:
    """Probability of each node on the second copy."""
    return _rank(s.matrix())


def reduced_density(s: WalkState) -> np.ndarray:
    """Partial trace over copy 2: ``rho[a, b] = sum_j A[a, j] conj(A[b, j])``."""
    return _rho(s.matrix())


# --- evolution loop ----------------------------------------------------------

def evolve_batch(
    G: GoogleMatrix,
    schedules: Sequence[PhaseSchedule],
    T: int = 5000,
    dt: int = 500,
    trace: bool = False,
) -> list[RunResult]:
    """Evolve several schedules side by side from the same initial state.

    Every schedule must use the same number of ``U`` applications per step.
    Each state gets ``T`` steps; the state after steps ``T-dt+1 .. T`` (the
    last ``dt`` steps) is sampled for the averaged rank, coherence and
    entanglement. Each batch member is computed independently, so a
    schedule's result does not depend on its batch neighbours.
    """
    T, dt = int(T), int(dt)
    if dt < 1 or T < dt:
        raise ParameterError(f"need T >= dt >= 1, got T={T}, dt={dt}")
    if not schedules:
        return []
    factors = [s.factors() for s in schedules]
    if len({f.size for f in factors}) != 1:
        raise ParameterError("schedules in one batch must share an operator length")
    fac = np.stack(factors, axis=1)  # (ops_per_step, batch)
    nb = len(schedules)
    n = G.n
    B = sqrt_columns(G)
    a = np.broadcast_to(initial_state(G).matrix(), (nb, n, n)).copy()

    rank_sum = np.zeros((nb, n))
    coh_sum = np.zeros(nb)
    ent_sum = np.zeros(nb)
    history = np.empty((T, nb, n)) if trace else None
    start = T - dt
    for t in range(T):
        for f in fac:
            a = _u(a, B, f)
        if history is not None:
            history[t] = _rank(a)
        if t >= start:
            rank_sum += history[t] if history is not None else _rank(a)
            rho = _rho(a)
            coh_sum += l1_coherence(rho)
            ent_sum += entanglement_entropy(rho)

    results = []
    for b in range(nb):
        results.append(
            RunResult(
                rank=rank_sum[b] / dt,
                coherence=float(coh_sum[b] / dt),
                entanglement=float(ent_sum[b] / dt),
                trace=history[:, b, :].copy() if history is not None else None,
            )
        )
    return results


def evolve(
    G: GoogleMatrix, sched: PhaseSchedule, T: int = 5000, dt: int = 500, trace: bool = False
) -> RunResult:
    return evolve_batch(G, [sched], T, dt, trace)[0]
