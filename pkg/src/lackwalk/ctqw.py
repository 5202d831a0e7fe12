"""Continuous-time walk search, ``H = -gamma A - sum_w |w><w|``.

The adjacency matrix of the complete graph with ``l`` self-loops has
``A_ij = 1`` off the diagonal and ``A_ii = l``. Setting
``loops_count_twice`` uses ``A_ii = 2 l`` instead. Either way the loops add a
multiple of the identity, which only shifts the energy zero.

The reduced model works in ``{|a>, |b>}``, the normalised uniform
superpositions over marked and over unmarked vertices. Both engines
diagonalise ``H`` exactly and never time-step an ODE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityExceeded, DomainError
from .instance import SearchInstance, validate
from .trace import CtqwTrace

FULL_MAX_N = 512


def critical_gamma(instance: SearchInstance) -> float:
    return 1.0 / instance.N


@dataclass(frozen=True)
class CtqwModel:
    instance: SearchInstance
    gamma: float
    hamiltonian2d: np.ndarray
    eigenvalues: tuple[float, float]  # (E-, E+), ascending
    loops_count_twice: bool = False

    @property
    def gap(self) -> float:
        return self.eigenvalues[1] - self.eigenvalues[0]

    def initial_state(self) -> np.ndarray:
        N, k = self.instance.N, self.instance.k
        return np.array([math.sqrt(k / N), math.sqrt((N - k) / N)], dtype=complex)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise DomainError(f"gamma must be positive and finite, got {gamma}")
    return gamma


def _check_times(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a non-empty 1-D sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be sorted and non-negative")
    return times


def build_hamiltonian(
    instance: SearchInstance, gamma: Optional[float] = None, loops_count_twice: bool = False
) -> CtqwModel:
    validate(instance)
    gamma = critical_gamma(instance) if gamma is None else _check_gamma(gamma)
    N, k = instance.N, instance.k
    loop = (2 if loops_count_twice else 1) * instance.l
    off = math.sqrt(k * (N - k))
    H = -gamma * np.array([
        [1.0 / gamma + (k - 1) + loop, off],
        [off, (N - k - 1) + loop],
    ])
    evals = np.linalg.eigvalsh(H)
    return CtqwModel(instance, gamma, H, (float(evals[0]), float(evals[1])), loops_count_twice)


def _evolve_eigh(H: np.ndarray, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """States ``exp(-iHt) psi0`` for each time, one per row."""
    evals, evecs = np.linalg.eigh(H)
    coeffs = evecs.conj().T @ psi0
    phases = np.exp(-1j * np.outer(times, evals))
    return (phases * coeffs) @ evecs.T


def ctqw_states(model: CtqwModel, times: Sequence[float]) -> np.ndarray:
    return _evolve_eigh(model.hamiltonian2d, model.initial_state(), _check_times(times))


def ctqw_evolve(model: CtqwModel, times: Sequence[float]) -> CtqwTrace:
    times = _check_times(times)
    states = ctqw_states(model, times)
    return CtqwTrace(times, np.abs(states[:, 0]) ** 2)


def full_hamiltonian(
    instance: SearchInstance, gamma: Optional[float] = None, loops_count_twice: bool = False
) -> np.ndarray:
    validate(instance)
    N = instance.N
    if N > FULL_MAX_N:
        raise CapacityExceeded(f"full CTQW supports N <= {FULL_MAX_N}, got {N}")
    gamma = critical_gamma(instance) if gamma is None else _check_gamma(gamma)
    A = np.ones((N, N)) - np.eye(N)
    A[np.diag_indices(N)] = (2 if loops_count_twice else 1) * instance.l
    H = -gamma * A
    H[np.arange(instance.k), np.arange(instance.k)] -= 1.0
    return H


def ctqw_full_evolve(
    instance: SearchInstance,
    gamma: Optional[float],
    times: Sequence[float],
    loops_count_twice: bool = False,
) -> CtqwTrace:
    times = _check_times(times)
    H = full_hamiltonian(instance, gamma, loops_count_twice)
    N = instance.N
    psi0 = np.full(N, 1.0 / math.sqrt(N), dtype=complex)
    states = _evolve_eigh(H, psi0, times)
    probs = np.sum(np.abs(states[:, : instance.k]) ** 2, axis=1)
    return CtqwTrace(times, probs)


def loop_invariance_check(instance: SearchInstance, gamma: Optional[float], times: Sequence[float]) -> float:
    """Max over ``times`` of ``|p_l(t) - p_0(t)|`` in the reduced model."""
    with_loops = ctqw_evolve(build_hamiltonian(instance, gamma), times)
    if instance.l == 0:
        return 0.0
    without = ctqw_evolve(build_hamiltonian(instance.with_loops(0), gamma), times)
    return float(np.max(np.abs(with_loops.probabilities - without.probabilities)))


def default_times(instance: SearchInstance, gamma: Optional[float] = None, samples: int = 1000) -> np.ndarray:
    """Uniform grid on ``[0, 2 pi / gap]``, two predicted runtimes."""
    model = build_hamiltonian(instance, gamma)
    return np.linspace(0.0, 2.0 * math.pi / model.gap, samples)
