"""Coined walk on the full vertex-by-coin space.

This engine is an independent oracle for the reduced evolution. Amplitudes are
stored as an ``(N, d)`` array with ``d = N - 1 + l``, flattened row-major, so
``(v, j)`` sits at index ``v * d + j`` (vertices and directions zero-based).
Direction ``j < N - 1`` at vertex ``v`` points at vertex ``j`` if ``j < v``
and at ``j + 1`` otherwise. Directions ``N - 1 .. d - 1`` are the ``l``
self-loops. The marked vertices are ``0 .. k - 1``.

The operator is never materialised. A step applies the per-vertex coin as a
rank-one update ``2 mean(psi_v) - psi_v`` and then the flip-flop shift. The
shift is a transpose of the ``N x N`` edge-amplitude matrix, and loops stay
fixed. Each step writes a fresh output array, so results do not depend on
evaluation order. Probabilities are summed over marked vertices in ascending
order, then over their directions in ascending order.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityExceeded, DomainError
from .instance import CoinKind, SearchInstance, validate
from .trace import EvolutionTrace

DEFAULT_MAX_AMPLITUDES = 2**24
MAX_AMPLITUDES_ENV = "LACKWALK_MAX_AMPLITUDES"
GROVER_CHECK_MAX_N = 512


def max_amplitudes() -> int:
    raw = os.environ.get(MAX_AMPLITUDES_ENV)
    if raw is None:
        return DEFAULT_MAX_AMPLITUDES
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{MAX_AMPLITUDES_ENV} must be an integer, got {raw!r}") from None


def check_capacity(size: int, what: str = "full-space state") -> None:
    cap = max_amplitudes()
    if size > cap:
        raise CapacityExceeded(f"{what} needs {size} amplitudes, cap is {cap} (set {MAX_AMPLITUDES_ENV})")


@dataclass(frozen=True)
class FullState:
    amplitudes: np.ndarray
    instance: SearchInstance
    step: int = 0

    def as_matrix(self) -> np.ndarray:
        """View as ``(N, d)``: one row per vertex, one column per direction."""
        return self.amplitudes.reshape(self.instance.N, self.instance.degree)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@functools.lru_cache(maxsize=16)
def _off_diagonal(N: int) -> np.ndarray:
    mask = ~np.eye(N, dtype=bool)
    mask.setflags(write=False)
    return mask


def neighbour_of(v: int, j: int) -> int:
    """Vertex that direction ``j`` at vertex ``v`` points to (edge directions only)."""
    return j if j < v else j + 1


def direction_to(v: int, u: int) -> int:
    """Direction index at ``v`` of the edge towards ``u != v``."""
    return u if u < v else u - 1


def full_initial_state(instance: SearchInstance) -> FullState:
    validate(instance)
    size = instance.N * instance.degree
    check_capacity(size)
    return FullState(np.full(size, 1.0 / math.sqrt(size), dtype=complex), instance, 0)


def apply_coin(amps: np.ndarray, instance: SearchInstance, marked: bool = True) -> np.ndarray:
    """Grover diffusion on every vertex; marked vertices get the instance's coin.

    With ``marked=False`` every vertex uses the diffusion coin (the unperturbed walk).
    """
    out = 2.0 * amps.mean(axis=1, keepdims=True) - amps
    if marked:
        k = instance.k
        if instance.coin is CoinKind.FLIP:
            out[:k] = -out[:k]
        else:
            out[:k] = -amps[:k]
    return out


def apply_shift(amps: np.ndarray) -> np.ndarray:
    """Flip-flop shift: ``(v, -> u)`` goes to ``(u, -> v)``; loop directions fixed."""
    N = amps.shape[0]
    mask = _off_diagonal(N)
    out = np.empty_like(amps)
    edges = np.zeros((N, N), dtype=amps.dtype)
    edges[mask] = amps[:, : N - 1].ravel()
    out[:, : N - 1] = edges.T[mask].reshape(N, N - 1)
    out[:, N - 1 :] = amps[:, N - 1 :]
    return out


def full_step(state: FullState, instance: Optional[SearchInstance] = None, marked: bool = True) -> FullState:
    instance = state.instance if instance is None else instance
    if instance.N * instance.degree != state.amplitudes.size:
        raise DomainError("state layout does not match instance")
    amps = state.amplitudes.reshape(instance.N, instance.degree)
    new = apply_shift(apply_coin(amps, instance, marked))
    return FullState(new.ravel(), instance, state.step + 1)


def full_success_probability(state: FullState, instance: Optional[SearchInstance] = None) -> float:
    instance = state.instance if instance is None else instance
    block = state.amplitudes.reshape(instance.N, instance.degree)[: instance.k]
    return float(np.sum(np.abs(block) ** 2))


def full_evolve(instance: SearchInstance, max_steps: int) -> EvolutionTrace:
    if max_steps < 1:
        raise DomainError(f"max_steps must be >= 1, got {max_steps}")
    state = full_initial_state(instance)
    probs = np.empty(max_steps + 1)
    probs[0] = full_success_probability(state)
    for t in range(1, max_steps + 1):
        state = full_step(state)
        probs[t] = full_success_probability(state)
    return EvolutionTrace(np.arange(max_steps + 1), probs)


def subspace_basis_vectors(instance: SearchInstance) -> np.ndarray:
    """Reduced basis vectors embedded in the full space, one per row.

    Rows follow the reduced basis order. A basis vector backed by no
    (vertex, direction) pair is left as zeros.
    """
    from .subspace import SubspaceBasis

    validate(instance)
    N, d, k = instance.N, instance.degree, instance.k
    check_capacity(N * d)
    marked_vertex = np.zeros(N, dtype=bool)
    marked_vertex[:k] = True

    target_marked = np.zeros((N, d), dtype=bool)
    for v in range(N):
        targets = np.array([neighbour_of(v, j) for j in range(N - 1)], dtype=int)
        target_marked[v, : N - 1] = marked_vertex[targets]
    is_loop = np.zeros((N, d), dtype=bool)
    is_loop[:, N - 1 :] = True
    src = np.broadcast_to(marked_vertex[:, None], (N, d))

    masks = {
        "aa": src & (target_marked | is_loop),
        "ab": src & ~target_marked & ~is_loop,
        "ba": ~src & target_marked,
        "bb": ~src & (~target_marked | is_loop),
    }
    labels = SubspaceBasis.for_instance(instance).labels
    out = np.zeros((len(labels), N * d), dtype=complex)
    for row, lab in enumerate(labels):
        m = masks[lab].ravel()
        if m.any():
            out[row, m] = 1.0 / math.sqrt(m.sum())
    return out


def grover_equivalence_check(N: int, T: Optional[int] = None) -> float:
    """Max deviation between ``U^{2t} psi0`` and the tensor product of Grover iterates.

    Uses ``l = 1``, ``k = 1`` and the flip coin. Coin direction ``-> u`` at
    vertex ``v`` is identified with ``|u>``, and the loop with ``|v>``, which
    makes coin and vertex spaces both ``N``-dimensional. Two walk steps then
    equal ``(R_s R_w)|s> (x) (R_w R_s)|s>`` after ``t`` iterations, where
    ``R_s = 2|s><s| - I`` and ``R_w = I - 2|w><w|``. Checked for
    ``t = 1..T`` with ``T = ceil(pi sqrt(N) / 2)`` by default; ``T = 0``
    compares the initial states only.
    """
    if N > GROVER_CHECK_MAX_N:
        raise CapacityExceeded(f"grover_equivalence_check supports N <= {GROVER_CHECK_MAX_N}, got {N}")
    instance = validate(SearchInstance(N, 1, 1, CoinKind.FLIP))
    if T is None:
        T = math.ceil(math.pi * math.sqrt(N) / 2)

    # column index in the N x N tensor picture for each (v, j)
    cols = np.empty((N, N), dtype=int)
    for v in range(N):
        cols[v, : N - 1] = [neighbour_of(v, j) for j in range(N - 1)]
        cols[v, N - 1] = v
    rows = np.repeat(np.arange(N)[:, None], N, axis=1)

    def reflect_s(x):
        return 2.0 * x.mean() - x

    def reflect_w(x):
        y = x.copy()
        y[0] = -y[0]
        return y

    s = np.full(N, 1.0 / math.sqrt(N), dtype=complex)
    left, right = s.copy(), s.copy()
    state = full_initial_state(instance)

    def deviation(st, x, y):
        tensor = np.zeros((N, N), dtype=complex)
        tensor[rows, cols] = st.as_matrix()
        return float(np.max(np.abs(tensor - np.outer(x, y))))

    worst = deviation(state, left, right)
    for _ in range(T):
        state = full_step(full_step(state))
        left = reflect_s(reflect_w(left))
        right = reflect_w(reflect_s(right))
        worst = max(worst, deviation(state, left, right))
    return worst
