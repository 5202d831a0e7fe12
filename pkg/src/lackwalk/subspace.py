"""Exact evolution in the reduced invariant subspace.

By symmetry of the complete graph the coined walk never leaves the span of
four uniform superpositions:

``|aa>``  marked vertices pointing at a marked vertex or along a self-loop,
``|ab>``  marked vertices pointing at unmarked vertices,
``|ba>``  unmarked vertices pointing at marked vertices,
``|bb>``  unmarked vertices pointing at unmarked vertices or along a loop.

``|aa>`` is empty when ``l == 0`` and ``k == 1``, leaving the three-dimensional
basis ``{|ab>, |ba>, |bb>}``. For ``k > 1``, ``|aa>`` also collects the
``k - 1`` marked-to-marked edges, so its initial amplitude is
``sqrt(k (k + l - 1))``.

The ``1/sqrt(l)`` normalisation on ``|aa>`` is taken to be the uniform
superposition over ``l`` distinct loop directions. The full-space engine
realises exactly this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .angles import AngleSet, angles, is_three_dimensional
from .errors import DimensionMismatch, DomainError
from .instance import CoinKind, SearchInstance, validate
from .trace import EvolutionTrace

BASIS_3D = ("ab", "ba", "bb")
BASIS_4D = ("aa", "ab", "ba", "bb")


@dataclass(frozen=True)
class SubspaceBasis:
    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def marked_indices(self) -> tuple[int, ...]:
        """Components whose vertex is marked (first letter ``a``)."""
        return tuple(i for i, lab in enumerate(self.labels) if lab[0] == "a")

    @classmethod
    def for_instance(cls, instance: SearchInstance) -> "SubspaceBasis":
        return cls(BASIS_3D if is_three_dimensional(instance) else BASIS_4D)


@dataclass(frozen=True)
class SubspaceOperator:
    entries: np.ndarray
    basis: SubspaceBasis
    angles: AngleSet

    @property
    def dim(self) -> int:
        return self.basis.dim

    def unitarity_error(self) -> float:
        U = self.entries
        return float(np.max(np.abs(U.conj().T @ U - np.eye(self.dim))))


@dataclass(frozen=True)
class SubspaceState:
    amplitudes: np.ndarray
    basis: SubspaceBasis
    step: int = 0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def subspace_sizes(instance: SearchInstance) -> tuple[int, ...]:
    """Number of (vertex, direction) pairs behind each basis vector."""
    N, l, k = instance.N, instance.l, instance.k
    ab = k * (N - k)
    bb = (N - k) * (N - k + l - 1)
    if is_three_dimensional(instance):
        return (ab, ab, bb)
    return (k * (k + l - 1), ab, ab, bb)


def initial_state(instance: SearchInstance) -> SubspaceState:
    """Uniform superposition over all vertex/direction pairs, in reduced form."""
    validate(instance)
    total = instance.N * instance.degree
    amps = np.sqrt(np.array(subspace_sizes(instance), dtype=float) / total)
    return SubspaceState(amps.astype(complex), SubspaceBasis.for_instance(instance), 0)


def build_operator(instance: SearchInstance) -> SubspaceOperator:
    """One application of the search operator, coin then flip-flop shift."""
    validate(instance)
    a = angles(instance)
    basis = SubspaceBasis.for_instance(instance)

    if is_three_dimensional(instance):
        ct, st = a.cos_theta, a.sin_theta
        U = np.array([
            [0.0, -ct, st],
            [-1.0, 0.0, 0.0],
            [0.0, st, ct],
        ])
    elif instance.coin is CoinKind.FLIP:
        ct, st, cp, sp = a.cos_theta, a.sin_theta, a.cos_phi, a.sin_phi
        U = np.array([
            [ct, -st, 0.0, 0.0],
            [0.0, 0.0, -cp, sp],
            [-st, -ct, 0.0, 0.0],
            [0.0, 0.0, sp, cp],
        ])
    else:
        ct, st = a.cos_theta, a.sin_theta
        U = np.array([
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -ct, st],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, st, ct],
        ])
    return SubspaceOperator(U, basis, a)


def step(state: SubspaceState, op: SubspaceOperator) -> SubspaceState:
    if state.basis != op.basis or state.amplitudes.shape != (op.dim,):
        raise DimensionMismatch(
            f"state basis {state.basis.labels} does not match operator basis {op.basis.labels}"
        )
    return SubspaceState(op.entries @ state.amplitudes, state.basis, state.step + 1)


def success_probability(state: SubspaceState) -> float:
    """Probability of measuring a marked vertex, summed over its coin directions."""
    amps = state.amplitudes[list(state.basis.marked_indices)]
    return float(np.sum(np.abs(amps) ** 2))


def default_max_steps(instance: SearchInstance) -> int:
    """``ceil(4 t)`` for the predicted runtime ``t``."""
    from .analytics import predict

    return max(1, math.ceil(4.0 * predict(instance).runtime))


def evolve(instance: SearchInstance, max_steps: Optional[int] = None) -> EvolutionTrace:
    """Success probability at every step ``0..max_steps``."""
    if max_steps is None:
        max_steps = default_max_steps(instance)
    if max_steps < 1:
        raise DomainError(f"max_steps must be >= 1, got {max_steps}")
    op = build_operator(instance)
    state = initial_state(instance)
    probs = np.empty(max_steps + 1)
    probs[0] = success_probability(state)
    for t in range(1, max_steps + 1):
        state = step(state, op)
        probs[t] = success_probability(state)
    return EvolutionTrace(np.arange(max_steps + 1), probs)
