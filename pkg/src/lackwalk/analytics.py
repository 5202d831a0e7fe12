"""Closed-form runtimes, peak probabilities, eigensystems and regimes.

:func:`predict` evaluates exact finite-``N`` expressions only.
Large-``N`` scaling forms live in :func:`asymptotic_prediction`, and the
caller must name the scaling branch explicitly, because a single ``(N, l)``
pair does not determine whether ``l`` grows like ``o(N)``, ``cN`` or
``omega(N)``. :func:`classify_regime` gives a labelled finite-``N`` guess.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .angles import AngleSet, angles, is_three_dimensional
from .ctqw import build_hamiltonian
from .instance import CoinKind, SearchInstance, WalkKind, validate
from .subspace import SubspaceOperator, build_operator

__all__ = [
    "AngleSet",
    "Branch",
    "EigenSystem",
    "Prediction",
    "RegimeClassification",
    "Speedup",
    "angles",
    "asymptotic_prediction",
    "classify_regime",
    "eigen_system",
    "flip_peak_probability",
    "predict",
]


class Branch(str, enum.Enum):
    SUBLINEAR = "sublinear-loops"  # l = o(N)
    PROPORTIONAL = "proportional-loops"  # l = cN
    SUPERLINEAR = "superlinear-loops"  # l = omega(N)


class Speedup(str, enum.Enum):
    GROVER = "grover"
    SUB_CLASSICAL = "sub-classical-speedup"
    NONE = "no-speedup"


@dataclass(frozen=True)
class RegimeClassification:
    branch: Branch
    speedup: Speedup
    c: Optional[float] = None
    heuristic: bool = True
    rule: str = ""

    def as_dict(self) -> dict:
        return {
            "branch": self.branch.value,
            "speedup": self.speedup.value,
            "c": self.c,
            "heuristic": self.heuristic,
            "rule": self.rule,
        }


@dataclass(frozen=True)
class Prediction:
    runtime: float
    peak_probability: float
    phase_gap: float
    regime: RegimeClassification
    angles: Optional[AngleSet] = None
    eigenvalues: Optional[tuple[float, float]] = None
    initial_loop_probability: Optional[float] = None
    asymptotic: bool = False

    def as_dict(self) -> dict:
        return {
            "runtime": self.runtime,
            "peak_probability": self.peak_probability,
            "phase_gap": self.phase_gap,
            "regime": self.regime.as_dict(),
            "angles": None if self.angles is None else self.angles.as_dict(),
            "eigenvalues": None if self.eigenvalues is None else list(self.eigenvalues),
            "initial_loop_probability": self.initial_loop_probability,
            "asymptotic": self.asymptotic,
        }


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs ``(lambda, v)`` of a reduced operator, vectors normalised."""

    pairs: list[tuple[complex, np.ndarray]]
    source: str = "closed-form"

    def residuals(self, op: SubspaceOperator) -> list[float]:
        return [float(np.linalg.norm(op.entries @ v - lam * v)) for lam, v in self.pairs]

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "pairs": [
                {
                    "eigenvalue": [lam.real, lam.imag],
                    "eigenvector": [[z.real, z.imag] for z in v],
                }
                for lam, v in self.pairs
            ],
        }


# --- regime ---------------------------------------------------------------


def classify_regime(
    instance: SearchInstance, c_hint: Optional[float] = None, walk: WalkKind = WalkKind.DISCRETE_SUBSPACE
) -> RegimeClassification:
    """Finite-``N`` heuristic for the loop-scaling branch and the resulting speedup.

    Branch: ``PROPORTIONAL`` with ``c = c_hint`` when a hint is given. Otherwise
    ``SUBLINEAR`` if ``l < N/log2 N``, ``SUPERLINEAR`` if ``l > N log2 N``, else
    ``PROPORTIONAL`` with ``c = l/N``.

    Speedup: a continuous-time walk is always Grover. The flip coin is Grover
    when ``l <= log2 N`` (bounded loops) within the sublinear branch,
    sub-classical for other sublinear ``l``, and none from ``l = Omega(N)`` on.
    The SKW coin is Grover for ``l = O(N)`` (sublinear or proportional),
    sub-classical for superlinear ``l < N^2/log2 N``, and none beyond.
    """
    N, l = instance.N, instance.l
    lg = math.log2(N)
    if c_hint is not None:
        branch, c = Branch.PROPORTIONAL, float(c_hint)
    elif l < N / lg:
        branch, c = Branch.SUBLINEAR, None
    elif l > N * lg:
        branch, c = Branch.SUPERLINEAR, None
    else:
        branch, c = Branch.PROPORTIONAL, l / N
    rule = "heuristic: l < N/log2(N) sublinear, l > N*log2(N) superlinear, else l = cN"

    if walk.continuous:
        speedup = Speedup.GROVER
    elif instance.coin is CoinKind.FLIP and not is_three_dimensional(instance):
        if branch is Branch.SUBLINEAR:
            speedup = Speedup.GROVER if l <= lg else Speedup.SUB_CLASSICAL
        else:
            speedup = Speedup.NONE
    else:
        if branch is not Branch.SUPERLINEAR:
            speedup = Speedup.GROVER
        elif l < N * N / lg:
            speedup = Speedup.SUB_CLASSICAL
        else:
            speedup = Speedup.NONE
    return RegimeClassification(branch, speedup, c, True, rule)


# --- exact predictions ------------------------------------------------------


def flip_peak_probability(instance: SearchInstance) -> float:
    """Unclamped peak probability of the flip-coin walk in four dimensions."""
    N, l, k = instance.N, instance.l, instance.k
    num = k * (16 * N * (k + l - 1) + 9 * (l - 1) ** 2 - 4 * k * (l - 1) - 12 * k * k)
    den = 4 * (2 * k + l - 1) ** 2 * (N - k + l - 1)
    return num / den


def _two_level_transfer(H: np.ndarray, psi0: np.ndarray) -> float:
    """Probability in the first component after half a period of ``H``.

    ``H - tr(H)/2`` is ``(gap/2) n.sigma``. Half a period rotates the Bloch
    vector ``r`` by ``pi`` about ``n``, giving ``2 (n.r) n - r``.
    """
    delta = 0.5 * (H[0, 0] - H[1, 1])
    h = H[0, 1]
    half_gap = math.hypot(delta, h)
    n = np.array([h, 0.0, delta]) / half_gap
    x, y = psi0.real
    r = np.array([2 * x * y, 0.0, x * x - y * y])
    rz = 2.0 * float(n @ r) * n[2] - r[2]
    return 0.5 * (1.0 + rz)


def predict(
    instance: SearchInstance, walk: WalkKind = WalkKind.DISCRETE_SUBSPACE, gamma: Optional[float] = None
) -> Prediction:
    validate(instance)
    regime = classify_regime(instance, walk=walk)
    if walk.continuous:
        model = build_hamiltonian(instance, gamma)
        gap = model.gap
        p = _two_level_transfer(model.hamiltonian2d, model.initial_state())
        return Prediction(
            runtime=math.pi / gap,
            peak_probability=min(1.0, max(0.0, p)),
            phase_gap=gap,
            regime=regime,
            eigenvalues=model.eigenvalues,
        )

    a = angles(instance)
    if instance.coin is CoinKind.FLIP and not is_three_dimensional(instance):
        alpha = a.alpha
        return Prediction(
            runtime=math.pi / alpha,
            peak_probability=min(1.0, max(0.0, flip_peak_probability(instance))),
            phase_gap=alpha,
            regime=regime,
            angles=a,
        )

    N, l, k = instance.N, instance.l, instance.k
    phi = a.phi
    loop_p = None if is_three_dimensional(instance) else k * (k + l - 1) / (N * (N + l - 1))
    return Prediction(
        runtime=math.pi / (2.0 * phi),
        peak_probability=0.5,
        phase_gap=2.0 * phi,
        regime=regime,
        angles=a,
        initial_loop_probability=loop_p,
    )


def asymptotic_prediction(
    instance: SearchInstance,
    branch: Branch,
    c: Optional[float] = None,
    walk: WalkKind = WalkKind.DISCRETE_SUBSPACE,
) -> Prediction:
    """Large-``N`` runtime and peak for an explicitly named scaling branch.

    ``c`` defaults to ``l / N`` for the proportional branch.
    """
    validate(instance)
    branch = Branch(branch)
    N, l, k = instance.N, instance.l, instance.k
    if branch is Branch.PROPORTIONAL and c is None:
        c = l / N
    regime = RegimeClassification(branch, classify_regime(instance, c, walk).speedup, c, False, "caller-supplied branch")

    if walk.continuous:
        t, p = math.pi * math.sqrt(N) / (2.0 * math.sqrt(k)), 1.0
    elif instance.coin is CoinKind.FLIP and not is_three_dimensional(instance):
        if branch is Branch.SUBLINEAR:
            t = math.pi * math.sqrt(N) / math.sqrt(2.0 * (2 * k + l - 1))
            p = 4.0 * k * (k + l - 1) / (2 * k + l - 1) ** 2
        elif branch is Branch.PROPORTIONAL:
            t = math.pi / math.asin(math.sqrt(c * (c + 2)) / (c + 1))
            p = (16.0 + 9.0 * c) / (4.0 * c * (c + 1)) * k / N
        else:
            t, p = 2.0, 9.0 * k / (4.0 * l)
    else:
        scale = math.pi / (2.0 * math.sqrt(2.0 * k))
        if branch is Branch.SUBLINEAR:
            t = scale * math.sqrt(N)
        elif branch is Branch.PROPORTIONAL:
            t = scale * math.sqrt(c + 1) * math.sqrt(N)
        else:
            t = scale * math.sqrt(l)
        p = 0.5
    return Prediction(
        runtime=t,
        peak_probability=min(1.0, max(0.0, p)),
        phase_gap=math.pi / t,
        regime=regime,
        asymptotic=True,
    )


# --- eigensystems -----------------------------------------------------------


def _normalise(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def _three_dim_pairs(c: float, phi: float) -> list[tuple[complex, np.ndarray]]:
    r = math.sqrt(1 - c)
    q = math.sqrt(3 + c)
    p = math.sqrt(1 + c)
    plus = [(r - 1j * q) / (2 * p), (r + 1j * q) / (2 * p), 1.0]
    minus = [(r + 1j * q) / (2 * p), (r - 1j * q) / (2 * p), 1.0]
    m1 = [-p / r, -p / r, 1.0]
    return [
        (complex(math.cos(phi), math.sin(phi)), _normalise(plus)),
        (complex(math.cos(phi), -math.sin(phi)), _normalise(minus)),
        (-1.0 + 0j, _normalise(m1)),
    ]


def _flip_pairs(a: AngleSet) -> list[tuple[complex, np.ndarray]]:
    ct, st, cp, sp, ca, sa = a.cos_theta, a.sin_theta, a.cos_phi, a.sin_phi, a.cos_alpha, a.sin_alpha
    g = (1 + cp) / sp
    v_m1 = [-(st / (1 + ct)) * g, -g, -g, 1.0]
    v_p1 = [-((1 + ct) / st) / g, 1 / g, 1 / g, 1.0]
    re = (ct - cp) / (2 * sp)
    im = sa / sp
    v_ma = [st / sp, re + 1j * im, re - 1j * im, 1.0]
    v_pa = [st / sp, re - 1j * im, re + 1j * im, 1.0]
    return [
        (-1.0 + 0j, _normalise(v_m1)),
        (1.0 + 0j, _normalise(v_p1)),
        (complex(ca, -sa), _normalise(v_ma)),
        (complex(ca, sa), _normalise(v_pa)),
    ]


def _numerical_pairs(op: SubspaceOperator) -> list[tuple[complex, np.ndarray]]:
    evals, evecs = np.linalg.eig(op.entries)
    return [(complex(evals[i]), _normalise(evecs[:, i])) for i in range(len(evals))]


def eigen_system(instance: SearchInstance) -> EigenSystem:
    """Eigenpairs of the reduced discrete-time operator.

    Closed forms are used whenever their denominators are nonzero. Otherwise,
    e.g. ``k = N - 1`` with ``l = 0``, where ``|bb>`` is empty, the pairs
    come from a numerical eigendecomposition.
    """
    validate(instance)
    a = angles(instance)
    try:
        if is_three_dimensional(instance):
            return EigenSystem(_three_dim_pairs(a.cos_theta, a.phi))
        if instance.coin is CoinKind.SKW:
            pairs = [(-1.0 + 0j, np.array([1, 0, 0, 0], dtype=complex))]
            for lam, v in _three_dim_pairs(a.cos_theta, a.phi):
                pairs.append((lam, np.concatenate([[0.0], v]).astype(complex)))
            return EigenSystem(pairs)
        return EigenSystem(_flip_pairs(a))
    except ZeroDivisionError:
        return EigenSystem(_numerical_pairs(build_operator(instance)), source="numerical")
