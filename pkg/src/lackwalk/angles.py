"""Closed-form rotation angles of the reduced search operators.

Every angle is returned as an exact ``(cos, sin)`` pair evaluated from integer
ratios, with ``sin >= 0``. Which pairs are populated depends on the case:

* three-dimensional reduction (``l == 0`` and ``k == 1``) and the SKW coin:
  ``theta`` is the rotation of the unmarked coin block and ``phi`` is the
  eigenphase ``e^{+-i phi}`` that drives the search; ``alpha`` is unset.
* flip coin in four dimensions: ``theta`` rotates the marked block, ``phi``
  the unmarked block, and ``alpha`` is the eigenphase, with
  ``cos(alpha) = (cos(theta) + cos(phi)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .instance import CoinKind, SearchInstance


@dataclass(frozen=True)
class AngleSet:
    cos_theta: float
    sin_theta: float
    cos_phi: float
    sin_phi: float
    cos_alpha: Optional[float] = None
    sin_alpha: Optional[float] = None

    @property
    def theta(self) -> float:
        return math.atan2(self.sin_theta, self.cos_theta)

    @property
    def phi(self) -> float:
        return math.atan2(self.sin_phi, self.cos_phi)

    @property
    def alpha(self) -> Optional[float]:
        if self.cos_alpha is None:
            return None
        return math.atan2(self.sin_alpha, self.cos_alpha)

    def pairs(self) -> dict[str, tuple[float, float]]:
        out = {"theta": (self.cos_theta, self.sin_theta), "phi": (self.cos_phi, self.sin_phi)}
        if self.cos_alpha is not None:
            out["alpha"] = (self.cos_alpha, self.sin_alpha)
        return out

    def as_dict(self) -> dict[str, Optional[float]]:
        return {
            "cos_theta": self.cos_theta,
            "sin_theta": self.sin_theta,
            "cos_phi": self.cos_phi,
            "sin_phi": self.sin_phi,
            "cos_alpha": self.cos_alpha,
            "sin_alpha": self.sin_alpha,
        }


def is_three_dimensional(instance: SearchInstance) -> bool:
    """The reduced basis drops ``|aa>`` only when it is empty (``l == 0``, ``k == 1``)."""
    return instance.l == 0 and instance.k == 1


def _skw_block(N: int, l: int, k: int) -> tuple[float, float, float, float]:
    d = N + l - 1
    cos_t = (N - 2 * k + l - 1) / d
    sin_t = 2.0 * math.sqrt(k * (N - k + l - 1)) / d
    # eigenphase: cos = (1 + cos_t) / 2, sin = sqrt((1 - cos_t)(3 + cos_t)) / 2
    cos_e = (d - k) / d
    sin_e = math.sqrt(k * (2 * d - k)) / d
    return cos_t, sin_t, cos_e, sin_e


def angles(instance: SearchInstance) -> AngleSet:
    N, l, k = instance.N, instance.l, instance.k
    if is_three_dimensional(instance) or instance.coin is CoinKind.SKW:
        return AngleSet(*_skw_block(N, l, k))

    d = N + l - 1
    return AngleSet(
        cos_theta=(N - 2 * k - l + 1) / d,
        sin_theta=2.0 * math.sqrt((N - k) * (k + l - 1)) / d,
        cos_phi=(N - 2 * k + l - 1) / d,
        sin_phi=2.0 * math.sqrt(k * (N - k + l - 1)) / d,
        cos_alpha=(N - 2 * k) / d,
        sin_alpha=math.sqrt((2 * N - 2 * k + l - 1) * (2 * k + l - 1)) / d,
    )
