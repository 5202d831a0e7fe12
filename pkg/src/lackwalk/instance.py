"""Search-problem parameters shared by every engine.

A :class:`SearchInstance` fixes the complete graph size ``N``, the number of
self-loops per vertex ``l``, the number of marked vertices ``k`` and the coin
applied at marked vertices. Because the complete graph is vertex-transitive,
only the *count* of marked vertices matters; full-space engines mark the
first ``k`` vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError


class CoinKind(str, enum.Enum):
    """Coin applied at marked vertices.

    ``FLIP`` is the negated Grover diffusion coin ``-C0``; ``SKW`` is ``-I``.
    """

    FLIP = "flip"
    SKW = "skw"


class WalkKind(str, enum.Enum):
    DISCRETE_SUBSPACE = "discrete-subspace"
    DISCRETE_FULL = "discrete-full"
    CONTINUOUS_SUBSPACE = "continuous-subspace"
    CONTINUOUS_FULL = "continuous-full"

    @property
    def continuous(self) -> bool:
        return self in (WalkKind.CONTINUOUS_SUBSPACE, WalkKind.CONTINUOUS_FULL)

    @property
    def full(self) -> bool:
        return self in (WalkKind.DISCRETE_FULL, WalkKind.CONTINUOUS_FULL)

    @classmethod
    def from_flags(cls, walk: str, engine: str) -> "WalkKind":
        """Map the CLI pair (``discrete|ctqw``, ``subspace|full``) to a variant."""
        table = {
            ("discrete", "subspace"): cls.DISCRETE_SUBSPACE,
            ("discrete", "full"): cls.DISCRETE_FULL,
            ("ctqw", "subspace"): cls.CONTINUOUS_SUBSPACE,
            ("ctqw", "full"): cls.CONTINUOUS_FULL,
        }
        try:
            return table[(walk, engine)]
        except KeyError:
            raise DomainError(f"unknown walk/engine pair: {walk!r}/{engine!r}") from None


@dataclass(frozen=True)
class SearchInstance:
    """Parameters of one search problem.

    Construct through :func:`make_instance` (or call :func:`validate`) to get
    the bounds checked; the dataclass itself performs no validation so that
    invalid combinations can be represented and reported.
    """

    N: int
    l: int = 0
    k: int = 1
    coin: CoinKind = CoinKind.FLIP

    @property
    def degree(self) -> int:
        """Coin dimension ``d = N - 1 + l``."""
        return self.N - 1 + self.l

    @property
    def marked_fraction(self) -> float:
        return self.k / self.N

    def with_loops(self, l: int) -> "SearchInstance":
        return SearchInstance(self.N, l, self.k, self.coin)

    def with_coin(self, coin: CoinKind) -> "SearchInstance":
        return SearchInstance(self.N, self.l, self.k, coin)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate(instance: SearchInstance) -> SearchInstance:
    """Return ``instance`` unchanged if every bound holds.

    Raises
    ------
    DomainError
        Naming the first violated bound.
    """
    N, l, k = instance.N, instance.l, instance.k
    for name, value in (("N", N), ("l", l), ("k", k)):
        if not _is_int(value):
            raise DomainError(f"{name} must be an integer, got {value!r}")
    if N < 3:
        raise DomainError(f"N < 3 (got N={N}); the subspace basis needs N - 2 >= 1")
    if l < 0:
        raise DomainError(f"l < 0 (got l={l})")
    if k < 1:
        raise DomainError(f"k < 1 (got k={k})")
    if k >= N:
        raise DomainError(f"k >= N (got k={k}, N={N}); at least one vertex must be unmarked")
    if not isinstance(instance.coin, CoinKind):
        raise DomainError(f"unknown coin {instance.coin!r}")
    return instance


def make_instance(N: int, l: int = 0, k: int = 1, coin: CoinKind | str = CoinKind.FLIP) -> SearchInstance:
    """Build and validate an instance; ``coin`` may be given as ``"flip"``/``"skw"``."""
    if isinstance(coin, str) and not isinstance(coin, CoinKind):
        try:
            coin = CoinKind(coin.lower())
        except ValueError:
            raise DomainError(f"unknown coin {coin!r}; expected 'flip' or 'skw'") from None
    return validate(SearchInstance(N, l, k, coin))
