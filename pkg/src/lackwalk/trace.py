"""Success-probability time series and peak detection.

Search success probability oscillates with period ``2 t*``. Later humps can
exceed the first one in the last few digits, so the reported peak is the
maximum of the *first hump*. Scanning forward, the hump ends at the first
sample that drops below the midpoint between the starting value and the
running maximum, once that maximum has at least doubled the starting value.
If no such drop occurs, the global maximum is used. Ties go to the earliest
sample.

Discrete-time traces also alternate from one step to the next, because the
initial state overlaps the ``-1`` eigenvector by ``O(1/sqrt(N))``.
:meth:`EvolutionTrace.envelope` averages neighbouring steps, which cancels
that alternating cross term. It is a diagnostic only and never feeds the
reported peak.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


def first_hump_peak(values: np.ndarray) -> int:
    """Index of the first-hump maximum of ``values`` (see module docstring)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty trace")
    start = values[0]
    best, best_val = 0, start
    for i, v in enumerate(values):
        if v > best_val:
            best, best_val = i, v
        if best_val >= 2.0 * start and v < 0.5 * (start + best_val):
            break
    return best


@dataclass(frozen=True)
class EvolutionTrace:
    """Discrete-time success probability at steps ``0..max_steps``."""

    steps: np.ndarray
    probabilities: np.ndarray
    peak_step: int = field(init=False)
    peak_probability: float = field(init=False)

    def __post_init__(self):
        i = first_hump_peak(self.probabilities)
        object.__setattr__(self, "peak_step", int(self.steps[i]))
        object.__setattr__(self, "peak_probability", float(self.probabilities[i]))

    @property
    def samples(self) -> list[tuple[int, float]]:
        return [(int(s), float(p)) for s, p in zip(self.steps, self.probabilities)]

    def first_reach(self, threshold: float) -> Optional[int]:
        """First step whose probability is at least ``threshold``, or ``None``."""
        hits = np.nonzero(self.probabilities >= threshold)[0]
        return int(self.steps[hits[0]]) if hits.size else None

    def envelope(self) -> tuple[np.ndarray, np.ndarray]:
        """Half-integer steps and two-step averaged probabilities."""
        p = self.probabilities
        return self.steps[:-1] + 0.5, 0.5 * (p[:-1] + p[1:])

    def envelope_peak(self) -> tuple[float, float]:
        x, y = self.envelope()
        if y.size == 0:
            return float(self.steps[0]), float(self.probabilities[0])
        i = first_hump_peak(y)
        return float(x[i]), float(y[i])


@dataclass(frozen=True)
class CtqwTrace:
    """Continuous-time success probability sampled at ``times``."""

    times: np.ndarray
    probabilities: np.ndarray
    peak_time: float = field(init=False)
    peak_probability: float = field(init=False)

    def __post_init__(self):
        i = first_hump_peak(self.probabilities)
        object.__setattr__(self, "peak_time", float(self.times[i]))
        object.__setattr__(self, "peak_probability", float(self.probabilities[i]))

    @property
    def samples(self) -> list[tuple[float, float]]:
        return [(float(t), float(p)) for t, p in zip(self.times, self.probabilities)]
