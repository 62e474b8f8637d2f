"""Turning a discrete processing-time distribution into an F-shape.

Each criticality level gets the quantile of the distribution at its
confidence level.  Quantiles use the smallest-support-point convention:
``F^-1(c) = min{t : CDF(t) >= c}``.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .core import FShape, InputError, TaskId

log = logging.getLogger(__name__)

MASS_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    support: tuple[int, ...]
    mass: tuple[float, ...]

    def __post_init__(self) -> None:
        support = tuple(int(t) for t in self.support)
        mass = tuple(float(m) for m in self.mass)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)
        if not support:
            raise InputError("distribution support is empty")
        if len(support) != len(mass):
            raise InputError("support and mass differ in length")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise InputError("support must be strictly increasing")
        if any(m <= 0 for m in mass):
            raise InputError("masses must be positive")
        if abs(math.fsum(mass) - 1.0) > MASS_TOL:
            raise InputError(f"masses sum to {math.fsum(mass)!r}, not 1")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, float]]) -> "DiscreteDistribution":
        pairs = sorted(pairs)
        return cls(tuple(t for t, _ in pairs), tuple(m for _, m in pairs))

    def cdf_values(self) -> list[float]:
        return list(itertools.accumulate(self.mass))

    def cdf(self, t: float) -> float:
        k = bisect.bisect_right(self.support, t)
        return math.fsum(self.mass[:k])


@dataclass(frozen=True)
class ConfidenceLevels:
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        levels = tuple(float(c) for c in self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise InputError("at least one confidence level is required")
        if any(not 0.0 < c <= 1.0 for c in levels):
            raise InputError("confidence levels must lie in (0, 1]")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise InputError("confidence levels must strictly increase")

    def __len__(self) -> int:
        return len(self.levels)


def quantile(dist: DiscreteDistribution, c: float) -> int:
    """Smallest support point whose cumulative mass reaches ``c``."""
    if not 0.0 < c <= 1.0:
        raise InputError(f"quantile level {c!r} outside (0, 1]")
    cum = dist.cdf_values()
    # Cumulative sums may fall a hair short of 1; the tolerance absorbs that.
    k = bisect.bisect_left(cum, c - MASS_TOL)
    return dist.support[min(k, len(dist.support) - 1)]


def derive_fshape(
    dist: DiscreteDistribution,
    levels: ConfidenceLevels,
    criticality: int,
    task_id: TaskId = 0,
) -> FShape:
    """F-shape whose level-l processing time is the quantile at ``levels[l]``.

    Equal consecutive quantiles are merged, so the returned criticality may be
    lower than requested.
    """
    if criticality < 1 or criticality > len(levels):
        raise InputError(f"criticality {criticality} needs that many confidence levels, got {len(levels)}")
    qs = [quantile(dist, c) for c in levels.levels[:criticality]]
    proc = [q for k, q in enumerate(qs) if k == 0 or q != qs[k - 1]]
    if len(proc) < criticality:
        log.info("task %r: %d duplicate quantiles collapsed, criticality %d -> %d",
                 task_id, criticality - len(proc), criticality, len(proc))
    return FShape(task_id, len(proc), tuple(proc))
