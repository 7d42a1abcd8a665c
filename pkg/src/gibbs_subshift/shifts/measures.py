"""Window Measures.

Probability measures on the patterns of a fixed window: point masses,
empirical measures from samples, and (in :mod:`gibbs_subshift.dlr`) exact
finite-volume Gibbs distributions. All of them expose ``items()``.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from gibbs_subshift.config import settings
from gibbs_subshift.errors import UsageError, ValidationError

from .patterns import Pattern


@runtime_checkable
class WindowMeasure(Protocol):
    """A probability measure on patterns of one window."""

    def items(self) -> Iterable[tuple[Pattern, float]]:
        """Yield ``(pattern, probability)`` pairs with positive mass."""
        ...


def check_normalized(measure: WindowMeasure) -> None:
    """Raise ValidationError unless the probabilities sum to one."""
    total = math.fsum(p for _, p in measure.items())
    if abs(total - 1.0) > settings.exact_tolerance:
        msg = f"Measure is not normalized: total mass {total!r}"
        raise ValidationError(msg, [{"path": "measure", "message": msg}])


@dataclass(frozen=True)
class PointMass:
    """The Dirac measure at one pattern."""

    pattern: Pattern

    def items(self) -> Iterator[tuple[Pattern, float]]:
        """Yield the single atom."""
        yield self.pattern, 1.0


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Relative frequencies of observed patterns."""

    counts: Counter[Pattern] = field(default_factory=Counter)

    @classmethod
    def from_samples(cls, samples: Iterable[Pattern]) -> EmpiricalMeasure:
        """Count the samples."""
        counts = Counter(samples)
        if not counts:
            msg = "An empirical measure needs at least one sample"
            raise UsageError(msg)
        supports = {p.support for p in counts}
        if len(supports) > 1:
            msg = "Samples must share one support"
            raise UsageError(msg)
        return cls(counts)

    @property
    def total(self) -> int:
        """Number of samples."""
        return sum(self.counts.values())

    def items(self) -> Iterator[tuple[Pattern, float]]:
        """Yield patterns in shortlex-symbol order with their frequencies."""
        total = self.total
        for pattern in sorted(self.counts, key=_pattern_key):
            yield pattern, self.counts[pattern] / total


def _pattern_key(pattern: Pattern) -> tuple[str, ...]:
    return tuple(str(s) for s in pattern.symbols)


def total_variation(
    first: WindowMeasure, second: WindowMeasure
) -> float:
    """Return ``½ Σ |p(w) − q(w)|``."""
    p = dict(first.items())
    q = dict(second.items())
    return 0.5 * math.fsum(
        abs(p.get(w, 0.0) - q.get(w, 0.0)) for w in p.keys() | q.keys()
    )
