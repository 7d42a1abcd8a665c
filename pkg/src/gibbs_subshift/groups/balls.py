"""Word-Metric Balls and Growth.

Breadth-first enumeration of open balls ``B_k = {g : |g| < k}``, closed-form
shell counts for lattices and free groups, and the bounded-sphere-ratio
diagnostic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from gibbs_subshift.config import settings
from gibbs_subshift.errors import DomainError, ResourceError, UsageError

from .elements import (
    Element,
    GeneratorSet,
    GroupFamily,
    GroupSpec,
    shortlex_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BallTable:
    """Shells ``S_k = B_{k+1} ∖ B_k`` of a ball, each sorted in shortlex order.

    ``shells[k]`` holds the elements of word length exactly ``k``; ``S_0`` is
    ``{e}``. A table with ``len(shells) == K`` describes ``B_K``.
    """

    spec: GroupSpec
    shells: tuple[tuple[Element, ...], ...]
    lengths: dict[Element, int] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        """Index word lengths."""
        if not self.lengths:
            for k, shell in enumerate(self.shells):
                for g in shell:
                    self.lengths[g] = k

    @property
    def radius(self) -> int:
        """Radius ``K`` of the enumerated ball ``B_K``."""
        return len(self.shells)

    def _require(self, k: int) -> None:
        if k > self.radius:
            msg = f"Ball table of radius {self.radius} cannot answer radius {k}"
            raise UsageError(msg)

    def shell(self, k: int) -> tuple[Element, ...]:
        """Return ``S_k``, the elements of length exactly ``k``."""
        self._require(k + 1)
        return self.shells[k]

    def shell_size(self, k: int) -> int:
        """Return ``|S_k| = |B_{k+1} ∖ B_k|``."""
        return len(self.shell(k))

    def ball_size(self, k: int, *, closed: bool = False) -> int:
        """Return ``|B_k|`` with ``|B_0| = 0``.

        Args:
        ----
            k: Radius of the ball
            closed: Count the closed ball ``{|g| <= k}``, i.e. ``|B_{k+1}|``

        Returns:
        -------
            The number of elements in the ball

        """
        top = k + 1 if closed else k
        self._require(top)
        return sum(len(s) for s in self.shells[:top])

    def elements(self, k: int | None = None) -> tuple[Element, ...]:
        """Return the elements of ``B_k`` in shortlex order."""
        top = self.radius if k is None else k
        self._require(top)
        return tuple(g for shell in self.shells[:top] for g in shell)

    def __contains__(self, g: object) -> bool:
        """Whether ``g`` lies in the enumerated ball."""
        return g in self.lengths

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        """Shell sizes ``|S_0|, ..., |S_{K-1}|``."""
        return tuple(len(s) for s in self.shells)


@lru_cache(maxsize=128)
def ball(spec: GroupSpec, k: int) -> BallTable:
    """Enumerate ``B_k`` breadth-first from the identity.

    Args:
    ----
        spec: The group and its generating set
        k: Radius, at least 1

    Returns:
    -------
        The ball table with shells ``S_0, ..., S_{k-1}``

    Raises:
    ------
        UsageError: If ``k < 1``
        ResourceError: If ``|B_k|`` exceeds the ``max_elements`` budget

    """
    if k < 1:
        msg = f"Ball radius must be >= 1, got {k}"
        raise UsageError(msg)
    budget = settings.max_elements
    identity = spec.identity
    seen = {identity}
    shells: list[tuple[Element, ...]] = [(identity,)]
    frontier = [identity]
    for radius in range(1, k):
        layer: list[Element] = []
        for g in frontier:
            for s in spec.generators:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    layer.append(h)
        if len(seen) > budget:
            msg = (
                f"|B_{radius + 1}| of {spec.describe()} exceeds the element "
                f"budget of {budget}"
            )
            raise ResourceError(msg)
        layer.sort(key=shortlex_key)
        shells.append(tuple(layer))
        frontier = layer
    logger.debug("Enumerated B_%d of %s: %d elements", k, spec, len(seen))
    return BallTable(spec, tuple(shells))


def shell_sizes(spec: GroupSpec, kmax: int) -> list[int]:
    """Return ``[|S_0|, ..., |S_kmax|]`` in exact integer arithmetic.

    Integer lattices and free groups use closed forms; the Heisenberg group
    falls back to breadth-first enumeration.
    """
    if kmax < 0:
        msg = f"kmax must be >= 0, got {kmax}"
        raise UsageError(msg)
    if spec.family is GroupFamily.HEISENBERG:
        return list(ball(spec, kmax + 1).sizes)
    sizes = [1]
    d = spec.rank
    for k in range(1, kmax + 1):
        if spec.family is GroupFamily.FREE:
            sizes.append(2 * d * (2 * d - 1) ** (k - 1))
        elif spec.generator_set is GeneratorSet.BOX:
            sizes.append((2 * k + 1) ** d - (2 * k - 1) ** d)
        else:
            sizes.append(
                sum(
                    2**i * math.comb(d, i) * math.comb(k - 1, i - 1)
                    for i in range(1, min(d, k) + 1)
                )
            )
    return sizes


def ball_sizes(spec: GroupSpec, kmax: int) -> list[int]:
    """Return ``[|B_0|, ..., |B_kmax|]`` with ``|B_0| = 0``."""
    sizes = [0]
    for s in shell_sizes(spec, max(kmax - 1, 0))[:kmax]:
        sizes.append(sizes[-1] + s)
    return sizes


def _exact_ratios(
    sizes: list[int], kmax: int, n: int, start: int
) -> list[tuple[int, Fraction]]:
    ratios = []
    for m in range(start, kmax - n + 1):
        denominator = sizes[m - 1]
        if denominator == 0:
            msg = f"Empty shell at radius {m}: the group is finite"
            raise DomainError(msg)
        ratios.append((m, Fraction(sizes[m + n - 1], denominator)))
    return ratios


def sphere_ratio_sup(
    spec: GroupSpec, kmax: int, n: int = 1, start: int = 1
) -> float:
    """Return ``max |B_{m+n} ∖ B_{m+n-1}| / |B_m ∖ B_{m-1}|``.

    The maximum runs over ``start <= m <= kmax - n``. With ``start=1`` the
    identity shell ``B_1 ∖ B_0`` enters the first ratio; ``start=2`` starts
    at the first nontrivial sphere.

    Args:
    ----
        spec: The group and its generating set
        kmax: Largest radius considered
        n: Offset between compared shells
        start: Smallest ``m`` considered

    Returns:
    -------
        The supremum, computed exactly and converted to float at the end

    """
    if n < 1 or start < 1:
        msg = "Offset and start must both be >= 1"
        raise UsageError(msg)
    if kmax < n + start:
        msg = f"kmax must be >= n + start = {n + start}, got {kmax}"
        raise UsageError(msg)
    sizes = shell_sizes(spec, kmax)
    best = max(ratio for _, ratio in _exact_ratios(sizes, kmax, n, start))
    return float(best)


@dataclass(frozen=True)
class GrowthRow:
    """One row of a growth table."""

    k: int
    ball_size: int
    shell_size: int
    ratio: float | None


@dataclass(frozen=True)
class GrowthReport:
    """Growth table plus the sphere-ratio summary."""

    group: str
    offset: int
    start: int
    rows: tuple[GrowthRow, ...]
    sup_ratio: float
    stabilized: bool
    nontrivial_sup_ratio: float | None = None


def growth_table(
    spec: GroupSpec, kmax: int, n: int = 1, start: int = 1
) -> GrowthReport:
    """Tabulate ``(k, |B_k|, |B_k ∖ B_{k-1}|, ratio)`` for ``1 <= k <= kmax``.

    The ratio in row ``k`` is the sphere ratio with ``m = k`` when defined.
    ``stabilized`` holds when the supremum over the first half of the radii
    already equals the supremum over all of them.
    ``nontrivial_sup_ratio`` drops the identity shell, taking ``m >= 2``.
    """
    if n < 1 or start < 1 or kmax < n + start:
        msg = f"Need n, start >= 1 and kmax >= n + start, got kmax={kmax}"
        raise UsageError(msg)
    sizes = shell_sizes(spec, kmax)
    ratios = dict(_exact_ratios(sizes, kmax, n, start))
    rows = []
    total = 0
    for k in range(1, kmax + 1):
        total += sizes[k - 1]
        ratio = ratios.get(k)
        value = None if ratio is None else float(ratio)
        rows.append(GrowthRow(k, total, sizes[k - 1], value))
    sup = max(ratios.values())
    half = [r for m, r in ratios.items() if m <= max(start, (kmax - n) // 2)]
    stabilized = bool(half) and max(half) == sup
    nontrivial = [r for m, r in ratios.items() if m >= 2]
    return GrowthReport(
        spec.describe(),
        n,
        start,
        tuple(rows),
        float(sup),
        stabilized,
        float(max(nontrivial)) if nontrivial else None,
    )


def shell_growth_constant(spec: GroupSpec, k: int) -> float:
    """Return ``|B_{k+1} ∖ B_k| / k^{d-1}`` for ``Z^d``.

    With box generators this tends to ``2^d · d``.
    """
    if spec.family is not GroupFamily.LATTICE:
        msg = "The shell growth constant is defined for integer lattices only"
        raise UsageError(msg)
    if k < 1:
        msg = f"k must be >= 1, got {k}"
        raise UsageError(msg)
    return shell_sizes(spec, k)[k] / k ** (spec.rank - 1)
