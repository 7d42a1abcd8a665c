"""Specification Kernels.

The DLR kernel on a finite set ``Λ`` with a fixed boundary assigns each
admissible filling ``η`` the probability
``[Σ_ζ exp φ(ηx, ζx)]⁻¹``. It is computed from one reference filling and
normalized with ``logsumexp``; the direct double sum is kept as a check.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import logsumexp

from gibbs_subshift.config import settings
from gibbs_subshift.errors import DomainError, UsageError, ValidationError
from gibbs_subshift.shifts import Pattern, Semantics, enumerate_fillings

from .sources import CocycleSource, InteractionSource

if TYPE_CHECKING:
    from gibbs_subshift.energy import Interaction
    from gibbs_subshift.groups import Element
    from gibbs_subshift.shifts import SFT

logger = logging.getLogger(__name__)

ALL_BASES_LIMIT = 16
SPREAD_BASES = 8


def _exp_or_inf(log_value: float) -> float:
    """Return ``exp(log_value)``, or ``inf`` past the float range."""
    try:
        return math.exp(log_value)
    except OverflowError:
        logger.warning("Partition function overflows: log Z = %.6g", log_value)
        return math.inf


@dataclass(frozen=True, eq=False)
class SpecificationKernel:
    """Conditional probabilities of the fillings of ``Λ`` given a boundary."""

    region: tuple[Element, ...]
    boundary: Pattern
    support: tuple[Pattern, ...]
    probabilities: np.ndarray
    semantics: Semantics
    error_bound: float = 0.0

    def __post_init__(self) -> None:
        """Check that the kernel is a probability vector."""
        if not self.support:
            msg = "A kernel needs at least one admissible filling"
            raise DomainError(msg)
        if np.any(self.probabilities < 0):
            msg = "Kernel probabilities must be nonnegative"
            raise ValidationError(msg)
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > settings.kernel_tolerance:
            msg = f"Kernel is not normalized: total mass {total!r}"
            raise ValidationError(msg)

    def items(self) -> Iterator[tuple[Pattern, float]]:
        """Yield ``(filling, probability)`` with positive probability."""
        for pattern, p in zip(self.support, self.probabilities, strict=True):
            if p > 0:
                yield pattern, float(p)

    def as_dict(self) -> dict[Pattern, float]:
        """Return the probabilities keyed by filling."""
        return dict(self.items())

    def probability(self, pattern: Pattern) -> float:
        """Return the probability of one filling of ``Λ``."""
        return self.as_dict().get(pattern, 0.0)


@dataclass(frozen=True, eq=False)
class FiniteVolumeGibbs(SpecificationKernel):
    """The full finite-volume Gibbs table on a window.

    ``log_partition`` is ``log Z_Λ`` for interaction sources; potentials
    only define the table up to a constant and leave it ``None``.
    """

    log_partition: float | None = None

    @property
    def partition(self) -> float | None:
        """``Z_Λ`` when the source has absolute energies."""
        if self.log_partition is None:
            return None
        return _exp_or_inf(self.log_partition)

    def marginal(self, sub_region: Iterable[Element]) -> dict[Pattern, float]:
        """Return the marginal on ``Δ ⊆ Λ``."""
        sites = frozenset(sub_region)
        if not sites <= frozenset(self.region):
            msg = "Marginals are only defined inside the window"
            raise UsageError(msg)
        masses: dict[Pattern, list[float]] = defaultdict(list)
        for pattern, p in self.items():
            masses[pattern.restrict(sites)].append(p)
        return {w: math.fsum(ps) for w, ps in masses.items()}

    def conditional_tables(
        self, sub_region: Iterable[Element]
    ) -> dict[Pattern, dict[Pattern, float]]:
        """Return ``μ(· on Δ | ξ on Λ ∖ Δ)`` for ``ξ`` of positive mass."""
        sites = frozenset(sub_region)
        grouped: dict[Pattern, dict[Pattern, float]] = defaultdict(dict)
        for pattern, p in self.items():
            grouped[pattern.without(sites)][pattern.restrict(sites)] = p
        tables = {}
        for exterior, table in grouped.items():
            total = math.fsum(table.values())
            tables[exterior] = {w: p / total for w, p in table.items()}
        return tables


def _fillings(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics,
) -> tuple[list[Element], list[Pattern], Semantics]:
    sites = sorted(set(region))
    semantics = source.sft.effective_semantics(semantics)
    fillings = enumerate_fillings(source.sft, sites, boundary, semantics)
    if not fillings:
        msg = f"No admissible filling of {len(sites)} sites for this boundary"
        raise DomainError(msg)
    return sites, fillings, semantics


def normalize_log_weights(log_weights: np.ndarray) -> np.ndarray:
    """Return ``exp(w − logsumexp(w))``."""
    return np.exp(log_weights - logsumexp(log_weights))


def dlr_kernel(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics = Semantics.LOCAL,
    base: int = 0,
) -> SpecificationKernel:
    """Return the DLR kernel on ``Λ`` for a fixed boundary.

    Args:
    ----
        source: The cocycle source
        region: The finite set ``Λ``
        boundary: Pattern covering the collar of ``Λ`` and every coordinate
            the cocycle reads
        semantics: Admissibility semantics for ``1_X``
        base: Index of the reference filling ``η₀``

    Returns:
    -------
        The kernel with weights ``exp φ(η₀x, ηx)`` normalized to one

    Raises:
    ------
        DomainError: If no filling is admissible

    """
    sites, fillings, semantics = _fillings(source, region, boundary, semantics)
    log_weights, error = source.log_weights(fillings, boundary, sites, base)
    return SpecificationKernel(
        tuple(sites),
        boundary,
        tuple(fillings),
        normalize_log_weights(log_weights),
        semantics,
        error,
    )


def exact_gibbs(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics = Semantics.LOCAL,
) -> FiniteVolumeGibbs:
    """Return the full Gibbs table on a window with fixed boundary.

    Raises:
    ------
        ResourceError: If ``|A|^|Λ|`` exceeds the enumeration budget
        DomainError: If no filling is admissible

    """
    sites, fillings, semantics = _fillings(source, region, boundary, semantics)
    log_partition = None
    if isinstance(source, InteractionSource):
        energies, error = source.energies(fillings, boundary, sites)
        log_weights = -energies
        log_partition = float(logsumexp(log_weights))
    else:
        log_weights, error = source.log_weights(fillings, boundary, sites)
    logger.debug(
        "Exact Gibbs table on %d sites with %d fillings",
        len(sites),
        len(fillings),
    )
    return FiniteVolumeGibbs(
        tuple(sites),
        boundary,
        tuple(fillings),
        normalize_log_weights(log_weights),
        semantics,
        error,
        log_partition,
    )


def partition_function(
    interaction: Interaction,
    region: Iterable[Element],
    boundary: Pattern,
    sft: SFT | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> float:
    """Return ``Z_Λ = Σ_η exp(−H_Λ(ηx))`` over admissible fillings.

    ``Z_Λ`` is ``inf`` once ``log Z_Λ`` leaves the float range; the
    logarithm stays available as ``exact_gibbs(...).log_partition``.
    """
    source = InteractionSource(interaction, sft)
    sites, fillings, _ = _fillings(source, region, boundary, semantics)
    energies, _ = source.energies(fillings, boundary, sites)
    return _exp_or_inf(float(logsumexp(-energies)))


def direct_kernel(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics = Semantics.LOCAL,
) -> SpecificationKernel:
    """Evaluate ``[Σ_ζ exp φ(ηx, ζx)]⁻¹`` term by term for every ``η``."""
    sites, fillings, semantics = _fillings(source, region, boundary, semantics)
    probabilities = np.empty(len(fillings))
    error = 0.0
    for i in range(len(fillings)):
        log_weights, err = source.log_weights(fillings, boundary, sites, i)
        probabilities[i] = math.exp(-float(logsumexp(log_weights)))
        error = max(error, err)
    probabilities /= probabilities.sum()
    return SpecificationKernel(
        tuple(sites),
        boundary,
        tuple(fillings),
        probabilities,
        semantics,
        error,
    )


def kernel_deviation(
    first: SpecificationKernel, second: SpecificationKernel
) -> float:
    """Return the largest pointwise difference of two kernels."""
    p = first.as_dict()
    q = second.as_dict()
    return max(
        (abs(p.get(w, 0.0) - q.get(w, 0.0)) for w in p.keys() | q.keys()),
        default=0.0,
    )


def base_point_deviation(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics = Semantics.LOCAL,
    bases: Iterable[int] | None = None,
) -> float:
    """Return how far kernels from different reference fillings disagree.

    By default every filling serves as a reference when there are at most
    16 of them, and 8 evenly spread ones otherwise.
    """
    sites, fillings, semantics = _fillings(source, region, boundary, semantics)
    if bases is None:
        count = len(fillings)
        bases = (
            range(count)
            if count <= ALL_BASES_LIMIT
            else sorted(
                {int(i) for i in np.linspace(0, count - 1, SPREAD_BASES)}
            )
        )
    reference = dlr_kernel(source, sites, boundary, semantics)
    worst = 0.0
    for base in bases:
        kernel = dlr_kernel(source, sites, boundary, semantics, base)
        worst = max(worst, kernel_deviation(reference, kernel))
    return worst
