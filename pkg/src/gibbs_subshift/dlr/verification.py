"""DLR and Conformality Checks.

Numerical certificates on finite windows: a Gibbs table is conformal when
every holonomy swap ``ψ_{ω,η}`` rescales point masses by ``exp φ``, and DLR
when its conditionals on sub-windows match the specification kernel.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from gibbs_subshift.energy import (
    Interaction,
    LocalPotential,
    Potential,
    SeriesPotential,
    WeightScheme,
    partial_sum_f_m,
    translate_weight,
)
from gibbs_subshift.errors import UsageError
from gibbs_subshift.groups import word_length
from gibbs_subshift.shifts import (
    Pattern,
    Semantics,
    WindowConfig,
    check_normalized,
    enumerate_fillings,
    holonomy_swap,
)

from .kernels import (
    FiniteVolumeGibbs,
    SpecificationKernel,
    dlr_kernel,
    kernel_deviation,
    normalize_log_weights,
)
from .sources import CocycleSource, InteractionSource

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element
    from gibbs_subshift.shifts import SFT, Symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RNResult:
    """Outcome of a conformality sweep over holonomy swaps."""

    region: tuple[Element, ...]
    pairs_tested: int
    events_tested: int
    max_deviation: float
    min_derivative: float
    semantics: Semantics
    worst: tuple[Pattern, Pattern, Pattern] | None = None

    @property
    def derivative_positive(self) -> bool:
        """Whether every tested derivative was positive."""
        return self.min_derivative > 0


def verify_conformal(
    source: CocycleSource,
    region: Iterable[Element],
    gibbs: FiniteVolumeGibbs,
) -> RNResult:
    """Check ``μ(ψw) = exp φ(w, ψw) · μ(w)`` for every swap and filling.

    ``ω`` and ``η`` range over the admissible patterns on ``Λ_N`` and ``w``
    over the fillings of positive mass; the largest absolute deviation is
    reported along with the pair and filling attaining it.

    Args:
    ----
        source: The cocycle source the table was built from
        region: The set ``Λ_N`` inside the window
        gibbs: The finite-volume Gibbs table

    Returns:
    -------
        The sweep summary

    Raises:
    ------
        ValidationError: If the table is not normalized
        UsageError: If ``Λ_N`` leaves the window

    """
    check_normalized(gibbs)
    sites = sorted(set(region))
    if not set(sites) <= set(gibbs.region):
        msg = "Holonomy region must lie inside the window"
        raise UsageError(msg)
    masses = gibbs.as_dict()
    patterns = enumerate_fillings(source.sft, sites, Pattern(), gibbs.semantics)
    worst = 0.0
    worst_case = None
    min_derivative = math.inf
    pairs = 0
    events = 0
    for omega, eta in itertools.product(patterns, repeat=2):
        pairs += 1
        for w, mass in masses.items():
            window = WindowConfig(w, gibbs.boundary)
            image = holonomy_swap(
                source.sft, omega, eta, window, gibbs.semantics
            ).interior
            phi = source.cocycle(
                window.configuration, image.merge(gibbs.boundary), sites
            )
            predicted = math.exp(phi.value) * mass
            deviation = abs(masses.get(image, 0.0) - predicted)
            events += 1
            min_derivative = min(min_derivative, masses.get(image, 0.0) / mass)
            if deviation > worst:
                worst = deviation
                worst_case = (omega, eta, w)
    logger.debug(
        "Conformality over %d pairs and %d events: %.3e", pairs, events, worst
    )
    return RNResult(
        tuple(sites),
        pairs,
        events,
        worst,
        min_derivative,
        gibbs.semantics,
        worst_case,
    )


@dataclass(frozen=True)
class DLRCheck:
    """Conditionals of a Gibbs table compared with the DLR kernel."""

    sub_region: tuple[Element, ...]
    max_deviation: float
    conditionings_tested: int
    skipped: int
    semantics: Semantics


def _conditional_sweep(
    source: CocycleSource, gibbs: FiniteVolumeGibbs, sub_region: list[Element]
) -> DLRCheck:
    inside = set(sub_region)
    if not inside <= set(gibbs.region):
        msg = "Sub-window must lie inside the window"
        raise UsageError(msg)
    tables = gibbs.conditional_tables(inside)
    exterior_sites = [g for g in gibbs.region if g not in inside]
    exteriors = enumerate_fillings(
        source.sft, exterior_sites, gibbs.boundary, gibbs.semantics
    )
    worst = 0.0
    tested = 0
    skipped = 0
    for exterior in exteriors:
        table = tables.get(exterior)
        if table is None:
            skipped += 1
            continue
        kernel = dlr_kernel(
            source, inside, exterior.merge(gibbs.boundary), gibbs.semantics
        )
        expected = kernel.as_dict()
        tested += 1
        for w in table.keys() | expected.keys():
            worst = max(worst, abs(table.get(w, 0.0) - expected.get(w, 0.0)))
    if skipped:
        logger.info("Skipped %d zero-mass conditionings", skipped)
    return DLRCheck(
        tuple(sorted(inside)), worst, tested, skipped, gibbs.semantics
    )


def verify_dlr_from_conformal(
    source: CocycleSource,
    sub_region: Iterable[Element],
    gibbs: FiniteVolumeGibbs,
) -> DLRCheck:
    """Compare ``μ(· on Δ | ξ)`` with the DLR kernel on ``Δ`` for all ``ξ``.

    Exterior patterns ``ξ`` on ``Λ ∖ Δ`` of zero mass are skipped and
    counted.
    """
    check_normalized(gibbs)
    return _conditional_sweep(source, gibbs, sorted(set(sub_region)))


def tower_deviation(
    source: CocycleSource,
    gibbs: FiniteVolumeGibbs,
    sub_region: Iterable[Element],
) -> float:
    """Return the largest gap between conditioned table and kernel on ``Δ``."""
    check = _conditional_sweep(source, gibbs, sorted(set(sub_region)))
    return check.max_deviation


class _Padded(Mapping["Element", "Symbol"]):
    """A pattern read with a constant symbol outside its support."""

    def __init__(self, pattern: Pattern, padding: Symbol) -> None:
        self.pattern = pattern
        self.padding = padding

    def __getitem__(self, g: Element) -> Symbol:
        return self.pattern.get(g, self.padding)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.pattern)

    def __len__(self) -> int:
        return len(self.pattern)


def covering_radius(f: Potential, region: Iterable[Element]) -> int:
    """Least ``m`` with ``s·δ⁻¹ ∈ B_m`` for ``s ∈ supp f`` and ``δ ∈ Λ``."""
    pieces: tuple[LocalPotential, ...] = (
        f.pieces if isinstance(f, SeriesPotential) else (f,)
    )
    sites = list(region)
    return 1 + max(
        (
            word_length(s * d.inverse())
            for piece in pieces
            for s in piece.support
            for d in sites
        ),
        default=0,
    )


def ball_sum_kernel(
    potential: Potential,
    sft: SFT,
    region: Iterable[Element],
    boundary: Pattern,
    m: int | None = None,
    semantics: Semantics = Semantics.LOCAL,
    padding: Symbol | None = None,
) -> SpecificationKernel:
    """Return the kernel ``∝ exp f_m(ηx)`` built from ball sums of ``f``.

    Once ``B_m`` contains every translate ``s·δ⁻¹`` that reads ``Λ``, the
    ratios ``exp(f_m(ηx) − f_m(η₀x))`` no longer depend on ``m``.
    Coordinates outside the window are read as ``padding`` (the first
    symbol by default); they enter every filling identically.
    """
    sites = sorted(set(region))
    radius = covering_radius(potential, sites) if m is None else m
    pad = sft.alphabet.symbols[0] if padding is None else padding
    semantics = sft.effective_semantics(semantics)
    fillings = enumerate_fillings(sft, sites, boundary, semantics)
    log_weights = np.array(
        [
            partial_sum_f_m(
                potential, radius, _Padded(filling.merge(boundary), pad)
            )
            for filling in fillings
        ]
    )
    return SpecificationKernel(
        tuple(sites),
        boundary,
        tuple(fillings),
        normalize_log_weights(log_weights),
        semantics,
    )


def verify_ball_sum(
    interaction: Interaction,
    scheme: WeightScheme,
    region: Iterable[Element],
    boundary: Pattern,
    sft: SFT | None = None,
    m: int | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> float:
    """Compare the interaction kernel with the ``f_m`` kernel of ``A_Φ``."""
    source = InteractionSource(interaction, sft)
    reference = dlr_kernel(source, region, boundary, semantics)
    potential = translate_weight(interaction, scheme)
    kernel = ball_sum_kernel(
        potential, source.sft, region, boundary, m, semantics
    )
    return kernel_deviation(reference, kernel)
