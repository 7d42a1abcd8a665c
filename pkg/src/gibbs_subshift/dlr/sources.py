"""Cocycle Sources.

A cocycle source evaluates ``φ(x, y)`` for pairs of windows that differ on
a finite set ``Δ``. Interaction sources use ``φ_Φ = H_Δ(x) − H_Δ(y)`` and
also know absolute energies; potential sources use ``φ_f``.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from gibbs_subshift.config import settings
from gibbs_subshift.energy import (
    CocycleValue,
    Interaction,
    LocalPotential,
    Potential,
    SeriesPotential,
    cocycle_interaction,
    cocycle_potential,
    hamiltonian,
)
from gibbs_subshift.errors import UsageError
from gibbs_subshift.shifts import SFT

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element, GroupSpec
    from gibbs_subshift.shifts import Alphabet, Pattern

logger = logging.getLogger(__name__)


class CocycleSource(ABC):
    """Something that evaluates a Gibbs cocycle on a shift of finite type."""

    absolute = False

    def __init__(self, sft: SFT) -> None:
        """Initialize the source on ``sft``."""
        self.sft = sft

    @property
    def group(self) -> GroupSpec:
        """The group of the shift."""
        return self.sft.group

    @property
    def alphabet(self) -> Alphabet:
        """The alphabet of the shift."""
        return self.sft.alphabet

    @property
    @abstractmethod
    def kind(self) -> str:
        """Short name used in reports."""

    @property
    @abstractmethod
    def reach(self) -> int:
        """Distance beyond which a single-site change has no effect."""

    @abstractmethod
    def cocycle(
        self, x: Pattern, y: Pattern, delta: Iterable[Element]
    ) -> CocycleValue:
        """Return ``φ(x, y)`` for windows differing inside ``Δ``."""

    def log_weights(
        self,
        fillings: Sequence[Pattern],
        boundary: Pattern,
        region: Iterable[Element],
        base: int = 0,
    ) -> tuple[np.ndarray, float]:
        """Return ``φ(η₀x, ηx)`` for every filling and the largest error.

        ``η₀`` is ``fillings[base]``; the kernel is proportional to the
        exponential of these values.
        """
        sites = frozenset(region)
        reference = fillings[base].merge(boundary)
        values = np.empty(len(fillings))
        error = 0.0
        for i, filling in enumerate(fillings):
            result = self.cocycle(reference, filling.merge(boundary), sites)
            values[i] = result.value
            error = max(error, result.error)
        return values, error


class InteractionSource(CocycleSource):
    """The cocycle ``φ_Φ`` of an interaction."""

    absolute = True

    def __init__(
        self,
        interaction: Interaction,
        sft: SFT | None = None,
        tail_radius: int | None = None,
    ) -> None:
        """Initialize the source.

        Args:
        ----
            interaction: The interaction ``Φ``
            sft: The shift; ``None`` means the full shift
            tail_radius: Truncation radius of a radial tail

        """
        shift = sft or SFT.full_shift(interaction.group, interaction.alphabet)
        if (shift.group, shift.alphabet) != (
            interaction.group,
            interaction.alphabet,
        ):
            msg = "Interaction and shift live on different groups or alphabets"
            raise UsageError(msg)
        super().__init__(shift)
        self.interaction = interaction
        self.tail_radius = tail_radius

    @property
    def kind(self) -> str:
        """``interaction``."""
        return "interaction"

    @property
    def reach(self) -> int:
        """Largest translate diameter, or the tail radius."""
        if self.interaction.tail is not None:
            return (
                settings.tail_radius
                if self.tail_radius is None
                else self.tail_radius
            )
        return max((t.max_length for t in self.interaction.terms), default=0)

    def cocycle(
        self, x: Pattern, y: Pattern, delta: Iterable[Element]
    ) -> CocycleValue:
        """Return ``H_Δ(x) − H_Δ(y)``."""
        return cocycle_interaction(
            self.interaction, x, y, delta, self.tail_radius
        )

    def energies(
        self,
        fillings: Sequence[Pattern],
        boundary: Pattern,
        region: Iterable[Element],
    ) -> tuple[np.ndarray, float]:
        """Return ``H_Λ(ηx)`` for every filling and the largest tail error."""
        sites = sorted(set(region))
        values = np.empty(len(fillings))
        error = 0.0
        for i, filling in enumerate(fillings):
            config = filling.merge(boundary)
            result = hamiltonian(
                self.interaction, sites, config, self.tail_radius
            )
            values[i] = result.value
            error = max(error, result.truncation_error)
        return values, error

    def log_weights(
        self,
        fillings: Sequence[Pattern],
        boundary: Pattern,
        region: Iterable[Element],
        base: int = 0,
    ) -> tuple[np.ndarray, float]:
        """Return ``H_Λ(η₀x) − H_Λ(ηx)`` from one energy per filling."""
        energies, error = self.energies(fillings, boundary, region)
        return energies[base] - energies, 2 * error


class PotentialSource(CocycleSource):
    """The cocycle ``φ_f`` of a potential."""

    def __init__(self, potential: Potential, sft: SFT | None = None) -> None:
        """Initialize the source on ``sft`` (the full shift by default)."""
        shift = sft or SFT.full_shift(potential.group, potential.alphabet)
        if (shift.group, shift.alphabet) != (
            potential.group,
            potential.alphabet,
        ):
            msg = "Potential and shift live on different groups or alphabets"
            raise UsageError(msg)
        super().__init__(shift)
        self.potential = potential

    @property
    def kind(self) -> str:
        """``potential``."""
        return "potential"

    @property
    def reach(self) -> int:
        """Twice the largest support length of the potential."""
        pieces: tuple[LocalPotential, ...] = (
            self.potential.pieces
            if isinstance(self.potential, SeriesPotential)
            else (self.potential,)
        )
        return max((2 * (p.radius - 1) for p in pieces), default=0)

    def cocycle(
        self, x: Pattern, y: Pattern, delta: Iterable[Element]
    ) -> CocycleValue:
        """Return ``Σ_g [f(g·y) − f(g·x)]``."""
        return cocycle_potential(self.potential, x, y, delta)


def zero_source(sft: SFT) -> InteractionSource:
    """Return the source of the zero cocycle on ``sft``."""
    return InteractionSource(Interaction(sft.group, sft.alphabet), sft)
