"""Translate-Weighting Maps.

A weighting scheme distributes each interaction term ``Φ_Λ`` over the
translates of ``Λ`` through the identity, producing a potential
``A_Φ = −Σ_{Λ ∋ e} a_Λ Φ_Λ`` with the same cocycle as ``Φ``.
This module also holds the inverse on local potentials and the long-range pair
interaction whose image is not shell-regular.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import zeta

from gibbs_subshift.config import settings
from gibbs_subshift.errors import (
    DomainError,
    ResourceError,
    UsageError,
    ValidationError,
)
from gibbs_subshift.groups import GroupSpec, ball, support_key
from gibbs_subshift.shifts import (
    SFT,
    Alphabet,
    Pattern,
    Semantics,
    WindowMeasure,
    enumerate_fillings,
    random_admissible_pattern,
)

from .interactions import (
    BNorm,
    Interaction,
    LocalTerm,
    RadialTail,
    b_norm,
    cocycle_interaction,
    is_full_dimensional,
)
from .potentials import (
    LocalPotential,
    NormReport,
    Potential,
    PotentialTerm,
    SeriesPotential,
    cocycle_potential,
    shell_norm,
)

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element
    from gibbs_subshift.shifts import Symbol

logger = logging.getLogger(__name__)


class SchemeKind(StrEnum):
    """How weights are spread over a translate class."""

    UNIFORM = "uniform"
    DICTATOR = "dictator"
    EXPLICIT = "explicit"


class DictatorRule(StrEnum):
    """Which translate a dictator scheme designates."""

    SHORTLEX_MIN = "shortlex-min"
    LEX_MIDDLE = "lex-middle"
    LEX_MIN = "lex-min"


@dataclass(frozen=True)
class WeightScheme:
    """A translate-weighting scheme.

    Explicit schemes map a term index to one weight per support element
    ``r``, the weight of the translate ``r⁻¹R``.
    """

    kind: SchemeKind = SchemeKind.UNIFORM
    rule: DictatorRule = DictatorRule.SHORTLEX_MIN
    weights: Mapping[int, tuple[Fraction, ...]] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> WeightScheme:
        """Parse ``uniform``, ``dictator`` or ``dictator:<rule>``."""
        kind, _, rule = text.strip().partition(":")
        try:
            scheme_kind = SchemeKind(kind)
        except ValueError:
            msg = f"Unknown weighting scheme {text!r}"
            raise UsageError(msg) from None
        if scheme_kind is SchemeKind.EXPLICIT:
            msg = "Explicit weights must be loaded from a file"
            raise UsageError(msg)
        if scheme_kind is SchemeKind.UNIFORM:
            if rule:
                msg = "The uniform scheme takes no designation rule"
                raise UsageError(msg)
            return cls()
        try:
            dictator_rule = DictatorRule(rule or DictatorRule.SHORTLEX_MIN)
        except ValueError:
            msg = f"Unknown dictator rule {rule!r}"
            raise UsageError(msg) from None
        return cls(SchemeKind.DICTATOR, dictator_rule)

    def describe(self) -> str:
        """Return the textual form used in reports."""
        if self.kind is SchemeKind.DICTATOR:
            return f"dictator:{self.rule}"
        return str(self.kind)

    def weights_for(self, index: int, term: LocalTerm) -> list[Fraction]:
        """Return ``a_{r⁻¹R}`` for each ``r`` in the term support.

        Raises:
        ------
            ValidationError: If explicit weights are negative or do not sum
                to one on the orbit
            UsageError: If a lexicographic rule is used off ``Z^d``

        """
        size = term.size
        if self.kind is SchemeKind.UNIFORM:
            return [Fraction(1, size)] * size
        if self.kind is SchemeKind.EXPLICIT:
            return self._explicit(index, term)
        chosen = _designated(term, self.rule)
        return [Fraction(int(i == chosen)) for i in range(size)]

    def _explicit(self, index: int, term: LocalTerm) -> list[Fraction]:
        path = f"weights[{index}]"
        try:
            weights = [Fraction(w) for w in self.weights[index]]
        except KeyError:
            msg = f"No explicit weights for term {index}"
            raise ValidationError(
                msg, [{"path": path, "message": msg}]
            ) from None
        if len(weights) != term.size:
            msg = f"Expected {term.size} weights, got {len(weights)}"
            raise ValidationError(msg, [{"path": path, "message": msg}])
        if any(w < 0 for w in weights):
            msg = "Weights must be nonnegative"
            raise ValidationError(msg, [{"path": path, "message": msg}])
        if sum(weights) != 1:
            support = ", ".join(str(g) for g in term.support)
            msg = (
                f"Weights on the orbit of {{{support}}} sum to "
                f"{sum(weights)}, not 1"
            )
            raise ValidationError(msg, [{"path": path, "message": msg}])
        return weights


def _designated(term: LocalTerm, rule: DictatorRule) -> int:
    """Return the index ``i`` whose translate ``r_i⁻¹R`` is designated."""
    if rule is DictatorRule.SHORTLEX_MIN:
        translates = term.translates_containing_identity()
        keys = [support_key(t) for _, t in translates]
        return keys.index(min(keys))
    if not term.group.is_lattice:
        msg = f"The {rule} rule needs coordinate order on an integer lattice"
        raise UsageError(msg)
    ordered = sorted(range(term.size), key=lambda i: term.support[i].form)
    if rule is DictatorRule.LEX_MIN:
        return ordered[0]
    return ordered[(term.size + 1) // 2 - 1]


def translate_weight(
    interaction: Interaction,
    scheme: WeightScheme,
    tail_radius: int | None = None,
) -> LocalPotential:
    """Return ``A_Φ = −Σ_{Λ ∋ e} a_Λ Φ_Λ``.

    Each representative ``R`` contributes one term per translate
    ``r⁻¹R ∋ e`` with nonzero weight; the table of ``R`` is reused with the
    support aligned to ``r⁻¹R``. A radial tail is truncated first and its
    sup-norm bound carried as ``truncation_error``.

    Args:
    ----
        interaction: The interaction ``Φ``
        scheme: The weighting scheme
        tail_radius: Truncation radius for a radial tail

    Returns:
    -------
        The local potential ``A_Φ``

    """
    target = interaction
    truncation_error = 0.0
    if interaction.tail is not None:
        radius = settings.tail_radius if tail_radius is None else tail_radius
        logger.warning(
            "Radial tail truncated at radius %d before translate weighting",
            radius,
        )
        target = interaction.truncated(radius)
        tail = interaction.tail
        truncation_error = tail.tail_bound(radius) * tail.pair_sup
    terms = []
    for index, term in enumerate(target.terms):
        weights = scheme.weights_for(index, term)
        for weight, (_, translate) in zip(
            weights, term.translates_containing_identity(), strict=True
        ):
            if weight:
                terms.append(
                    PotentialTerm(translate, term.table, -float(weight))
                )
    return LocalPotential(
        interaction.group, interaction.alphabet, tuple(terms), truncation_error
    )


@dataclass(frozen=True)
class SameCocycleReport:
    """Largest cocycle discrepancies over randomized asymptotic pairs."""

    max_discrepancy: float
    interaction_vs_first: float
    first_vs_second: float
    pairs_tested: int
    semantics: Semantics
    schemes: tuple[str, str]


def check_same_cocycle(
    interaction: Interaction,
    first: WeightScheme,
    second: WeightScheme,
    sft: SFT | None = None,
    trials: int = 200,
    seed: int = 0,
    delta_radius: int = 2,
    semantics: Semantics = Semantics.LOCAL,
) -> SameCocycleReport:
    """Compare ``φ_Φ`` with ``φ_{A_Φ}`` under two schemes.

    Every trial samples an admissible window around ``B_n`` (``n`` is
    ``delta_radius``), a nonempty ``Δ ⊆ B_n`` and an admissible refilling
    of ``Δ``; the three cocycles are evaluated on the resulting pair.
    """
    if interaction.tail is not None:
        msg = "Cocycle comparison needs a finite-range interaction"
        raise UsageError(msg)
    shift = sft or SFT.full_shift(interaction.group, interaction.alphabet)
    semantics = shift.effective_semantics(semantics)
    f1 = translate_weight(interaction, first)
    f2 = translate_weight(interaction, second)
    reach = max(f1.radius, f2.radius)
    window = ball(interaction.group, delta_radius + 2 * reach + 1).elements()
    candidates = ball(interaction.group, delta_radius).elements()
    rng = np.random.default_rng(seed)
    worst_interaction = 0.0
    worst_schemes = 0.0
    for _ in range(trials):
        x = random_admissible_pattern(shift, window, rng, semantics=semantics)
        size = int(rng.integers(1, len(candidates) + 1))
        chosen = rng.choice(len(candidates), size=size, replace=False)
        delta = [candidates[int(i)] for i in chosen]
        fillings = enumerate_fillings(shift, delta, x.without(delta), semantics)
        y = x.override(fillings[int(rng.integers(len(fillings)))])
        phi = cocycle_interaction(interaction, x, y, delta).value
        phi1 = cocycle_potential(f1, x, y, delta).value
        phi2 = cocycle_potential(f2, x, y, delta).value
        worst_interaction = max(worst_interaction, abs(phi1 - phi))
        worst_schemes = max(worst_schemes, abs(phi1 - phi2))
    logger.debug(
        "Cocycle comparison over %d pairs: %.3e / %.3e",
        trials,
        worst_interaction,
        worst_schemes,
    )
    return SameCocycleReport(
        max(worst_interaction, worst_schemes),
        worst_interaction,
        worst_schemes,
        trials,
        semantics,
        (first.describe(), second.describe()),
    )


class PeriodicView(Mapping["Element", "Symbol"]):
    """A box pattern on ``Z^d`` read periodically."""

    def __init__(self, pattern: Pattern) -> None:
        """Check that the support is a full coordinate box."""
        self.pattern = pattern
        forms = [g.form for g in pattern.sites]
        self.low = tuple(min(c) for c in zip(*forms, strict=True))
        high = tuple(max(c) for c in zip(*forms, strict=True))
        self.sides = tuple(
            h - lo + 1 for lo, h in zip(self.low, high, strict=True)
        )
        if math.prod(self.sides) != len(pattern):
            msg = "Mean energies need a window that is a full coordinate box"
            raise DomainError(msg)

    def __getitem__(self, g: Element) -> Symbol:
        """Return the symbol at ``g`` reduced into the box."""
        form = tuple(
            (c - lo) % side + lo
            for c, lo, side in zip(g.form, self.low, self.sides, strict=True)
        )
        return self.pattern[g.group.element(form)]

    def __iter__(self) -> Iterator[Element]:
        """Iterate the box."""
        return iter(self.pattern)

    def __len__(self) -> int:
        """Return the box volume."""
        return len(self.pattern)


@dataclass(frozen=True)
class MeanEnergy:
    """``∫ A_Φ dμ`` and the weight-free closed form."""

    weighted: float
    closed_form: float
    scheme: str

    @property
    def deviation(self) -> float:
        """``|weighted − closed form|``."""
        return abs(self.weighted - self.closed_form)


def mean_energy(
    interaction: Interaction, measure: WindowMeasure, scheme: WeightScheme
) -> MeanEnergy:
    """Return ``∫ A_Φ dμ`` and ``−Σ_{Λ ∋ e} |Λ|⁻¹ ∫ Φ_Λ dμ``.

    The window measure is made shift-invariant by reading each pattern
    periodically on its box and averaging over all box translates; the two
    values then agree for every scheme.

    Raises:
    ------
        UsageError: Off integer lattices or for radial tails
        DomainError: If the window is not a coordinate box

    """
    if not interaction.group.is_lattice:
        msg = "Mean energies use periodic boxes on integer lattices"
        raise UsageError(msg)
    if interaction.tail is not None:
        msg = "Mean energies need a finite-range interaction"
        raise UsageError(msg)
    potential = translate_weight(interaction, scheme)
    weighted = []
    closed = []
    for pattern, probability in measure.items():
        view = PeriodicView(pattern)
        volume = len(view)
        for t in pattern.sites:
            value = potential.evaluate(view, at=t)
            weighted.append(probability * value / volume)
            for term in interaction.terms:
                energy = term.value(view, at=t)
                closed.append(-probability * energy / volume)
    return MeanEnergy(math.fsum(weighted), math.fsum(closed), scheme.describe())


def interaction_from_potential(f: Potential) -> Interaction:
    """Return ``Φ`` with ``Φ_{B_r} = −f`` and no other representative.

    ``B_r`` is its own designated translate under the shortlex-min dictator
    rule, so weighting ``Φ`` that way returns ``f`` exactly.

    Raises:
    ------
        UsageError: For series potentials
        ResourceError: If ``|A|^|B_r|`` exceeds the enumeration budget

    """
    if isinstance(f, SeriesPotential):
        msg = "Only local potentials have a constructive preimage"
        raise UsageError(msg)
    region = ball(f.group, f.radius).elements()
    count = len(f.alphabet) ** len(region)
    if count > settings.max_fillings:
        msg = f"Tabulating {count} patterns on B_{f.radius} exceeds the budget"
        raise ResourceError(msg)
    table: dict[tuple[Symbol, ...], float] = {}
    for symbols in itertools.product(f.alphabet.symbols, repeat=len(region)):
        value = f.evaluate(dict(zip(region, symbols, strict=True)))
        if value:
            table[symbols] = -value
    terms = (LocalTerm(region, table),) if table else ()
    return Interaction(f.group, f.alphabet, terms)


@dataclass(frozen=True)
class FullDimensionalBound:
    """``‖A_Φ‖ <= 2C‖Φ‖_B`` with its margin."""

    shell_norm: float
    constant: float
    b_norm: float
    scheme: str

    @property
    def bound(self) -> float:
        """``2C‖Φ‖_B``."""
        return 2 * self.constant * self.b_norm

    @property
    def margin(self) -> float:
        """``bound − shell norm``; nonnegative when the bound holds."""
        return self.bound - self.shell_norm

    @property
    def holds(self) -> bool:
        """Whether the shell norm stays within the bound."""
        return self.margin >= -settings.tolerance


def full_dimensional_bound(
    interaction: Interaction,
    scheme: WeightScheme,
    sft: SFT | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> FullDimensionalBound:
    """Compare the shell norm of ``A_Φ`` with ``2C‖Φ‖_B``."""
    potential = translate_weight(interaction, scheme)
    balls = ball(interaction.group, potential.radius + 1)
    report = shell_norm(
        potential, balls, potential.radius, sft=sft, semantics=semantics
    )
    check = is_full_dimensional(interaction, balls)
    return FullDimensionalBound(
        report.value,
        check.constant,
        b_norm(interaction).value,
        scheme.describe(),
    )


@dataclass(frozen=True)
class Counterexample:
    """The inverse-square pair interaction and its dictator image."""

    interaction: Interaction
    radius: int
    b_norm: BNorm
    potential: SeriesPotential
    norm: NormReport


def _tail_variation(k: int) -> float:
    return float(zeta(2, max(k, 1)))


def _harmonic_minorant(k: int) -> float:
    return 1.0 / k if k >= 1 else 0.0


def counterexample_interaction(radius: int) -> Counterexample:
    """Build ``Φ_{{i,j}}(x) = 1/(j−i)²`` when ``x_i = x_j = 1`` on ``Z``.

    ``‖Φ‖_B = 2Σ 1/j²`` is finite, but the image under the dictator that
    keeps ``Λ`` only when ``0 = min Λ`` has ``v_k = Σ_{l>=k} 1/l²`` and a
    shell norm bounded below by ``2Σ 1/k``.

    Args:
    ----
        radius: Truncation radius ``R`` for the interaction and its image

    Returns:
    -------
        The interaction, its B-norm partial sum, the image and its shell
        norm report with a divergence certificate

    """
    if radius < 1:
        msg = f"Truncation radius must be >= 1, got {radius}"
        raise UsageError(msg)
    group = GroupSpec.parse("Z")
    alphabet = Alphabet((0, 1))
    tail = RadialTail({(1, 1): 1.0}, 1.0, 2.0, "2/n", "inverse-square")
    interaction = Interaction(group, alphabet, (), tail)
    norm_b = b_norm(interaction, radius=radius)
    scheme = WeightScheme(SchemeKind.DICTATOR, DictatorRule.LEX_MIN)
    image = translate_weight(interaction, scheme, tail_radius=radius)
    potential = SeriesPotential(
        group,
        alphabet,
        (image,),
        variation_bound=_tail_variation,
        variation_minorant=_harmonic_minorant,
        minorant_label="1/k",
        minorant_divergent=True,
        remainder_sup=float(zeta(2, radius + 1)),
        remainder_shell=math.inf,
    )
    report = shell_norm(potential, ball(group, 1), settings.divergence_horizon)
    logger.debug(
        "Inverse-square pair interaction at R=%d: B-norm partial %.6f",
        radius,
        norm_b.value,
    )
    return Counterexample(interaction, radius, norm_b, potential, report)

