"""Translation-Invariant Interactions.

An :class:`Interaction` is stored by orbit representatives: each
:class:`LocalTerm` has a support containing the identity and an energy table,
and the family ``Φ_{gR}(g·x) = Φ_R(x)`` is recovered by translation. An
optional :class:`RadialTail` adds a summable pair interaction whose omitted
part is controlled by a caller-supplied analytic bound.
"""

from __future__ import annotations

import logging
import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import TYPE_CHECKING

from gibbs_subshift.config import settings
from gibbs_subshift.errors import DomainError, UsageError, ValidationError
from gibbs_subshift.groups import ball, ball_sizes, shell_sizes, word_length
from gibbs_subshift.shifts import Pattern, WindowConfig, as_configuration

if TYPE_CHECKING:
    from gibbs_subshift.groups import BallTable, Element, GroupSpec
    from gibbs_subshift.shifts import Alphabet, Symbol

logger = logging.getLogger(__name__)

TAIL_BOUND_PATTERN = re.compile(
    r"^\s*(?P<scale>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*/\s*n"
    r"(?:\s*(?:\^|\*\*)\s*(?P<power>[0-9]*\.?[0-9]+))?\s*$"
)


def read_symbols(
    config: Mapping[Element, Symbol], sites: Iterable[Element]
) -> tuple[Symbol, ...]:
    """Read the symbols at ``sites``, naming the first missing coordinate."""
    values = []
    for g in sites:
        try:
            values.append(config[g])
        except KeyError:
            msg = f"Window does not determine the coordinate at {g}"
            raise DomainError(msg) from None
    return tuple(values)


@dataclass(frozen=True)
class LocalTerm:
    """One orbit representative ``Φ_R`` with ``e ∈ R``.

    Table keys list symbols in the order of :attr:`support`; missing keys
    carry zero energy.
    """

    support: tuple[Element, ...]
    table: Mapping[tuple[Symbol, ...], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate the support and freeze the table."""
        if not self.support:
            msg = "Interaction supports must be nonempty"
            raise ValidationError(msg)
        if len(set(self.support)) != len(self.support):
            msg = "Interaction support elements must be distinct"
            raise ValidationError(msg)
        if self.support[0].group.identity not in self.support:
            msg = "Representative supports must contain the identity"
            raise ValidationError(msg)
        for key in self.table:
            if len(key) != len(self.support):
                msg = (
                    f"Table key {key!r} has {len(key)} symbols for a support "
                    f"of size {len(self.support)}"
                )
                raise ValidationError(msg)
        frozen = MappingProxyType({k: float(v) for k, v in self.table.items()})
        object.__setattr__(self, "table", frozen)

    @property
    def group(self) -> GroupSpec:
        """The group of the support."""
        return self.support[0].group

    @property
    def size(self) -> int:
        """``|R|``."""
        return len(self.support)

    @cached_property
    def sup_norm(self) -> float:
        """``‖Φ_R‖_∞``."""
        return max((abs(v) for v in self.table.values()), default=0.0)

    @property
    def is_zero(self) -> bool:
        """Whether every table entry vanishes."""
        return self.sup_norm == 0.0

    def value(
        self, config: Mapping[Element, Symbol], at: Element | None = None
    ) -> float:
        """Return ``Φ_{hR}(x) = Φ_R(h⁻¹·x)``, reading ``x`` on ``h·R``."""
        sites = self.support if at is None else [at * s for s in self.support]
        return self.table.get(read_symbols(config, sites), 0.0)

    def translates_containing_identity(
        self,
    ) -> list[tuple[Element, tuple[Element, ...]]]:
        """Return ``(r, r⁻¹R)`` for each ``r ∈ R``, aligned with the table.

        These are the members of the translate class ``T(R)``.
        """
        return [
            (r, tuple(r.inverse() * s for s in self.support))
            for r in self.support
        ]

    @cached_property
    def max_length(self) -> int:
        """Largest word length in any translate of ``R`` containing ``e``."""
        return max(
            word_length(g)
            for _, translate in self.translates_containing_identity()
            for g in translate
        )

    def scaled(self, alpha: float) -> LocalTerm:
        """Return ``α·Φ_R``."""
        return LocalTerm(
            self.support, {k: alpha * v for k, v in self.table.items()}
        )


@dataclass(frozen=True)
class RadialTail:
    """A radial pair interaction ``J(k) · pair_table[(x_g, x_h)]``.

    ``J(k) = coefficient / k**exponent`` for pairs at word distance ``k``;
    the tail bound formula ``"s/n^q"`` majorizes ``Σ_{k>n} |S_k| |J(k)|``.
    """

    pair_table: Mapping[tuple[Symbol, Symbol], float]
    coefficient: float = 1.0
    exponent: float = 2.0
    tail_bound_formula: str = "2/n"
    profile: str = "inverse-square"

    def __post_init__(self) -> None:
        """Validate symmetry and the tail formula."""
        table = {tuple(k): float(v) for k, v in self.pair_table.items()}
        for (a, b), value in table.items():
            if table.get((b, a), 0.0) != value:
                msg = f"Pair table is not symmetric at {(a, b)!r}"
                raise ValidationError(
                    msg, [{"path": "tail.pair_table", "message": msg}]
                )
        if self.exponent <= 0:
            msg = "Tail exponent must be positive"
            raise ValidationError(
                msg, [{"path": "tail.exponent", "message": msg}]
            )
        if TAIL_BOUND_PATTERN.match(self.tail_bound_formula) is None:
            msg = (
                f"Tail bound formula {self.tail_bound_formula!r} must look "
                "like 's/n' or 's/n^q'"
            )
            raise ValidationError(
                msg, [{"path": "tail.tail_bound_formula", "message": msg}]
            )
        object.__setattr__(self, "pair_table", MappingProxyType(table))

    def coupling(self, k: int) -> float:
        """Return ``J(k)``."""
        return self.coefficient / k**self.exponent

    @cached_property
    def pair_sup(self) -> float:
        """``max |pair_table|``."""
        return max((abs(v) for v in self.pair_table.values()), default=0.0)

    def tail_bound(self, n: int) -> float:
        """Return ``T(n)``; ``T(0)`` is infinite."""
        if n <= 0:
            return math.inf
        match = TAIL_BOUND_PATTERN.match(self.tail_bound_formula)
        assert match is not None
        scale = float(match.group("scale"))
        power = float(match.group("power") or 1.0)
        return scale / n**power


@dataclass(frozen=True)
class HamiltonianValue:
    """``H_Λ(x)`` together with the bound on the omitted tail."""

    value: float
    truncation_error: float = 0.0


@dataclass(frozen=True)
class CocycleValue:
    """A cocycle value together with its error bound."""

    value: float
    error: float = 0.0


@dataclass(frozen=True)
class Interaction:
    """A translation-invariant interaction."""

    group: GroupSpec
    alphabet: Alphabet
    terms: tuple[LocalTerm, ...] = ()
    tail: RadialTail | None = None

    def __post_init__(self) -> None:
        """Validate term groups and symbols."""
        diagnostics = []
        for i, term in enumerate(self.terms):
            if term.group != self.group:
                diagnostics.append(
                    {
                        "path": f"terms[{i}].support",
                        "message": f"elements are not in {self.group}",
                    }
                )
            for key in term.table:
                bad = [s for s in key if s not in self.alphabet]
                if bad:
                    diagnostics.append(
                        {
                            "path": f"terms[{i}].table",
                            "message": f"unknown symbols {bad!r}",
                        }
                    )
        if diagnostics:
            msg = "; ".join(f"{d['path']}: {d['message']}" for d in diagnostics)
            raise ValidationError(msg, diagnostics)

    @property
    def is_finite_range(self) -> bool:
        """Whether there is no radial tail."""
        return self.tail is None

    @property
    def is_zero(self) -> bool:
        """Whether ``Φ ≡ 0``."""
        tail_zero = self.tail is None or self.tail.pair_sup == 0.0
        return tail_zero and all(t.is_zero for t in self.terms)

    def scaled(self, alpha: float) -> Interaction:
        """Return ``α·Φ`` for a finite-range interaction."""
        if self.tail is not None:
            msg = "Scaling is only supported for finite-range interactions"
            raise UsageError(msg)
        terms = tuple(t.scaled(alpha) for t in self.terms)
        return Interaction(self.group, self.alphabet, terms)

    def __add__(self, other: Interaction) -> Interaction:
        """Return ``Φ + Ψ`` for finite-range interactions on one shift."""
        if (self.group, self.alphabet) != (other.group, other.alphabet):
            msg = "Interactions live on different shifts"
            raise UsageError(msg)
        if self.tail is not None or other.tail is not None:
            msg = "Addition is only supported for finite-range interactions"
            raise UsageError(msg)
        return Interaction(self.group, self.alphabet, self.terms + other.terms)

    def truncated(self, radius: int) -> Interaction:
        """Return the finite-range part keeping tail pairs up to ``radius``.

        Each pair orbit ``{e, h}`` (equal to ``{h⁻¹, e}`` up to translation)
        becomes one local term.
        """
        if self.tail is None:
            return self
        tail = self.tail
        terms = list(self.terms)
        identity = self.group.identity
        seen: set[Element] = set()
        for h in ball(self.group, radius + 1).elements():
            if h == identity or h.inverse() in seen:
                continue
            seen.add(h)
            coupling = tail.coupling(word_length(h))
            table = {k: coupling * v for k, v in tail.pair_table.items()}
            terms.append(LocalTerm((identity, h), table))
        logger.debug(
            "Truncated radial tail at radius %d into %d pair terms",
            radius,
            len(seen),
        )
        return Interaction(self.group, self.alphabet, tuple(terms))


def interaction_translates(
    interaction: Interaction, region: Iterable[Element]
) -> list[tuple[int, Element]]:
    """Return ``(term index, h)`` for every translate ``h·R`` meeting ``Λ``."""
    sites = sorted(set(region))
    seen: set[tuple[int, Element]] = set()
    result = []
    for index, term in enumerate(interaction.terms):
        for site in sites:
            for s in term.support:
                key = (index, site * s.inverse())
                if key not in seen:
                    seen.add(key)
                    result.append(key)
    return result


def energy_of_translates(
    interaction: Interaction,
    translates: Iterable[tuple[int, Element]],
    config: Mapping[Element, Symbol],
) -> float:
    """Sum ``Φ_{hR}(x)`` over the given translates."""
    return math.fsum(
        interaction.terms[index].value(config, at=h) for index, h in translates
    )


def _tail_energy(
    tail: RadialTail,
    group: GroupSpec,
    sites: list[Element],
    config: Mapping[Element, Symbol],
    radius: int,
) -> float:
    offsets = [h for h in ball(group, radius + 1).elements() if h.length > 0]
    seen: set[frozenset[Element]] = set()
    energies = []
    for site in sites:
        for h in offsets:
            other = site * h
            pair = frozenset((site, other))
            if pair in seen:
                continue
            seen.add(pair)
            a, b = read_symbols(config, (site, other))
            value = tail.pair_table.get((a, b), 0.0)
            if value:
                energies.append(tail.coupling(h.length) * value)
    return math.fsum(energies)


def hamiltonian(
    interaction: Interaction,
    region: Iterable[Element],
    window: WindowConfig | Pattern,
    tail_radius: int | None = None,
) -> HamiltonianValue:
    """Evaluate ``H_Λ(x) = Σ_{Δ ∩ Λ ≠ ∅} Φ_Δ(x)`` on a window.

    Args:
    ----
        interaction: The interaction ``Φ``
        region: The finite set ``Λ``
        window: Window determining every coordinate the sum touches
        tail_radius: Truncation radius of the radial tail; defaults to the
            ``tail_radius`` setting

    Returns:
    -------
        The energy and the bound ``|Λ| · T(R) · sup|pair|`` on the omitted
        tail (zero for finite range)

    Raises:
    ------
        DomainError: If the window misses a required coordinate

    """
    sites = sorted(set(region))
    config = as_configuration(window)
    translates = interaction_translates(interaction, sites)
    value = energy_of_translates(interaction, translates, config)
    error = 0.0
    tail = interaction.tail
    if tail is not None and sites:
        radius = settings.tail_radius if tail_radius is None else tail_radius
        value += _tail_energy(tail, interaction.group, sites, config, radius)
        error = len(sites) * tail.tail_bound(radius) * tail.pair_sup
    return HamiltonianValue(value, error)


@dataclass(frozen=True)
class BNorm:
    """``‖Φ‖_B`` evaluated up to a tail radius."""

    value: float
    tail_bound: float
    radius: int | None


def b_norm(interaction: Interaction, radius: int | None = None) -> BNorm:
    """Return ``‖Φ‖_B = Σ_{Λ ∋ e} ‖Φ_Λ‖_∞``.

    Every representative contributes ``|R| · ‖Φ_R‖_∞`` (one copy per
    translate through ``e``). A radial tail contributes
    ``Σ_{1 ≤ k ≤ R} |S_k| |J(k)| sup|pair|`` plus its analytic tail bound.
    """
    value = math.fsum(t.size * t.sup_norm for t in interaction.terms)
    tail = interaction.tail
    if tail is None:
        return BNorm(value, 0.0, None)
    cutoff = settings.tail_radius if radius is None else radius
    sizes = shell_sizes(interaction.group, cutoff)
    partial = math.fsum(
        sizes[k] * abs(tail.coupling(k)) * tail.pair_sup
        for k in range(1, cutoff + 1)
    )
    return BNorm(
        value + partial, tail.tail_bound(cutoff) * tail.pair_sup, cutoff
    )


@dataclass(frozen=True)
class FullDimensionality:
    """Outcome of the full-dimensionality check."""

    holds: bool
    constant: float
    witness: tuple[Element, ...] | None = None
    truncation_radius: int | None = None


def is_full_dimensional(
    interaction: Interaction, balls: BallTable
) -> FullDimensionality:
    """Find the least ``C`` with ``sup{|B_n| : Λ ⊄ B_{n-1}} <= C |Λ|``.

    The supremum runs over every translate ``Λ ∋ e`` of every nonzero
    representative; for such ``Λ`` it equals ``|B_{L+1}|`` where ``L`` is the
    largest word length in ``Λ``. A radial tail is evaluated on its
    truncation at ``balls.radius - 1`` and never certifies the property.
    """
    target = interaction
    radius = None
    if interaction.tail is not None:
        radius = max(balls.radius - 1, 1)
        logger.warning(
            "Full-dimensionality of a radial tail evaluated on its "
            "truncation at radius %d",
            radius,
        )
        target = interaction.truncated(radius)
    best = Fraction(0)
    witness = None
    needed = max((t.max_length + 1 for t in target.terms), default=1)
    sizes = (
        [balls.ball_size(k) for k in range(needed + 1)]
        if needed <= balls.radius
        else ball_sizes(interaction.group, needed)
    )
    for term in target.terms:
        if term.is_zero:
            continue
        ratio = Fraction(sizes[term.max_length + 1], term.size)
        if ratio > best:
            best = ratio
            witness = term.support
    holds = interaction.tail is None
    return FullDimensionality(holds, float(best), witness, radius)


def cocycle_interaction(
    interaction: Interaction,
    window_x: WindowConfig | Pattern,
    window_y: WindowConfig | Pattern,
    delta: Iterable[Element],
    tail_radius: int | None = None,
) -> CocycleValue:
    """Return ``φ_Φ(x, y) = H_Δ(x) − H_Δ(y)``.

    Raises:
    ------
        UsageError: If the windows disagree outside ``Δ``

    """
    sites = frozenset(delta)
    x = as_configuration(window_x)
    y = as_configuration(window_y)
    require_agreement(x, y, sites)
    hx = hamiltonian(interaction, sites, x, tail_radius)
    hy = hamiltonian(interaction, sites, y, tail_radius)
    return CocycleValue(
        hx.value - hy.value, hx.truncation_error + hy.truncation_error
    )


def require_agreement(
    x: Mapping[Element, Symbol],
    y: Mapping[Element, Symbol],
    delta: frozenset[Element],
) -> None:
    """Raise UsageError unless ``x`` and ``y`` agree outside ``Δ``."""
    for g in (x.keys() & y.keys()) - delta:
        if x[g] != y[g]:
            msg = f"Windows disagree outside Δ at {g}"
            raise UsageError(msg)
