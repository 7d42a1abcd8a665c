"""Patterns and Window Configurations.

A :class:`Pattern` is a finite partial configuration ``Λ → A``; a
:class:`WindowConfig` pairs an interior pattern with the boundary collar that
stands in for the fixed exterior of a point of the subshift.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

from gibbs_subshift.errors import UsageError, ValidationError

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element

logger = logging.getLogger(__name__)

type Symbol = int | str


@dataclass(frozen=True)
class Alphabet:
    """A finite ordered alphabet."""

    symbols: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        """Validate that the alphabet is nonempty with distinct symbols."""
        if not self.symbols:
            msg = "Alphabet must be nonempty"
            raise ValidationError(msg, [{"path": "alphabet", "message": msg}])
        if len(set(self.symbols)) != len(self.symbols):
            msg = f"Alphabet symbols must be distinct: {list(self.symbols)}"
            raise ValidationError(msg, [{"path": "alphabet", "message": msg}])

    def __len__(self) -> int:
        """Return ``|A|``."""
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        """Iterate symbols in alphabet order."""
        return iter(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        """Whether ``symbol`` belongs to the alphabet."""
        return symbol in self.symbols

    def index(self, symbol: Symbol) -> int:
        """Return the position of ``symbol`` in alphabet order."""
        return self.symbols.index(symbol)

    def parse(self, text: str) -> Symbol:
        """Return the symbol whose string form is ``text``."""
        for symbol in self.symbols:
            if str(symbol) == text.strip():
                return symbol
        msg = f"Symbol {text!r} is not in the alphabet {list(self.symbols)}"
        raise ValidationError(msg)


class Pattern(Mapping["Element", Symbol]):
    """An immutable assignment of symbols to a finite set of group elements.

    Iteration follows the shortlex order of the support, so two equal
    patterns always iterate identically.
    """

    def __init__(
        self,
        assignment: Mapping[Element, Symbol]
        | Iterable[tuple[Element, Symbol]] = (),
    ) -> None:
        """Initialize the pattern.

        Args:
        ----
            assignment: Mapping or pairs from elements to symbols

        """
        data = dict(assignment)
        groups = {g.group for g in data}
        if len(groups) > 1:
            names = sorted(str(g) for g in groups)
            msg = f"Pattern mixes elements of {', '.join(names)}"
            raise UsageError(msg)
        self._data = data
        self._sites = tuple(sorted(data))

    def __getitem__(self, g: Element) -> Symbol:
        """Return the symbol at ``g``."""
        return self._data[g]

    def __iter__(self) -> Iterator[Element]:
        """Iterate the support in shortlex order."""
        return iter(self._sites)

    def __len__(self) -> int:
        """Return the size of the support."""
        return len(self._sites)

    def __eq__(self, other: object) -> bool:
        """Compare assignments."""
        if isinstance(other, Pattern):
            return self._data == other._data
        return NotImplemented

    def __hash__(self) -> int:
        """Hash the assignment."""
        return hash(frozenset(self._data.items()))

    def __repr__(self) -> str:
        """Return a compact representation."""
        body = ", ".join(f"{g}: {s!r}" for g, s in self.items())
        return f"Pattern({{{body}}})"

    @property
    def sites(self) -> tuple[Element, ...]:
        """The support in shortlex order."""
        return self._sites

    @cached_property
    def support(self) -> frozenset[Element]:
        """The support as a set."""
        return frozenset(self._data)

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        """Symbols in support order."""
        return tuple(self._data[g] for g in self._sites)

    def restrict(self, region: Iterable[Element]) -> Pattern:
        """Return the restriction to ``region ∩ support``."""
        return Pattern(
            (g, self._data[g]) for g in region if g in self._data
        )

    def without(self, region: Iterable[Element]) -> Pattern:
        """Return the restriction to ``support ∖ region``."""
        excluded = set(region)
        return Pattern(
            (g, s) for g, s in self._data.items() if g not in excluded
        )

    def merge(self, other: Pattern) -> Pattern:
        """Return the union of two patterns that agree on their overlap.

        Raises:
        ------
            UsageError: If the patterns disagree somewhere

        """
        for g in self.support & other.support:
            if self._data[g] != other[g]:
                msg = (
                    f"Patterns disagree at {g}: "
                    f"{self._data[g]!r} vs {other[g]!r}"
                )
                raise UsageError(msg)
        data = dict(self._data)
        data.update(other.items())
        return Pattern(data)

    def override(self, other: Pattern) -> Pattern:
        """Return this pattern with ``other``'s symbols written over it."""
        data = dict(self._data)
        data.update(other.items())
        return Pattern(data)

    def shifted(self, g: Element) -> Pattern:
        """Return ``g · p`` with ``(g·p)(g·h) = p(h)``."""
        return Pattern((g * h, s) for h, s in self._data.items())

    def agrees_with(self, other: Mapping[Element, Symbol]) -> bool:
        """Whether ``other`` carries this pattern on its support."""
        return all(other.get(g) == s for g, s in self._data.items())


def shift_pattern(g: Element, p: Pattern) -> Pattern:
    """Return the shifted pattern ``g · p``.

    Its support is ``g · supp(p)`` and ``(g·p)(h) = p(g⁻¹h)``.
    """
    return p.shifted(g)


@dataclass(frozen=True)
class WindowConfig:
    """An interior pattern together with its boundary collar."""

    interior: Pattern
    boundary: Pattern

    def __post_init__(self) -> None:
        """Check that interior and boundary are disjoint."""
        overlap = self.interior.support & self.boundary.support
        if overlap:
            sites = ", ".join(str(g) for g in sorted(overlap))
            msg = f"Interior and boundary overlap at {sites}"
            raise UsageError(msg)

    @cached_property
    def configuration(self) -> Pattern:
        """The union of interior and boundary."""
        return self.interior.merge(self.boundary)

    @property
    def region(self) -> frozenset[Element]:
        """The interior support ``Λ``."""
        return self.interior.support

    def with_interior(self, pattern: Pattern) -> WindowConfig:
        """Return a copy with ``pattern`` written over the interior."""
        outside = pattern.support - self.interior.support
        if outside:
            sites = ", ".join(str(g) for g in sorted(outside))
            msg = f"Pattern reaches outside the interior at {sites}"
            raise UsageError(msg)
        return WindowConfig(self.interior.override(pattern), self.boundary)

    def shifted(self, g: Element) -> WindowConfig:
        """Return the window translated by ``g``."""
        return WindowConfig(self.interior.shifted(g), self.boundary.shifted(g))


def as_configuration(window: WindowConfig | Pattern) -> Pattern:
    """Return the full pattern carried by a window or pattern."""
    if isinstance(window, WindowConfig):
        return window.configuration
    return window
