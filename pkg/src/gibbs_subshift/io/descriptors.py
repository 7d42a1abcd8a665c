"""Descriptor Parser Module.

Contains the DescriptorParser class for the textual forms of elements,
windows, boundaries and table keys used on the command line and in JSON
files.
"""

from __future__ import annotations

import itertools
import re
from typing import TYPE_CHECKING

from gibbs_subshift.errors import ValidationError
from gibbs_subshift.groups import GroupFamily, ball
from gibbs_subshift.groups.elements import FREE_LETTERS
from gibbs_subshift.shifts import Pattern

if TYPE_CHECKING:
    from collections.abc import Iterable

    from gibbs_subshift.groups import Element, GroupSpec
    from gibbs_subshift.shifts import SFT, Alphabet, Symbol

RANGE_PATTERN = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")
TUPLE_PATTERN = re.compile(r"^\s*\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)?\s*$")


class DescriptorParser:
    """Parser for element, window, boundary and table-key descriptors."""

    @staticmethod
    def parse_element(spec: GroupSpec, text: str | int | list[int]) -> Element:
        """Parse one element.

        Args:
        ----
            spec: The group the element belongs to
            text: ``"3"`` on ``Z``, ``"(1,-2)"`` on lattices and the
                Heisenberg group, a word such as ``"aB"`` (or ``"e"``) on free
                groups; JSON integers and lists are accepted as well

        Returns:
        -------
            The element in normal form

        Raises:
        ------
            ValidationError: If the descriptor does not name an element

        """
        if isinstance(text, bool):
            msg = f"Invalid element descriptor {text!r}"
            raise ValidationError(msg)
        if isinstance(text, int):
            return spec.element((text,))
        if isinstance(text, list):
            return spec.element(text)
        if spec.family is GroupFamily.FREE:
            return DescriptorParser._parse_word(spec, text)
        match = TUPLE_PATTERN.match(text)
        if match is None:
            msg = f"Invalid element descriptor {text!r} for {spec.describe()}"
            raise ValidationError(msg)
        values = [int(v) for v in match.group(1).split(",")]
        return spec.element(values)

    @staticmethod
    def _parse_word(spec: GroupSpec, text: str) -> Element:
        """Parse a free-group word, uppercase letters being inverses."""
        word = text.strip()
        if word in {"", "e"}:
            return spec.identity
        letters = []
        for char in word:
            index = FREE_LETTERS.find(char.lower())
            if index < 0:
                msg = f"Invalid letter {char!r} in word {text!r}"
                raise ValidationError(msg)
            letters.append(-(index + 1) if char.isupper() else index + 1)
        return spec.element(letters)

    @staticmethod
    def parse_window(spec: GroupSpec, text: str) -> list[Element]:
        """Parse a finite set of elements.

        Accepted forms are ``"a..b"`` on ``Z``, ``"ball:k"`` for ``B_k``,
        ``"box:a..b,c..d"`` for coordinate boxes on ``Z^d`` and explicit
        ``;``-separated element lists.
        """
        text = text.strip()
        # Ball around the identity
        if text.startswith("ball:"):
            try:
                radius = int(text.removeprefix("ball:"))
            except ValueError:
                msg = f"Invalid ball radius in {text!r}"
                raise ValidationError(msg) from None
            return list(ball(spec, radius).elements())
        # Coordinate box
        if text.startswith("box:"):
            return DescriptorParser._parse_box(spec, text.removeprefix("box:"))
        # Interval on Z
        match = RANGE_PATTERN.match(text)
        if match is not None:
            low, high = int(match.group(1)), int(match.group(2))
            if not spec.is_lattice or spec.rank != 1 or low > high:
                msg = f"Interval window {text!r} needs Z and low <= high"
                raise ValidationError(msg)
            return [spec.element((i,)) for i in range(low, high + 1)]
        # Explicit list
        parts = [p for p in text.split(";") if p.strip()]
        if not parts:
            msg = "Window descriptor is empty"
            raise ValidationError(msg)
        return sorted({DescriptorParser.parse_element(spec, p) for p in parts})

    @staticmethod
    def _parse_box(spec: GroupSpec, text: str) -> list[Element]:
        """Parse ``a..b,c..d`` into the product of the intervals."""
        ranges = []
        for part in text.split(","):
            match = RANGE_PATTERN.match(part)
            if match is None:
                msg = f"Invalid box interval {part!r}"
                raise ValidationError(msg)
            low, high = int(match.group(1)), int(match.group(2))
            ranges.append(range(low, high + 1))
        if not spec.is_lattice or len(ranges) != spec.rank:
            msg = f"Box windows need {spec.rank} intervals on a lattice"
            raise ValidationError(msg)
        return sorted(
            spec.element(form) for form in itertools.product(*ranges)
        )

    @staticmethod
    def parse_boundary(
        sft: SFT,
        text: str,
        region: Iterable[Element],
        thickness: int | None = None,
    ) -> Pattern:
        """Parse a boundary pattern around ``region``.

        ``const:s`` fills the collar of the requested thickness with ``s``;
        ``g=s`` items (separated by ``;``) set single sites and override a
        preceding ``const`` item.
        """
        spec = sft.group
        sites = frozenset(region)
        assignment: dict[Element, Symbol] = {}
        for item in (p.strip() for p in text.split(";")):
            if not item:
                continue
            if item.startswith("const:"):
                symbol = sft.alphabet.parse(item.removeprefix("const:"))
                for g in sft.collar(sites, thickness):
                    assignment[g] = symbol
                continue
            site, sep, value = item.rpartition("=")
            if not sep:
                msg = f"Invalid boundary item {item!r}"
                raise ValidationError(msg)
            g = DescriptorParser.parse_element(spec, site)
            if g in sites:
                msg = f"Boundary site {g} lies inside the window"
                raise ValidationError(msg)
            assignment[g] = sft.alphabet.parse(value)
        return Pattern(assignment)

    @staticmethod
    def parse_key(alphabet: Alphabet, key: str | list) -> tuple[Symbol, ...]:
        """Parse a table key such as ``"1,-1"`` into symbols."""
        parts = key if isinstance(key, list) else str(key).split(",")
        return tuple(alphabet.parse(str(p)) for p in parts)

    @staticmethod
    def format_key(symbols: Iterable[Symbol]) -> str:
        """Format symbols as a table key."""
        return ",".join(str(s) for s in symbols)
