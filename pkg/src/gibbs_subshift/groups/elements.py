"""Group Elements Module.

Defines the built-in finitely generated groups (integer lattices, free groups
and the discrete Heisenberg group), their elements in normal form, the word
metric with respect to a symmetric generating set, and the shortlex order
used for every deterministic iteration in the library.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING

from gibbs_subshift.config import settings
from gibbs_subshift.errors import ResourceError, UsageError, ValidationError

from .mixins import ShortlexOrderMixin

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)

# Letters naming free generators; "e" is reserved for the identity.
FREE_LETTERS = "abcdfghijklmnopqrstuvwxyz"


class GroupFamily(StrEnum):
    """Built-in group families."""

    LATTICE = "lattice"
    FREE = "free"
    HEISENBERG = "heisenberg"


class GeneratorSet(StrEnum):
    """Choice of symmetric generating set."""

    STANDARD = "standard"
    BOX = "box"


@dataclass(frozen=True)
class GroupSpec:
    """A built-in group together with its generating set.

    Generators are listed in pairs ``s, s⁻¹``; their position in
    :attr:`generators` is the letter order used by the shortlex key.
    """

    family: GroupFamily
    rank: int = 1
    generator_set: GeneratorSet = GeneratorSet.STANDARD

    def __post_init__(self) -> None:
        """Validate the family parameters."""
        if self.family is GroupFamily.HEISENBERG:
            object.__setattr__(self, "rank", 3)
        elif self.rank < 1:
            msg = f"Group rank must be >= 1, got {self.rank}"
            raise ValidationError(msg, [{"path": "group", "message": msg}])
        if self.family is GroupFamily.FREE and self.rank > len(FREE_LETTERS):
            msg = f"Free groups of rank > {len(FREE_LETTERS)} are not supported"
            raise ValidationError(msg, [{"path": "group", "message": msg}])
        if (
            self.generator_set is GeneratorSet.BOX
            and self.family is not GroupFamily.LATTICE
        ):
            msg = "Box generators are only defined for integer lattices"
            raise ValidationError(msg, [{"path": "group", "message": msg}])

    @classmethod
    def parse(cls, descriptor: str) -> GroupSpec:
        """Parse a group descriptor such as ``Z``, ``Z^2:box``, ``F2`` or ``H``.

        Args:
        ----
            descriptor: The textual group descriptor

        Returns:
        -------
            The corresponding group specification

        """
        text = descriptor.strip().replace(" ", "")
        name, _, gens = text.partition(":")
        generator_set = GeneratorSet.STANDARD
        if gens:
            try:
                generator_set = GeneratorSet(gens.lower())
            except ValueError:
                msg = f"Unknown generating set {gens!r} in {descriptor!r}"
                raise ValidationError(
                    msg, [{"path": "group", "message": msg}]
                ) from None
        if name in {"H", "H3", "Heisenberg", "heisenberg"}:
            return cls(GroupFamily.HEISENBERG, 3, generator_set)
        head, digits = name[:1], name[1:].lstrip("^_")
        if head in {"Z", "F"} and (digits == "" or digits.isdigit()):
            rank = int(digits) if digits else 1
            family = GroupFamily.LATTICE if head == "Z" else GroupFamily.FREE
            if family is GroupFamily.FREE and not digits:
                rank = 2
            return cls(family, rank, generator_set)
        msg = f"Unknown group descriptor {descriptor!r}"
        raise ValidationError(msg, [{"path": "group", "message": msg}])

    def describe(self) -> str:
        """Return the canonical descriptor of the group."""
        if self.family is GroupFamily.HEISENBERG:
            return "H"
        if self.family is GroupFamily.FREE:
            return f"F{self.rank}"
        base = "Z" if self.rank == 1 else f"Z^{self.rank}"
        if self.generator_set is GeneratorSet.BOX:
            return f"{base}:box"
        return base

    def __str__(self) -> str:
        """Return the canonical descriptor."""
        return self.describe()

    @property
    def is_lattice(self) -> bool:
        """Whether the group is an integer lattice."""
        return self.family is GroupFamily.LATTICE

    @cached_property
    def identity(self) -> Element:
        """The identity element."""
        if self.family is GroupFamily.FREE:
            return Element(self, ())
        return Element(self, (0,) * self.rank)

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """The symmetric generating set in letter order."""
        if self.family is GroupFamily.FREE:
            forms = [
                (sign * i,)
                for i in range(1, self.rank + 1)
                for sign in (1, -1)
            ]
        elif self.family is GroupFamily.HEISENBERG:
            forms = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
        elif self.generator_set is GeneratorSet.BOX:
            forms = []
            for vector in itertools.product((1, 0, -1), repeat=self.rank):
                nonzero = [v for v in vector if v]
                if nonzero and nonzero[0] == 1:
                    forms.extend([vector, tuple(-v for v in vector)])
        else:
            forms = []
            for axis in range(self.rank):
                for sign in (1, -1):
                    unit = [0] * self.rank
                    unit[axis] = sign
                    forms.append(tuple(unit))
        return tuple(Element(self, tuple(form)) for form in forms)

    def element(self, form: tuple[int, ...] | list[int]) -> Element:
        """Build an element from a normal-form tuple, validating it."""
        values = tuple(int(v) for v in form)
        if self.family is GroupFamily.FREE:
            for letter in values:
                if letter == 0 or abs(letter) > self.rank:
                    msg = (
                        f"Letter {letter} outside free group of rank "
                        f"{self.rank}"
                    )
                    raise ValidationError(msg)
            return Element(self, _free_reduce(values))
        if len(values) != self.rank:
            msg = (
                f"{self.describe()} elements need {self.rank} coordinates, "
                f"got {len(values)}"
            )
            raise ValidationError(msg)
        return Element(self, values)


@dataclass(frozen=True, slots=True)
class Element(ShortlexOrderMixin):
    """A group element in normal form.

    The normal form is a coordinate vector for integer lattices, a freely
    reduced word of signed letters ``±i`` for free groups and an integer
    triple ``(a, b, c)`` for the Heisenberg group.
    """

    group: GroupSpec
    form: tuple[int, ...] = field(default=())

    def __mul__(self, other: Element) -> Element:
        """Return the product ``self · other``."""
        return multiply(self, other)

    def inverse(self) -> Element:
        """Return the inverse element."""
        family = self.group.family
        if family is GroupFamily.FREE:
            return Element(self.group, tuple(-x for x in reversed(self.form)))
        if family is GroupFamily.HEISENBERG:
            a, b, c = self.form
            return Element(self.group, (-a, -b, -c + a * b))
        return Element(self.group, tuple(-x for x in self.form))

    @property
    def length(self) -> int:
        """Word length with respect to the group's generating set."""
        return word_length(self)

    @property
    def is_identity(self) -> bool:
        """Whether this is the identity element."""
        return self == self.group.identity

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Shortlex key: length, then least geodesic word."""
        return shortlex_key(self)

    def describe(self) -> str:
        """Return the textual descriptor of the element."""
        family = self.group.family
        if family is GroupFamily.FREE:
            if not self.form:
                return "e"
            return "".join(
                FREE_LETTERS[x - 1] if x > 0 else FREE_LETTERS[-x - 1].upper()
                for x in self.form
            )
        if family is GroupFamily.LATTICE and self.group.rank == 1:
            return str(self.form[0])
        return "(" + ",".join(str(x) for x in self.form) + ")"

    def __str__(self) -> str:
        """Return the textual descriptor."""
        return self.describe()

    def __repr__(self) -> str:
        """Return a compact representation."""
        return f"Element({self.group.describe()}, {self.describe()})"


def _free_reduce(letters: tuple[int, ...]) -> tuple[int, ...]:
    stack: list[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def multiply(a: Element, b: Element) -> Element:
    """Return the normal form of ``a · b``.

    Args:
    ----
        a: Left factor
        b: Right factor

    Returns:
    -------
        The product in normal form

    Raises:
    ------
        UsageError: If the elements belong to different groups

    """
    if a.group != b.group:
        msg = (
            f"Cannot multiply elements of {a.group.describe()} and "
            f"{b.group.describe()}"
        )
        raise UsageError(msg)
    family = a.group.family
    if family is GroupFamily.FREE:
        return Element(a.group, _free_reduce(a.form + b.form))
    if family is GroupFamily.HEISENBERG:
        x1, y1, z1 = a.form
        x2, y2, z2 = b.form
        return Element(a.group, (x1 + x2, y1 + y2, z1 + z2 + x1 * y2))
    pairs = zip(a.form, b.form, strict=True)
    return Element(a.group, tuple(x + y for x, y in pairs))


class _HeisenbergMetric:
    """Breadth-first word-length cache for the Heisenberg group."""

    def __init__(self, group: GroupSpec) -> None:
        self.group = group
        identity = (0, 0, 0)
        self.distances: dict[tuple[int, ...], int] = {identity: 0}
        self.frontier: list[tuple[int, ...]] = [identity]
        self.radius = 0
        self.lock = threading.Lock()

    def _expand(self) -> None:
        budget = settings.max_elements
        generators = [g.form for g in self.group.generators]
        next_frontier: list[tuple[int, ...]] = []
        for x1, y1, z1 in self.frontier:
            for x2, y2, _ in generators:
                form = (x1 + x2, y1 + y2, z1 + x1 * y2)
                if form not in self.distances:
                    self.distances[form] = self.radius + 1
                    next_frontier.append(form)
        self.frontier = next_frontier
        self.radius += 1
        if len(self.distances) > budget:
            msg = (
                f"Heisenberg ball of radius {self.radius} exceeds the element "
                f"budget of {budget}"
            )
            raise ResourceError(msg)
        logger.debug(
            "Heisenberg metric cache grown to radius %d (%d elements)",
            self.radius,
            len(self.distances),
        )

    def length(self, form: tuple[int, ...]) -> int:
        with self.lock:
            while form not in self.distances:
                self._expand()
            return self.distances[form]


_HEISENBERG_METRICS: dict[GroupSpec, _HeisenbergMetric] = {}


def word_length(g: Element) -> int:
    """Return the word length ``|g|`` with respect to the generators."""
    family = g.group.family
    if family is GroupFamily.FREE:
        return len(g.form)
    if family is GroupFamily.LATTICE:
        if g.group.generator_set is GeneratorSet.BOX:
            return max((abs(x) for x in g.form), default=0)
        return sum(abs(x) for x in g.form)
    metric = _HEISENBERG_METRICS.get(g.group)
    if metric is None:
        metric = _HEISENBERG_METRICS.setdefault(
            g.group, _HeisenbergMetric(g.group)
        )
    return metric.length(g.form)


def distance(a: Element, b: Element) -> int:
    """Return the left-invariant word distance ``|a⁻¹b|``."""
    return word_length(a.inverse() * b)


@lru_cache(maxsize=1 << 18)
def shortlex_key(g: Element) -> tuple[int, tuple[int, ...]]:
    """Return ``(|g|, least geodesic word)`` with letters as generator indices.

    The least geodesic word is found greedily: the first letter is the
    smallest generator ``s`` with ``|s⁻¹g| = |g| - 1``.
    """
    n = word_length(g)
    group = g.group
    # reduced words and axis-ordered lattice words are already least
    if group.family is GroupFamily.FREE:
        return n, tuple(2 * (abs(x) - 1) + (x < 0) for x in g.form)
    if group.is_lattice and group.generator_set is GeneratorSet.STANDARD:
        letters: list[int] = []
        for axis, x in enumerate(g.form):
            letters.extend([2 * axis + (x < 0)] * abs(x))
        return n, tuple(letters)
    word: list[int] = []
    current = g
    remaining = n
    generators = g.group.generators
    while remaining > 0:
        for index, s in enumerate(generators):
            candidate = s.inverse() * current
            if word_length(candidate) == remaining - 1:
                word.append(index)
                current = candidate
                remaining -= 1
                break
    return n, tuple(word)


def support_key(
    elements: Iterable[Element],
) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Return the sorted shortlex keys of a finite set of elements."""
    return tuple(sorted(shortlex_key(g) for g in elements))
