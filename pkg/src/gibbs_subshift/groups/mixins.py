"""Mixins for Group Element Classes.

Contains the ordering mixin shared by group elements so that every sorted
collection downstream uses the same shortlex order.
"""

from __future__ import annotations

from typing import Any


class ShortlexOrderMixin:
    """Mixin providing ordering by a ``sort_key`` attribute.

    Classes using it expose ``sort_key`` (word length first, then the
    lexicographically least geodesic word) and get ``<``, ``<=``, ``>`` and
    ``>=`` from it. Equality and hashing stay with the class itself.
    """

    __slots__ = ()

    @property
    def sort_key(self) -> tuple[Any, ...]:
        """Return the shortlex key of the object."""
        raise NotImplementedError

    def __lt__(self, other: object) -> bool:
        """Support sorting in shortlex order."""
        if isinstance(other, self.__class__):
            return self.sort_key < other.sort_key
        return NotImplemented

    def __le__(self, other: object) -> bool:
        """Support sorting in shortlex order."""
        if isinstance(other, self.__class__):
            return self.sort_key <= other.sort_key
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        """Support sorting in shortlex order."""
        if isinstance(other, self.__class__):
            return self.sort_key > other.sort_key
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        """Support sorting in shortlex order."""
        if isinstance(other, self.__class__):
            return self.sort_key >= other.sort_key
        return NotImplemented
