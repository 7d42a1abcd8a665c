"""One-Dimensional Extensibility.

The follower graph of an SFT on ``Z`` has the allowed words of length
``m = max(1, r_X)`` as vertices and the allowed words of length ``m + 1`` as
edges. Points of the subshift are exactly the bi-infinite paths, so a finite
pattern extends to a point iff some path through it starts at a vertex with
an infinite past and ends at a vertex with an infinite future.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from functools import cached_property
from typing import TYPE_CHECKING

import networkx as nx
import numpy as np

from gibbs_subshift.config import settings
from gibbs_subshift.errors import ResourceError, UsageError

from .patterns import Pattern, Symbol

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element

    from .sft import SFT

logger = logging.getLogger(__name__)

type Word = tuple[Symbol, ...]


class FollowerGraph:
    """Follower graph of a one-dimensional shift of finite type."""

    def __init__(self, sft: SFT) -> None:
        """Build the graph.

        Args:
        ----
            sft: A shift of finite type on ``Z``

        """
        if not sft.is_one_dimensional:
            msg = f"Follower graphs need a shift on Z, got {sft.group}"
            raise UsageError(msg)
        self.sft = sft
        self.block = max(1, sft.range)
        size = len(sft.alphabet) ** (self.block + 1)
        if size > settings.max_fillings:
            msg = f"Follower graph needs {size} words, above the budget"
            raise ResourceError(msg)
        self.graph: nx.DiGraph = nx.DiGraph()
        symbols = sft.alphabet.symbols
        for word in itertools.product(symbols, repeat=self.block):
            if self._allowed(word):
                self.graph.add_node(word)
        for word in itertools.product(symbols, repeat=self.block + 1):
            head, tail = word[:-1], word[1:]
            known = head in self.graph and tail in self.graph
            if known and self._allowed(word):
                self.graph.add_edge(head, tail)
        logger.debug(
            "Follower graph with %d vertices and %d edges (block %d)",
            self.graph.number_of_nodes(),
            self.graph.number_of_edges(),
            self.block,
        )

    def _allowed(self, word: Word) -> bool:
        from .sft import is_locally_admissible

        group = self.sft.group
        pattern = Pattern(
            (group.element((i,)), s) for i, s in enumerate(word)
        )
        return is_locally_admissible(self.sft, pattern)

    @cached_property
    def vertices(self) -> list[Word]:
        """Vertices in lexicographic alphabet order."""
        order = {s: i for i, s in enumerate(self.sft.alphabet.symbols)}
        return sorted(self.graph, key=lambda w: [order[s] for s in w])

    @cached_property
    def cyclic(self) -> frozenset[Word]:
        """Vertices lying on a cycle."""
        nodes: set[Word] = set()
        for component in nx.strongly_connected_components(self.graph):
            if len(component) > 1:
                nodes |= component
            else:
                (node,) = component
                if self.graph.has_edge(node, node):
                    nodes.add(node)
        return frozenset(nodes)

    @cached_property
    def infinite_future(self) -> frozenset[Word]:
        """Vertices from which a cycle can be reached."""
        nodes = set(self.cyclic)
        for node in self.cyclic:
            nodes |= nx.ancestors(self.graph, node)
        return frozenset(nodes)

    @cached_property
    def infinite_past(self) -> frozenset[Word]:
        """Vertices reachable from a cycle."""
        nodes = set(self.cyclic)
        for node in self.cyclic:
            nodes |= nx.descendants(self.graph, node)
        return frozenset(nodes)

    def is_irreducible(self) -> bool:
        """Whether the graph is nonempty and strongly connected."""
        return self.graph.number_of_nodes() > 0 and nx.is_strongly_connected(
            self.graph
        )

    def transfer_matrix(self) -> np.ndarray:
        """Adjacency matrix in :attr:`vertices` order."""
        return nx.to_numpy_array(
            self.graph, nodelist=self.vertices, dtype=np.int64
        )

    def count_words(self, length: int) -> int:
        """Count the locally admissible words of ``length >= block``."""
        if length < self.block:
            msg = f"Word length must be >= {self.block}, got {length}"
            raise UsageError(msg)
        matrix = self.transfer_matrix()
        power = np.linalg.matrix_power(matrix, length - self.block)
        return int(power.sum())

    def is_extensible(self, pattern: Mapping[Element, Symbol]) -> bool:
        """Whether ``pattern`` extends to a point of the subshift.

        The scan runs over the block positions covering the pattern's span,
        tracking the vertices consistent with the known symbols.
        """
        if not self.cyclic:
            return False
        known = {g.form[0]: s for g, s in pattern.items()}
        if not known:
            return True
        m = self.block
        first, last = min(known) - m + 1, max(known)

        def consistent(word: Word, start: int) -> bool:
            return all(
                known.get(start + j, s) == s for j, s in enumerate(word)
            )

        states = {v for v in self.infinite_past if consistent(v, first)}
        for start in range(first + 1, last + 1):
            states = {
                w
                for v in states
                for w in self.graph.successors(v)
                if consistent(w, start)
            }
            if not states:
                return False
        return any(v in self.infinite_future for v in states)
