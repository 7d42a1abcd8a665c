"""Subshifts of Finite Type.

An :class:`SFT` is given by an alphabet and a finite list of forbidden
patterns over one of the built-in groups. Membership in the subshift is
approximated by local admissibility inside a window and its collar; for
one-dimensional shifts an exact extensibility check is available through
:mod:`gibbs_subshift.shifts.extension`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
from typing import TYPE_CHECKING

from gibbs_subshift.config import settings
from gibbs_subshift.errors import (
    DomainError,
    ResourceError,
    UsageError,
    ValidationError,
)
from gibbs_subshift.groups import ball, distance

from .patterns import Alphabet, Pattern, Symbol, WindowConfig, as_configuration

if TYPE_CHECKING:
    import numpy as np

    from gibbs_subshift.groups import Element, GroupSpec

    from .extension import FollowerGraph

logger = logging.getLogger(__name__)


class Semantics(StrEnum):
    """How membership in the subshift is decided on finite windows."""

    LOCAL = "local"
    EXACT = "exact-1d"


@dataclass(frozen=True)
class SFT:
    """A shift of finite type on a built-in group."""

    group: GroupSpec
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...] = ()

    def __post_init__(self) -> None:
        """Validate the forbidden patterns."""
        diagnostics = []
        for i, pattern in enumerate(self.forbidden):
            if not pattern:
                diagnostics.append(
                    {"path": f"forbidden[{i}]", "message": "empty support"}
                )
                continue
            if pattern.sites[0].group != self.group:
                diagnostics.append(
                    {
                        "path": f"forbidden[{i}].support",
                        "message": f"elements are not in {self.group}",
                    }
                )
            for j, symbol in enumerate(pattern.symbols):
                if symbol not in self.alphabet:
                    diagnostics.append(
                        {
                            "path": f"forbidden[{i}].symbols[{j}]",
                            "message": f"{symbol!r} is not in the alphabet",
                        }
                    )
        if diagnostics:
            msg = "; ".join(f"{d['path']}: {d['message']}" for d in diagnostics)
            raise ValidationError(msg, diagnostics)

    @classmethod
    def full_shift(cls, group: GroupSpec, alphabet: Alphabet) -> SFT:
        """Return the full shift ``A^G``."""
        return cls(group, alphabet, ())

    @cached_property
    def range(self) -> int:
        """``r_X``: the largest word-metric diameter of a forbidden support."""
        return max(
            (
                distance(a, b)
                for pattern in self.forbidden
                for a in pattern.sites
                for b in pattern.sites
            ),
            default=0,
        )

    @property
    def is_full_shift(self) -> bool:
        """Whether no pattern is forbidden."""
        return not self.forbidden

    @property
    def is_one_dimensional(self) -> bool:
        """Whether the group is ``Z``."""
        return self.group.is_lattice and self.group.rank == 1

    @cached_property
    def follower_graph(self) -> FollowerGraph:
        """The follower graph of a one-dimensional shift."""
        from .extension import FollowerGraph

        return FollowerGraph(self)

    def effective_semantics(self, semantics: Semantics) -> Semantics:
        """Return the semantics actually available for this shift."""
        if semantics is Semantics.EXACT and not (
            self.is_full_shift or self.is_one_dimensional
        ):
            logger.warning(
                "Exact extensibility is unavailable on %s; using local "
                "admissibility instead",
                self.group,
            )
            return Semantics.LOCAL
        return semantics

    def collar(
        self, region: Iterable[Element], thickness: int | None = None
    ) -> frozenset[Element]:
        """Return ``Λ · B_{r_X + 1} ∖ Λ`` (or a thicker collar)."""
        sites = frozenset(region)
        radius = self.range + 1 if thickness is None else thickness
        if radius < self.range + 1:
            msg = f"Collar thickness must be >= r_X + 1 = {self.range + 1}"
            raise UsageError(msg)
        offsets = ball(self.group, radius).elements()
        return frozenset(g * b for g in sites for b in offsets) - sites

    def require_collar(
        self, region: Iterable[Element], boundary: Pattern
    ) -> None:
        """Raise DomainError unless ``boundary`` covers the collar."""
        missing = self.collar(region) - boundary.support
        if missing:
            sites = ", ".join(str(g) for g in sorted(missing))
            msg = f"Boundary does not cover the collar; missing {sites}"
            raise DomainError(msg)

    def violation_at(
        self, config: Mapping[Element, Symbol], site: Element
    ) -> bool:
        """Whether a forbidden translate through ``site`` occurs."""
        for pattern in self.forbidden:
            for anchor in pattern.sites:
                g = site * anchor.inverse()
                if all(
                    config.get(g * f) == symbol for f, symbol in pattern.items()
                ):
                    return True
        return False

    def is_admissible(
        self,
        window: WindowConfig | Pattern,
        semantics: Semantics = Semantics.LOCAL,
    ) -> bool:
        """Decide membership of a window under the requested semantics."""
        config = as_configuration(window)
        if not is_locally_admissible(self, config):
            return False
        if self.effective_semantics(semantics) is Semantics.EXACT:
            if self.is_full_shift:
                return True
            return self.follower_graph.is_extensible(config)
        return True


def is_locally_admissible(sft: SFT, window: WindowConfig | Pattern) -> bool:
    """Whether no forbidden translate lies inside the window and matches it.

    Args:
    ----
        sft: The shift of finite type
        window: A window configuration or bare pattern

    Returns:
    -------
        True iff no ``g·F`` has support inside the configured region and
        agrees with the symbols there

    """
    config = as_configuration(window)
    return not any(sft.violation_at(config, site) for site in config.sites)


def _compile_checks(
    sft: SFT, sites: list[Element], boundary: Pattern
) -> list[list[tuple[tuple[int, Symbol], ...]]]:
    """Group the forbidden translates meeting ``sites`` by their last site."""
    position = {g: i for i, g in enumerate(sites)}
    checks: list[list[tuple[tuple[int, Symbol], ...]]] = [[] for _ in sites]
    seen: set[tuple[int, Element]] = set()
    for index, pattern in enumerate(sft.forbidden):
        for site in sites:
            for anchor in pattern.sites:
                g = site * anchor.inverse()
                if (index, g) in seen:
                    continue
                seen.add((index, g))
                free: list[tuple[int, Symbol]] = []
                possible = True
                for f, symbol in pattern.items():
                    h = g * f
                    if h in position:
                        free.append((position[h], symbol))
                    elif boundary.get(h) != symbol:
                        possible = False
                        break
                if possible:
                    depth = max(i for i, _ in free)
                    checks[depth].append(tuple(free))
    return checks


def enumerate_fillings(
    sft: SFT,
    region: Iterable[Element],
    boundary: Pattern,
    semantics: Semantics = Semantics.LOCAL,
) -> list[Pattern]:
    """Return the admissible fillings of ``region`` given ``boundary``.

    Fillings come in lexicographic order over the shortlex-sorted sites with
    symbols in alphabet order, independent of how the search proceeds.

    Args:
    ----
        sft: The shift of finite type
        region: The finite set ``Λ`` to fill
        boundary: The fixed exterior pattern
        semantics: Local admissibility or exact one-dimensional extensibility

    Returns:
    -------
        Every admissible filling of ``Λ``

    Raises:
    ------
        ResourceError: If ``|A|^|Λ|`` exceeds the ``max_fillings`` budget

    """
    sites = sorted(set(region))
    overlap = set(sites) & boundary.support
    if overlap:
        names = ", ".join(str(g) for g in sorted(overlap))
        msg = f"Region and boundary overlap at {names}"
        raise UsageError(msg)
    budget = settings.max_fillings
    candidates = len(sft.alphabet) ** len(sites)
    if candidates > budget:
        msg = (
            f"Enumerating {len(sft.alphabet)}^{len(sites)} = {candidates} "
            f"fillings exceeds the budget of {budget}"
        )
        raise ResourceError(msg)
    semantics = sft.effective_semantics(semantics)
    if not is_locally_admissible(sft, boundary):
        logger.debug("Boundary is not locally admissible; no fillings")
        return []
    checks = _compile_checks(sft, sites, boundary)
    symbols = sft.alphabet.symbols
    assignment: list[Symbol] = []
    results: list[Pattern] = []

    def extend(depth: int) -> None:
        if depth == len(sites):
            results.append(Pattern(zip(sites, assignment, strict=True)))
            return
        for symbol in symbols:
            assignment.append(symbol)
            if not any(
                all(assignment[i] == s for i, s in check)
                for check in checks[depth]
            ):
                extend(depth + 1)
            assignment.pop()

    extend(0)
    if semantics is Semantics.EXACT and not sft.is_full_shift:
        graph = sft.follower_graph
        results = [
            p for p in results if graph.is_extensible(p.merge(boundary))
        ]
    logger.debug(
        "Enumerated %d of %d candidate fillings on %d sites",
        len(results),
        candidates,
        len(sites),
    )
    return results


def random_admissible_pattern(
    sft: SFT,
    region: Iterable[Element],
    rng: np.random.Generator,
    boundary: Pattern | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> Pattern:
    """Sample an admissible pattern on ``region`` site by site.

    Sites are filled in shortlex order with a uniformly chosen symbol among
    those creating no forbidden translate; a dead end restarts the sample.

    Raises:
    ------
        DomainError: If ``sample_attempts`` restarts all fail

    """
    sites = sorted(set(region))
    fixed = boundary or Pattern()
    semantics = sft.effective_semantics(semantics)
    symbols = sft.alphabet.symbols
    for _ in range(settings.sample_attempts):
        config: dict[Element, Symbol] = dict(fixed)
        for site in sites:
            allowed = []
            for symbol in symbols:
                config[site] = symbol
                if not sft.violation_at(config, site):
                    allowed.append(symbol)
            if not allowed:
                break
            config[site] = allowed[int(rng.integers(len(allowed)))]
        else:
            pattern = Pattern((g, config[g]) for g in sites)
            if semantics is Semantics.LOCAL or sft.is_admissible(
                pattern.merge(fixed), semantics
            ):
                return pattern
    msg = (
        f"No admissible pattern on {len(sites)} sites after "
        f"{settings.sample_attempts} attempts"
    )
    raise DomainError(msg)
