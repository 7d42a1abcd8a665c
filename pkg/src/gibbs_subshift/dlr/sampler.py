"""Glauber Dynamics.

Single-site heat-bath resampling from the DLR kernel. Its stationary
distribution is the exact finite-volume Gibbs table, which the empirical
frequencies of a long seeded run approach.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from gibbs_subshift.groups import distance
from gibbs_subshift.shifts import (
    EmpiricalMeasure,
    Pattern,
    Semantics,
    WindowMeasure,
    random_admissible_pattern,
    total_variation,
)

from .kernels import FiniteVolumeGibbs, dlr_kernel

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element
    from gibbs_subshift.shifts import Symbol

    from .sources import CocycleSource

logger = logging.getLogger(__name__)

type HeatBath = tuple[tuple[Symbol, ...], np.ndarray]


class GlauberChain:
    """A seeded single-site Glauber chain on a window with fixed boundary.

    Heat-bath tables are cached by site and the symbols within reach of it,
    except under exact one-dimensional semantics where admissibility is not
    local.
    """

    def __init__(
        self,
        source: CocycleSource,
        region: Iterable[Element],
        boundary: Pattern,
        seed: int = 0,
        semantics: Semantics = Semantics.LOCAL,
        initial: Pattern | None = None,
    ) -> None:
        """Initialize the chain.

        Args:
        ----
            source: The cocycle source
            region: The window ``Λ``
            boundary: Fixed pattern around ``Λ``
            seed: Seed of the random generator
            semantics: Admissibility semantics
            initial: Starting filling; sampled when omitted

        """
        self.source = source
        self.sites = tuple(sorted(set(region)))
        self.boundary = boundary
        self.semantics = source.sft.effective_semantics(semantics)
        self.rng = np.random.default_rng(seed)
        start = initial or random_admissible_pattern(
            source.sft, self.sites, self.rng, boundary, self.semantics
        )
        self.state: dict[Element, Symbol] = {g: start[g] for g in self.sites}
        radius = max(source.reach, source.sft.range)
        self._neighbors = {
            g: tuple(
                h for h in self.sites if h != g and distance(g, h) <= radius
            )
            for g in self.sites
        }
        self._cacheable = (
            source.sft.is_full_shift or self.semantics is Semantics.LOCAL
        )
        self._tables: dict[tuple[Element, tuple[Symbol, ...]], HeatBath] = {}

    def heat_bath(self, site: Element) -> HeatBath:
        """Return the admissible symbols at ``site`` and their CDF."""
        key = (site, tuple(self.state[h] for h in self._neighbors[site]))
        cached = self._tables.get(key)
        if cached is not None:
            return cached
        exterior = Pattern(
            (h, s) for h, s in self.state.items() if h != site
        ).merge(self.boundary)
        kernel = dlr_kernel(self.source, [site], exterior, self.semantics)
        table = (
            tuple(p[site] for p in kernel.support),
            np.cumsum(kernel.probabilities),
        )
        if self._cacheable:
            self._tables[key] = table
        return table

    def step(self) -> None:
        """Resample one uniformly chosen site."""
        site = self.sites[int(self.rng.integers(len(self.sites)))]
        symbols, cumulative = self.heat_bath(site)
        index = int(np.searchsorted(cumulative, self.rng.random(), "right"))
        self.state[site] = symbols[min(index, len(symbols) - 1)]

    def snapshot(self) -> tuple[Symbol, ...]:
        """Return the current symbols in site order."""
        return tuple(self.state[g] for g in self.sites)

    def pattern(self) -> Pattern:
        """Return the current filling."""
        return Pattern(self.state)

    def stream(self, steps: int) -> Iterator[Pattern]:
        """Yield the filling after each of ``steps`` updates."""
        for _ in range(steps):
            self.step()
            yield self.pattern()

    def run(self, steps: int, burn_in: int = 0) -> Counter[tuple[Symbol, ...]]:
        """Run ``burn_in`` silent updates, then count ``steps`` snapshots."""
        for _ in range(burn_in):
            self.step()
        counts: Counter[tuple[Symbol, ...]] = Counter()
        for _ in range(steps):
            self.step()
            counts[self.snapshot()] += 1
        logger.debug(
            "Glauber run: %d steps, %d cached heat-bath tables",
            steps,
            len(self._tables),
        )
        return counts


@dataclass(frozen=True)
class GlauberRun:
    """Empirical table of a seeded Glauber run."""

    steps: int
    burn_in: int
    seed: int
    empirical: EmpiricalMeasure
    semantics: Semantics
    total_variation: float | None = None


def glauber_chain(
    source: CocycleSource,
    region: Iterable[Element],
    boundary: Pattern,
    steps: int,
    seed: int = 0,
    burn_in: int | None = None,
    semantics: Semantics = Semantics.LOCAL,
    reference: WindowMeasure | None = None,
) -> GlauberRun:
    """Run a Glauber chain and tabulate the visited fillings.

    Args:
    ----
        source: The cocycle source
        region: The window ``Λ``
        boundary: Fixed pattern around ``Λ``
        steps: Number of recorded single-site updates
        seed: Seed of the random generator
        burn_in: Discarded updates before recording; ``steps // 10`` by
            default
        semantics: Admissibility semantics
        reference: Measure to report the total-variation distance to

    Returns:
    -------
        The run summary with its empirical measure

    """
    chain = GlauberChain(source, region, boundary, seed, semantics)
    discard = steps // 10 if burn_in is None else burn_in
    counts = chain.run(steps, discard)
    empirical = EmpiricalMeasure(
        Counter(
            {
                Pattern(zip(chain.sites, key, strict=True)): n
                for key, n in counts.items()
            }
        )
    )
    distance_to_reference = (
        None if reference is None else total_variation(empirical, reference)
    )
    return GlauberRun(
        steps,
        discard,
        seed,
        empirical,
        chain.semantics,
        distance_to_reference,
    )


def detailed_balance_deviation(
    source: CocycleSource, gibbs: FiniteVolumeGibbs
) -> float:
    """Return ``max |π(x)P(x, y) − π(y)P(y, x)|`` over single-site moves."""
    masses = gibbs.as_dict()
    count = len(gibbs.region)
    worst = 0.0
    for x, px in masses.items():
        for site in gibbs.region:
            exterior = x.without([site]).merge(gibbs.boundary)
            kernel = dlr_kernel(source, [site], exterior, gibbs.semantics)
            probabilities = {p[site]: q for p, q in kernel.items()}
            stay = probabilities.get(x[site], 0.0)
            for symbol, forward in probabilities.items():
                y = x.override(Pattern({site: symbol}))
                flow = px * forward - masses.get(y, 0.0) * stay
                worst = max(worst, abs(flow) / count)
    return worst
