"""Potentials, Variations and Norms.

A potential ``f`` is a single observable on the subshift. Local potentials
depend on finitely many coordinates; series potentials are sums of local
pieces whose variations are known only through declared analytic bounds.
The shell, volume and ``SV_d`` norms weight the variations ``v_k(f)`` by
shell sizes, ball sizes and ``k^{d-1}`` respectively.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import TYPE_CHECKING

from gibbs_subshift.config import settings
from gibbs_subshift.errors import DomainError, UsageError, ValidationError
from gibbs_subshift.groups import (
    GroupFamily,
    ball,
    ball_sizes,
    shell_sizes,
    sphere_ratio_sup,
    word_length,
)
from gibbs_subshift.shifts import (
    SFT,
    Pattern,
    Semantics,
    WindowConfig,
    as_configuration,
    enumerate_fillings,
)

from .interactions import CocycleValue, read_symbols, require_agreement

if TYPE_CHECKING:
    from gibbs_subshift.groups import BallTable, Element, GroupSpec
    from gibbs_subshift.shifts import Alphabet, Symbol

logger = logging.getLogger(__name__)

# Heisenberg shells past kmax enumerated for majorant tails
ENUMERATED_TAIL_SPAN = 16


@dataclass(frozen=True)
class PotentialTerm:
    """``weight · table[x_S]`` for a finite support ``S``."""

    support: tuple[Element, ...]
    table: Mapping[tuple[Symbol, ...], float] = field(default_factory=dict)
    weight: float = 1.0

    def __post_init__(self) -> None:
        """Validate table keys and freeze the table."""
        for key in self.table:
            if len(key) != len(self.support):
                msg = (
                    f"Table key {key!r} does not match a support of size "
                    f"{len(self.support)}"
                )
                raise ValidationError(msg)
        frozen = MappingProxyType({k: float(v) for k, v in self.table.items()})
        object.__setattr__(self, "table", frozen)

    def value(
        self, config: Mapping[Element, Symbol], at: Element | None = None
    ) -> float:
        """Return this term of ``f(g·x)``, reading ``x`` at ``g⁻¹s``."""
        if at is None:
            sites: Iterable[Element] = self.support
        else:
            inverse = at.inverse()
            sites = [inverse * s for s in self.support]
        return self.weight * self.table.get(read_symbols(config, sites), 0.0)


@dataclass(frozen=True)
class LocalPotential:
    """A potential depending on finitely many coordinates."""

    group: GroupSpec
    alphabet: Alphabet
    terms: tuple[PotentialTerm, ...] = ()
    truncation_error: float = 0.0

    kind = "local"

    @cached_property
    def support(self) -> tuple[Element, ...]:
        """Union of the term supports in shortlex order."""
        return tuple(sorted({g for t in self.terms for g in t.support}))

    @cached_property
    def radius(self) -> int:
        """Least ``r >= 1`` with ``supp f ⊆ B_r``."""
        return max((word_length(g) + 1 for g in self.support), default=1)

    def evaluate(
        self, config: Mapping[Element, Symbol], at: Element | None = None
    ) -> float:
        """Return ``f(x)``, or ``f(g·x)`` when ``at=g``."""
        return math.fsum(t.value(config, at) for t in self.terms)


@dataclass(frozen=True)
class SeriesPotential:
    """A sum of local pieces with declared variation bounds.

    ``variation_bound(k)`` majorizes ``v_k``; ``variation_minorant(k)``, when
    given, minorizes it and backs divergence certificates. The pieces are a
    truncation whose omitted part has sup-norm at most ``remainder_sup`` and
    shell norm at most ``remainder_shell``. ``constant_from``, when set, is an
    index from which ``variation_bound`` no longer changes.
    """

    group: GroupSpec
    alphabet: Alphabet
    pieces: tuple[LocalPotential, ...]
    variation_bound: Callable[[int], float]
    variation_minorant: Callable[[int], float] | None = None
    minorant_label: str = ""
    minorant_divergent: bool = False
    remainder_sup: float = 0.0
    remainder_shell: float = 0.0
    constant_from: int | None = None

    kind = "series"

    def evaluate(
        self, config: Mapping[Element, Symbol], at: Element | None = None
    ) -> float:
        """Return the truncated sum of the pieces at ``x`` or ``g·x``."""
        return math.fsum(p.evaluate(config, at) for p in self.pieces)


type Potential = LocalPotential | SeriesPotential


def constant_potential(
    group: GroupSpec, alphabet: Alphabet, c: float
) -> LocalPotential:
    """Return ``f ≡ c``."""
    table = {(a,): c for a in alphabet}
    return LocalPotential(
        group, alphabet, (PotentialTerm((group.identity,), table),)
    )


def _require_group(f: Potential, sft: SFT) -> None:
    if f.group != sft.group or f.alphabet != sft.alphabet:
        msg = "Potential and shift live on different groups or alphabets"
        raise UsageError(msg)


def variations(
    f: Potential,
    sft: SFT | None,
    kmax: int,
    balls: BallTable | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> list[float]:
    """Return ``[v_0(f), ..., v_kmax(f)]``.

    For a local potential with radius ``r`` the admissible patterns on
    ``B_r`` are enumerated once; ``v_0`` is the sup-norm and ``v_k`` for
    ``k >= 1`` the largest oscillation among patterns agreeing on ``B_k``.
    ``v_k = 0`` for ``k >= r``. Series potentials report their declared
    bounds.
    """
    if kmax < 0:
        msg = f"Variation index must be >= 0, got {kmax}"
        raise UsageError(msg)
    if isinstance(f, SeriesPotential):
        return [float(f.variation_bound(k)) for k in range(kmax + 1)]
    shift = sft or SFT.full_shift(f.group, f.alphabet)
    _require_group(f, shift)
    semantics = shift.effective_semantics(semantics)
    if not shift.is_full_shift and semantics is Semantics.LOCAL:
        logger.warning(
            "Variations over locally admissible patterns are upper bounds"
        )
    r = f.radius
    table = (
        balls
        if balls is not None and balls.spec == f.group and balls.radius >= r
        else ball(f.group, r)
    )
    region = table.elements(r)
    patterns = enumerate_fillings(shift, region, Pattern(), semantics)
    if not patterns:
        msg = f"No admissible pattern on B_{r}"
        raise DomainError(msg)
    values = [f.evaluate(p) for p in patterns]
    result = [max(abs(v) for v in values)]
    for k in range(1, min(kmax, r - 1) + 1):
        inner = table.elements(k)
        groups: dict[tuple[Symbol, ...], list[float]] = defaultdict(list)
        for pattern, value in zip(patterns, values, strict=True):
            groups[tuple(pattern[g] for g in inner)].append(value)
        result.append(max(max(vs) - min(vs) for vs in groups.values()))
    result.extend([0.0] * (kmax + 1 - len(result)))
    return result


def variation(
    f: Potential,
    sft: SFT | None,
    k: int,
    balls: BallTable | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> float:
    """Return ``v_k(f)``.

    Args:
    ----
        f: The potential
        sft: The shift; ``None`` means the full shift
        k: Index, at least 0
        balls: Optional precomputed ball table
        semantics: Admissibility semantics for the enumeration

    Returns:
    -------
        The ``k``-th variation (exact for full shifts and exact semantics,
        an upper bound otherwise)

    """
    return variations(f, sft, k, balls, semantics)[k]


@dataclass(frozen=True)
class DivergenceCertificate:
    """An explicit minorant series witnessing divergence."""

    minorant: str
    threshold: float
    witness: int
    partial: float


@dataclass(frozen=True)
class NormReport:
    """A variation norm with its partial sums and certificate."""

    kind: str
    value: float
    partial_sums: tuple[float, ...]
    variations: tuple[float, ...]
    group: str
    exact: bool
    convention: str
    tail_bound: float | None = 0.0
    certificate: DivergenceCertificate | None = None

    @property
    def diverges(self) -> bool:
        """Whether divergence was certified."""
        return self.certificate is not None


def divergence_certificate(
    weights: Callable[[int], int],
    minorant: Callable[[int], float],
    label: str,
) -> DivergenceCertificate | None:
    """Find the least ``K`` with ``Σ_{k<=K} w_k m(k)`` above the threshold."""
    threshold = settings.divergence_threshold
    terms: list[float] = []
    for k in range(settings.divergence_horizon + 1):
        terms.append(weights(k) * minorant(k))
        partial = math.fsum(terms)
        if partial > threshold:
            return DivergenceCertificate(label, threshold, k, partial)
    return None


def _partial_sums(terms: list[float]) -> tuple[float, ...]:
    return tuple(math.fsum(terms[: i + 1]) for i in range(len(terms)))


def _majorant_tail(
    f: SeriesPotential, weight_list: Callable[[int], list[int]], kmax: int
) -> float:
    """Bound ``Σ_{k>kmax} w_k v_k(f)`` with the declared variation bounds.

    Every shell of an infinite group is nonempty, so a bound that stays at
    a positive constant gives an infinite tail. Other bounds are summed up
    to ``divergence_horizon`` (a few radii past ``kmax`` on the Heisenberg
    group, whose shells are enumerated); the tail is infinite unless the
    term at the horizon is below ``tolerance``.
    """
    start = kmax + 1
    if f.constant_from is not None:
        if f.variation_bound(max(f.constant_from, start)) > 0:
            return math.inf
        top = f.constant_from - 1
    elif f.group.family is GroupFamily.HEISENBERG:
        top = start + ENUMERATED_TAIL_SPAN
    else:
        top = max(settings.divergence_horizon, start)
    if top < start:
        return 0.0
    weights = weight_list(top)
    terms = [
        weights[k] * float(f.variation_bound(k)) for k in range(start, top + 1)
    ]
    if f.constant_from is None and terms[-1] > settings.tolerance:
        logger.warning(
            "Variation bound not negligible at k=%d (term %.3g)",
            top,
            terms[-1],
        )
        return math.inf
    return math.fsum(terms)


def _weighted_norm(
    kind: str,
    f: Potential,
    weight_list: Callable[[int], list[int]],
    kmax: int,
    sft: SFT | None,
    balls: BallTable,
    semantics: Semantics,
    convention: str,
) -> NormReport:
    if isinstance(f, LocalPotential):
        top = max(kmax, f.radius - 1)
        vs = variations(f, sft, top, balls, semantics)
        weights = weight_list(top)
        terms = [w * v for w, v in zip(weights, vs, strict=True)]
        shift = sft or SFT.full_shift(f.group, f.alphabet)
        exact = shift.is_full_shift or (
            shift.effective_semantics(semantics) is Semantics.EXACT
        )
        return NormReport(
            kind,
            math.fsum(terms),
            _partial_sums(terms[: kmax + 1]),
            tuple(vs[: kmax + 1]),
            f.group.describe(),
            exact,
            convention,
        )
    vs = variations(f, sft, kmax)
    weights = weight_list(kmax)
    terms = [w * v for w, v in zip(weights, vs, strict=True)]
    certificate = None
    if f.variation_minorant is not None and f.minorant_divergent:
        horizon = weight_list(settings.divergence_horizon)
        certificate = divergence_certificate(
            horizon.__getitem__, f.variation_minorant, f.minorant_label
        )
    tail = (
        math.inf
        if certificate is not None
        else _majorant_tail(f, weight_list, kmax)
    )
    value = math.fsum(terms) + tail
    return NormReport(
        kind,
        value,
        _partial_sums(terms),
        tuple(vs),
        f.group.describe(),
        exact=False,
        convention=convention,
        tail_bound=tail,
        certificate=certificate,
    )


def shell_norm(
    f: Potential,
    balls: BallTable,
    kmax: int,
    sft: SFT | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> NormReport:
    """Return ``‖f‖ = Σ_{k>=0} |B_{k+1} ∖ B_k| v_k(f)``.

    Local potentials give an exact finite sum. Series potentials report
    partial sums up to ``kmax`` plus the majorant tail beyond it and, when
    their minorant diverges, a certificate with value ``inf``.
    """
    spec = balls.spec
    return _weighted_norm(
        "shell",
        f,
        lambda top: shell_sizes(spec, top),
        kmax,
        sft,
        balls,
        semantics,
        "open balls, |B_1 ∖ B_0| = 1",
    )


def volume_norm(
    f: Potential,
    balls: BallTable,
    kmax: int,
    sft: SFT | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> NormReport:
    """Return ``Σ_{k>=0} |B_k| v_k(f)`` with ``|B_0| = 0``.

    The ``k = 0`` term never contributes, so a single-site potential has
    volume norm zero.
    """
    spec = balls.spec
    return _weighted_norm(
        "volume",
        f,
        lambda top: ball_sizes(spec, top),
        kmax,
        sft,
        balls,
        semantics,
        "B_0 = ∅, |B_0| = 0",
    )


def sv_norm(
    f: Potential,
    balls: BallTable,
    kmax: int,
    sft: SFT | None = None,
    semantics: Semantics = Semantics.LOCAL,
) -> NormReport:
    """Return ``Σ_{k>=1} k^{d-1} v_{k-1}(f)`` on ``Z^d``."""
    spec = balls.spec
    if not spec.is_lattice:
        msg = "The SV_d norm is defined on integer lattices only"
        raise UsageError(msg)
    d = spec.rank
    return _weighted_norm(
        "sv",
        f,
        lambda top: [(k + 1) ** (d - 1) for k in range(top + 1)],
        kmax,
        sft,
        balls,
        semantics,
        f"weights k^{d - 1} on v_(k-1), {spec.generator_set} generators",
    )


def partial_sum_f_m(
    f: Potential, m: int, window: WindowConfig | Mapping[Element, Symbol]
) -> float:
    """Return ``f_m(z) = Σ_{g ∈ B_m} f(g·z)``.

    Any mapping from elements to symbols can stand in for the window.

    Raises:
    ------
        DomainError: If the window does not cover ``B_m · supp f``

    """
    if m < 1:
        msg = f"m must be >= 1, got {m}"
        raise UsageError(msg)
    config = (
        window.configuration if isinstance(window, WindowConfig) else window
    )
    sites = ball(f.group, m).elements()
    return math.fsum(f.evaluate(config, at=g) for g in sites)


def _cocycle_translates(
    f: LocalPotential, delta: frozenset[Element]
) -> list[Element]:
    seen: set[Element] = set()
    result = []
    for s in f.support:
        for d in sorted(delta):
            g = s * d.inverse()
            if g not in seen:
                seen.add(g)
                result.append(g)
    return result


def cocycle_potential(
    f: Potential,
    window_x: WindowConfig | Pattern,
    window_y: WindowConfig | Pattern,
    delta: Iterable[Element],
) -> CocycleValue:
    """Return ``φ_f(x, y) = Σ_g [f(g·y) − f(g·x)]``.

    Only ``g = s·δ⁻¹`` with ``s ∈ supp f``, ``δ ∈ Δ`` contribute, so
    the sum is finite for local pieces. For series potentials the omitted
    remainder is bounded by ``2|B_n| ‖rem‖_∞ + ratio · ‖rem‖`` with
    ``Δ ⊆ B_n``.
    """
    sites = frozenset(delta)
    x = as_configuration(window_x)
    y = as_configuration(window_y)
    require_agreement(x, y, sites)
    pieces = f.pieces if isinstance(f, SeriesPotential) else (f,)
    differences = []
    for piece in pieces:
        for g in _cocycle_translates(piece, sites):
            differences.append(piece.evaluate(y, at=g))
            differences.append(-piece.evaluate(x, at=g))
    value = math.fsum(differences)
    error = 0.0
    if isinstance(f, SeriesPotential) and (
        f.remainder_sup or f.remainder_shell
    ):
        n = max((word_length(g) + 1 for g in sites), default=1)
        ball_volume = ball_sizes(f.group, n)[n]
        ratio = sphere_ratio_sup(f.group, n + 1)
        error = 2 * ball_volume * f.remainder_sup + ratio * f.remainder_shell
    return CocycleValue(value, error)
