"""Reference Systems.

Small shifts, interactions and potentials with known closed forms, used by
the tests, the documentation and as starting points for JSON inputs.
"""

from __future__ import annotations

import itertools
import math

from gibbs_subshift.energy import (
    Interaction,
    LocalPotential,
    LocalTerm,
    PotentialTerm,
    RadialTail,
)
from gibbs_subshift.groups import GroupSpec
from gibbs_subshift.shifts import SFT, Alphabet, Pattern

SPINS = Alphabet((-1, 1))
BITS = Alphabet((0, 1))


def _product_table(size: int, scale: float) -> dict[tuple[int, ...], float]:
    """``scale · Π x_i`` over ``{-1, 1}^size``."""
    return {
        key: scale * math.prod(key)
        for key in itertools.product(SPINS.symbols, repeat=size)
    }


def ising_interaction(beta: float = 1.0, dimension: int = 1) -> Interaction:
    """Nearest-neighbor Ising bonds ``Φ_{{g, g+e_i}}(x) = −β x_g x_{g+e_i}``."""
    group = GroupSpec.parse("Z" if dimension == 1 else f"Z^{dimension}")
    identity = group.identity
    terms = []
    for axis in range(dimension):
        unit = [0] * dimension
        unit[axis] = 1
        support = (identity, group.element(unit))
        terms.append(LocalTerm(support, _product_table(2, -beta)))
    return Interaction(group, SPINS, tuple(terms))


def plaquette_interaction(coupling: float = 1.0) -> Interaction:
    """Four-spin plaquettes ``−J x_{00} x_{10} x_{01} x_{11}`` on ``Z^2``."""
    group = GroupSpec.parse("Z^2")
    support = tuple(group.element(v) for v in ((0, 0), (1, 0), (0, 1), (1, 1)))
    return Interaction(
        group, SPINS, (LocalTerm(support, _product_table(4, -coupling)),)
    )


def full_shift(group: str = "Z", alphabet: Alphabet = SPINS) -> SFT:
    """Return the full shift on the named group."""
    return SFT.full_shift(GroupSpec.parse(group), alphabet)


def golden_mean_shift() -> SFT:
    """Binary sequences on ``Z`` without two adjacent ones."""
    group = GroupSpec.parse("Z")
    forbidden = Pattern({group.element((0,)): 1, group.element((1,)): 1})
    return SFT(group, BITS, (forbidden,))


def golden_mean_interaction(
    site: float = 0.5, bond: float = 0.25
) -> Interaction:
    """Site energy on ones plus a bond energy on ``01`` and ``10`` pairs."""
    group = GroupSpec.parse("Z")
    identity = group.identity
    return Interaction(
        group,
        BITS,
        (
            LocalTerm((identity,), {(1,): site}),
            LocalTerm(
                (identity, group.element((1,))),
                {(0, 1): bond, (1, 0): bond},
            ),
        ),
    )


def zero_interaction(sft: SFT) -> Interaction:
    """The interaction with no terms on the group of ``sft``."""
    return Interaction(sft.group, sft.alphabet)


def inverse_square_interaction() -> Interaction:
    """``Φ_{{i,j}}(x) = 1/(j−i)²`` when ``x_i = x_j = 1``, on ``Z``."""
    tail = RadialTail({(1, 1): 1.0}, 1.0, 2.0, "2/n", "inverse-square")
    return Interaction(GroupSpec.parse("Z"), BITS, (), tail)


def product_potential() -> LocalPotential:
    """``f(x) = x_0 x_1`` on ``{−1, 1}^Z``."""
    group = GroupSpec.parse("Z")
    support = (group.identity, group.element((1,)))
    return LocalPotential(
        group, SPINS, (PotentialTerm(support, _product_table(2, 1.0)),)
    )
