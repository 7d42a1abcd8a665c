"""Gibbs-Relation Holonomies.

The involutions ``ψ_{ω,η}`` exchange two patterns on ``Λ_N`` wherever the
exchange stays inside the subshift; together they generate the relation of
configurations that differ only on ``Λ_N``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from typing import TYPE_CHECKING

from gibbs_subshift.errors import UsageError

from .patterns import Pattern, WindowConfig
from .sft import SFT, Semantics, enumerate_fillings

if TYPE_CHECKING:
    from gibbs_subshift.groups import Element

logger = logging.getLogger(__name__)


def holonomy_swap(
    sft: SFT,
    omega: Pattern,
    eta: Pattern,
    window: WindowConfig,
    semantics: Semantics = Semantics.LOCAL,
) -> WindowConfig:
    """Apply ``ψ_{ω,η}`` to a window.

    The window is changed only when it carries ``ω`` (or ``η``) on ``Λ_N``
    and both the window and its swapped copy are admissible, so applying
    the swap twice always returns the original window.

    Args:
    ----
        sft: The shift of finite type
        omega: First pattern on ``Λ_N``
        eta: Second pattern on ``Λ_N``
        window: Window whose interior contains ``Λ_N``
        semantics: Admissibility semantics for the swapped window

    Returns:
    -------
        The swapped window, or ``window`` itself

    Raises:
    ------
        UsageError: If the supports differ or leave the interior

    """
    if omega.support != eta.support:
        msg = "Holonomy patterns must share the same support"
        raise UsageError(msg)
    if not omega.support <= window.region:
        msg = "Holonomy support must lie inside the window interior"
        raise UsageError(msg)
    if omega == eta:
        return window
    current = window.interior.restrict(omega.sites)
    if current == omega:
        target = eta
    elif current == eta:
        target = omega
    else:
        return window
    swapped = window.with_interior(target)
    if sft.is_admissible(swapped, semantics) and sft.is_admissible(
        window, semantics
    ):
        return swapped
    return window


def holonomy_group_orbit(
    sft: SFT,
    region: Iterable[Element],
    window: WindowConfig,
    semantics: Semantics = Semantics.LOCAL,
) -> list[WindowConfig]:
    """Return the class of ``window`` under changes confined to ``Λ_N``.

    The class consists of every admissible filling of ``Λ_N`` compatible
    with the rest of the window, in the order of :func:`enumerate_fillings`.
    """
    sites = frozenset(region)
    if not sites <= window.region:
        msg = "Orbit region must lie inside the window interior"
        raise UsageError(msg)
    if not sites or not sft.is_admissible(window, semantics):
        return [window]
    exterior = window.configuration.without(sites)
    fillings = enumerate_fillings(sft, sites, exterior, semantics)
    logger.debug("Orbit on %d sites has %d members", len(sites), len(fillings))
    return [window.with_interior(filling) for filling in fillings]
