"""Subshift Core Package.

Alphabets, patterns, windows, shifts of finite type, admissibility,
one-dimensional extensibility, Gibbs-relation holonomies and window
measures.
"""

from .extension import FollowerGraph
from .holonomy import holonomy_group_orbit, holonomy_swap
from .measures import (
    EmpiricalMeasure,
    PointMass,
    WindowMeasure,
    check_normalized,
    total_variation,
)
from .patterns import (
    Alphabet,
    Pattern,
    Symbol,
    WindowConfig,
    as_configuration,
    shift_pattern,
)
from .sft import (
    SFT,
    Semantics,
    enumerate_fillings,
    is_locally_admissible,
    random_admissible_pattern,
)

__all__ = [
    "SFT",
    "Alphabet",
    "EmpiricalMeasure",
    "FollowerGraph",
    "Pattern",
    "PointMass",
    "Semantics",
    "Symbol",
    "WindowConfig",
    "WindowMeasure",
    "as_configuration",
    "check_normalized",
    "enumerate_fillings",
    "holonomy_group_orbit",
    "holonomy_swap",
    "is_locally_admissible",
    "random_admissible_pattern",
    "shift_pattern",
    "total_variation",
]
