"""Group Geometry Package.

Normal forms, the word metric, ball enumeration and growth diagnostics for
the built-in finitely generated groups.
"""

from .balls import (
    BallTable,
    GrowthReport,
    GrowthRow,
    ball,
    ball_sizes,
    growth_table,
    shell_growth_constant,
    shell_sizes,
    sphere_ratio_sup,
)
from .elements import (
    Element,
    GeneratorSet,
    GroupFamily,
    GroupSpec,
    distance,
    multiply,
    shortlex_key,
    support_key,
    word_length,
)
from .mixins import ShortlexOrderMixin

__all__ = [
    "BallTable",
    "Element",
    "GeneratorSet",
    "GroupFamily",
    "GroupSpec",
    "GrowthReport",
    "GrowthRow",
    "ShortlexOrderMixin",
    "ball",
    "ball_sizes",
    "distance",
    "growth_table",
    "multiply",
    "shell_growth_constant",
    "shell_sizes",
    "shortlex_key",
    "sphere_ratio_sup",
    "support_key",
    "word_length",
]
