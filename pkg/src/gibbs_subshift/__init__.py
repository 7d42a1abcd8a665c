"""Gibbs Cocycles on Subshifts.

Word-metric geometry of finitely generated groups, shifts of finite type
and their Gibbs relation, interactions and potentials with the cocycles
they induce, and DLR specification kernels with numerical certificates on
finite windows.
"""

from .config import ExperimentConfig, settings
from .errors import (
    DomainError,
    GibbsSubshiftError,
    ResourceError,
    UsageError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ExperimentConfig",
    "GibbsSubshiftError",
    "ResourceError",
    "UsageError",
    "ValidationError",
    "__version__",
    "settings",
]
