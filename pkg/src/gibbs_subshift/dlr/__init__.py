"""DLR Engine Package.

Cocycle sources, specification kernels, exact finite-volume Gibbs tables,
Glauber sampling and the conformal/DLR cross-checks.
"""

from .kernels import (
    FiniteVolumeGibbs,
    SpecificationKernel,
    base_point_deviation,
    direct_kernel,
    dlr_kernel,
    exact_gibbs,
    kernel_deviation,
    normalize_log_weights,
    partition_function,
)
from .sampler import (
    GlauberChain,
    GlauberRun,
    detailed_balance_deviation,
    glauber_chain,
)
from .sources import (
    CocycleSource,
    InteractionSource,
    PotentialSource,
    zero_source,
)
from .verification import (
    DLRCheck,
    RNResult,
    ball_sum_kernel,
    covering_radius,
    tower_deviation,
    verify_ball_sum,
    verify_conformal,
    verify_dlr_from_conformal,
)

__all__ = [
    "CocycleSource",
    "DLRCheck",
    "FiniteVolumeGibbs",
    "GlauberChain",
    "GlauberRun",
    "InteractionSource",
    "PotentialSource",
    "RNResult",
    "SpecificationKernel",
    "ball_sum_kernel",
    "base_point_deviation",
    "covering_radius",
    "detailed_balance_deviation",
    "direct_kernel",
    "dlr_kernel",
    "exact_gibbs",
    "glauber_chain",
    "kernel_deviation",
    "normalize_log_weights",
    "partition_function",
    "tower_deviation",
    "verify_ball_sum",
    "verify_conformal",
    "verify_dlr_from_conformal",
    "zero_source",
]
