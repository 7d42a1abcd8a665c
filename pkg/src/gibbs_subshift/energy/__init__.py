"""Energy Package.

Interactions, potentials with their variation norms, and the
translate-weighting maps between them.
"""

from .conversion import (
    Counterexample,
    DictatorRule,
    FullDimensionalBound,
    MeanEnergy,
    PeriodicView,
    SameCocycleReport,
    SchemeKind,
    WeightScheme,
    check_same_cocycle,
    counterexample_interaction,
    full_dimensional_bound,
    interaction_from_potential,
    mean_energy,
    translate_weight,
)
from .interactions import (
    BNorm,
    CocycleValue,
    FullDimensionality,
    HamiltonianValue,
    Interaction,
    LocalTerm,
    RadialTail,
    b_norm,
    cocycle_interaction,
    energy_of_translates,
    hamiltonian,
    interaction_translates,
    is_full_dimensional,
)
from .potentials import (
    DivergenceCertificate,
    LocalPotential,
    NormReport,
    Potential,
    PotentialTerm,
    SeriesPotential,
    cocycle_potential,
    constant_potential,
    partial_sum_f_m,
    shell_norm,
    sv_norm,
    variation,
    variations,
    volume_norm,
)

__all__ = [
    "BNorm",
    "CocycleValue",
    "Counterexample",
    "DictatorRule",
    "DivergenceCertificate",
    "FullDimensionalBound",
    "FullDimensionality",
    "HamiltonianValue",
    "Interaction",
    "LocalPotential",
    "LocalTerm",
    "MeanEnergy",
    "NormReport",
    "PeriodicView",
    "Potential",
    "PotentialTerm",
    "RadialTail",
    "SameCocycleReport",
    "SchemeKind",
    "SeriesPotential",
    "WeightScheme",
    "b_norm",
    "check_same_cocycle",
    "cocycle_interaction",
    "cocycle_potential",
    "constant_potential",
    "counterexample_interaction",
    "energy_of_translates",
    "full_dimensional_bound",
    "hamiltonian",
    "interaction_from_potential",
    "interaction_translates",
    "is_full_dimensional",
    "mean_energy",
    "partial_sum_f_m",
    "shell_norm",
    "sv_norm",
    "translate_weight",
    "variation",
    "variations",
    "volume_norm",
]
