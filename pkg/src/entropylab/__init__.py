"""Trajectory growth, algebraic entropy and Addition-Theorem experiments
for endomorphisms of concrete groups."""

from .at_harness import (ATReport, GrowthSpec, Verdict, at_check, check_cen_inequality,
                         check_mettor_chain, check_zero_reduction, growth_witness)
from .entropy import (EntropyEstimate, ExactLinear, HEvidence, ZeroCertificate, dyadic_sequence,
                      dyadic_sequence_mod, h_evidence, zero_entropy_certificate)
from .errors import (BudgetExceeded, ConfigError, EntropyLabError, KindMismatch, MalformedElement,
                     NoCertificate, NotCentral, NotHomomorphism, NotInvariant, NotNormal)
from .groups import (FinitarySymmetric, FiniteGroup, FiniteSubgroup, Lamplighter,
                     NormalSubgroupSpec, PermutationGroup, RestrictedPower, subgroup_closure)
from .properties import lemma_property_suite
from .trajectory import back_trajectory, count_cosets, ell, ell_mod, trajectory, trajectory_table

__version__ = "0.1.0"

__all__ = [
    "ATReport",
    "BudgetExceeded",
    "ConfigError",
    "EntropyEstimate",
    "EntropyLabError",
    "ExactLinear",
    "FinitarySymmetric",
    "FiniteGroup",
    "FiniteSubgroup",
    "GrowthSpec",
    "HEvidence",
    "KindMismatch",
    "Lamplighter",
    "MalformedElement",
    "NoCertificate",
    "NormalSubgroupSpec",
    "NotCentral",
    "NotHomomorphism",
    "NotInvariant",
    "NotNormal",
    "PermutationGroup",
    "RestrictedPower",
    "Verdict",
    "ZeroCertificate",
    "at_check",
    "back_trajectory",
    "check_cen_inequality",
    "check_mettor_chain",
    "check_zero_reduction",
    "count_cosets",
    "dyadic_sequence",
    "dyadic_sequence_mod",
    "ell",
    "ell_mod",
    "growth_witness",
    "h_evidence",
    "lemma_property_suite",
    "subgroup_closure",
    "trajectory",
    "trajectory_table",
    "zero_entropy_certificate",
]
