"""Numerical laboratory for the geometry of 1-unconditional sequence spaces."""

from .vectors import FiniteVector, pointwise_power
from .spaces import (Convexify, DirectSum, Dual, Interpolate, Lp, SpaceError, SpaceSpec,
                     Tsirelson, dual_norm, estimate_disjoint_estimate, interpolation_norm, norm,
                     norming_functional, simplify, space_from_json, validate)
from .tsirelson import (AdmissibilityRule, GrowthFunction, lemma54_check,
                        lower_q_constant_search, t_norm_exact, t_norm_interval_lb, tp_norm)
from .mazur import (BallMap, MazurSolution, compose_map, construct_lemma44, extend_map,
                    geometric_mean, modulus_bound_45_46, normalized_coupling, solve_F,
                    verify_cor43, verify_lemma42, weight_vector)
from .metric import (MapUnderTest, ModulusEstimate, lemma15_check, lemma16_check,
                     lipschitz_large_const, mid_membership, modulus_scan)

__all__ = [
    "FiniteVector", "pointwise_power",
    "Convexify", "DirectSum", "Dual", "Interpolate", "Lp", "SpaceError", "SpaceSpec", "Tsirelson",
    "dual_norm", "estimate_disjoint_estimate", "interpolation_norm", "norm", "norming_functional",
    "simplify", "space_from_json", "validate",
    "AdmissibilityRule", "GrowthFunction", "lemma54_check", "lower_q_constant_search",
    "t_norm_exact", "t_norm_interval_lb", "tp_norm",
    "BallMap", "MazurSolution", "compose_map", "construct_lemma44", "extend_map", "geometric_mean",
    "modulus_bound_45_46", "normalized_coupling", "solve_F", "verify_cor43", "verify_lemma42",
    "weight_vector",
    "MapUnderTest", "ModulusEstimate", "lemma15_check", "lemma16_check", "lipschitz_large_const",
    "mid_membership", "modulus_scan",
]
