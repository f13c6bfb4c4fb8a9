"""Numerical toolkit for extremal symplectic potentials on Delzant polytopes."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .polytope import (
    PRESET_NAMES, BoundaryMeasure, DelzantPolytope, Facet, MomentTable, ValidationReport,
    barycentric_translate, boundary_measure, box, clipped_moments, from_dict, from_json,
    moments, preset, shrink, standard_simplex, translate, validate_delzant,
)
from .quadrature import QuadratureScheme, ball_rule, build_scheme, weighted_sum
from .potentials import (
    AffineFunction, GuilleminPotential, MollifiedPotential, MonomialBasis, ParametrizedPotential,
    PLFunction, Polynomial, Potential, eval_guillemin, legendre, legendre_roundtrip, mollify,
    monomial_exponents, normalize, potential_from_dict, potential_to_dict,
)
from .functional import (
    ExtremalAffine, FunctionalReport, coercivity_probe, eval_F, eval_L, first_variation,
    optimal_scaling, scaling_identity_residual, solve_extremal_affine,
)
from .abreu import AbreuResidual, abreu_operator, residual_report, sample_points
from .optimizer import MinimizeConfig, MinimizeTrace, gradient_F, minimize
from .stability import Crease, StabilityReport, check_condition_46, facet_margins, crease_grid, eval_L_pl, scan_creases
