"""Crossed module actions on finite dimensional C*-algebras and their crossed products."""

from ._version import __version__  # isort:skip  this has to be 1st import
from xmod.core import VerificationFailed, XmodError, config_override, configure

from ._actions import (
    canonical_action_on_BH,
    characters,
    cm_action,
    diagonal_action,
    equivariant_map,
    extension,
    fiber_dimensions,
    function_algebra_action,
    green_action,
    groupoid_action,
    ideal_unit,
    inner_action,
    left_translation,
    pontryagin_compose,
    pontryagin_decompose,
    pullback_action,
    restrict_and_quotient,
    spectral_projections,
    tensor_fiber_dimensions,
    trivial_action,
    unit_action,
    verify_dual_equivariance,
)
from ._convolution import bundle_crossed_product, crossed_product
from ._crossed_products import (
    cm_crossed_product,
    coequalizer_ideal,
    cm_crossed_product_map,
    cm_cstar,
    covariant_rep,
    crossed_product_map,
    disintegrate,
    integrate,
    quotient_group_crossed_product,
    rho_sigma,
    standard_representation,
    verify_exactness,
    verify_thm51,
)
from ._morita import bimodule_check, corner_of_crossed_product, corners, linking, verify_morita
from ._symmetries import (
    aut2,
    bisection_group,
    bisection_inverse,
    bisection_to_aut,
    cm_groupoid_action,
    induced_algebra_action,
    translation_action,
    translation_bridge,
)
from .types import (
    Bisection,
    BimoduleWitness,
    CharacterGroup,
    CMAction,
    CMGroupoidAction,
    CovariantRep,
    CrossedProductResult,
    EquivariantMap,
    GroupoidAlgebraAction,
    GroupoidAut,
    LinkingData,
    RhoSigmaPair,
    VerificationReport,
)

__all__ = (
    "Bisection",
    "BimoduleWitness",
    "CharacterGroup",
    "CMAction",
    "CMGroupoidAction",
    "CovariantRep",
    "CrossedProductResult",
    "EquivariantMap",
    "GroupoidAlgebraAction",
    "GroupoidAut",
    "LinkingData",
    "RhoSigmaPair",
    "VerificationReport",
    "VerificationFailed",
    "XmodError",
    "configure",
    "config_override",
    "groupoid_action",
    "cm_action",
    "trivial_action",
    "unit_action",
    "green_action",
    "inner_action",
    "function_algebra_action",
    "left_translation",
    "canonical_action_on_BH",
    "diagonal_action",
    "pullback_action",
    "equivariant_map",
    "ideal_unit",
    "extension",
    "restrict_and_quotient",
    "characters",
    "spectral_projections",
    "pontryagin_decompose",
    "pontryagin_compose",
    "fiber_dimensions",
    "verify_dual_equivariance",
    "tensor_fiber_dimensions",
    "crossed_product",
    "bundle_crossed_product",
    "rho_sigma",
    "coequalizer_ideal",
    "cm_crossed_product",
    "cm_cstar",
    "quotient_group_crossed_product",
    "crossed_product_map",
    "cm_crossed_product_map",
    "covariant_rep",
    "integrate",
    "disintegrate",
    "standard_representation",
    "verify_thm51",
    "verify_exactness",
    "bisection_group",
    "bisection_to_aut",
    "bisection_inverse",
    "aut2",
    "cm_groupoid_action",
    "translation_action",
    "induced_algebra_action",
    "translation_bridge",
    "linking",
    "corners",
    "corner_of_crossed_product",
    "verify_morita",
    "bimodule_check",
    "__version__",
)
