"""
Finite groups, groupoids, crossed modules and finite dimensional C*-algebras.
"""

from . import _errors as errors
from ._algebra import (
    AlgebraElement,
    Fibering,
    Grading,
    Ideal,
    StarAlgebra,
    StarHom,
    algebra_from_structure,
    center,
    change_basis,
    complex_line,
    corner,
    diagonal_tensor,
    direct_sum,
    fiber,
    fiber_embedding,
    functions_on,
    group_algebra,
    groupoid_algebra,
    i_norm,
    ideal_generated,
    identity_star_hom,
    is_isomorphic,
    make_ideal,
    matrix_algebra,
    norms,
    operator_norm,
    quotient_algebra,
    refiber,
    star_hom,
    tensor,
    wedderburn,
    wedderburn_decomposition,
)
from ._config import XmodConfig, config_override, configure, get_config, rng
from ._crossed_modules import (
    CrossedModule,
    CrossedModuleMorphism,
    b_group,
    cm_morphism,
    crossed_module,
    cyclic_pair,
    from_abelian_extension,
    from_central_extension,
    from_isotropy,
    from_normal_subgroup,
    image_is_normal,
    kernel_is_central,
    validate_crossed_module,
)
from ._errors import ParseError, VerificationFailed, XmodError
from ._groupoids import (
    GROUP_OBJECT,
    FiniteGroupoid,
    GroupBundle,
    GroupoidHom,
    action_groupoid,
    bundle_groupoid,
    group_groupoid,
    groupoid_from_data,
    groupoid_hom,
    isotropy_bundle,
    orbits,
    pair_groupoid,
    quotient_groupoid,
    quotient_projection,
    restrict_groupoid,
    space,
    transformation_groupoid,
    transformation_projection,
    translation_groupoid_HdG,
)
from ._groups import (
    FiniteGroup,
    GroupHom,
    alternating,
    builtin_group,
    cyclic,
    direct_product,
    group_from_table,
    kernel,
    klein4,
    make_hom,
    quotient_group,
    subgroup,
    subgroup_image,
    symmetric,
    trivial_group,
)

__all__ = (
    "errors",
    "XmodError",
    "VerificationFailed",
    "ParseError",
    "XmodConfig",
    "configure",
    "get_config",
    "config_override",
    "rng",
    "FiniteGroup",
    "GroupHom",
    "group_from_table",
    "make_hom",
    "subgroup",
    "subgroup_image",
    "kernel",
    "quotient_group",
    "cyclic",
    "symmetric",
    "alternating",
    "klein4",
    "trivial_group",
    "direct_product",
    "builtin_group",
    "GROUP_OBJECT",
    "FiniteGroupoid",
    "GroupBundle",
    "GroupoidHom",
    "groupoid_from_data",
    "groupoid_hom",
    "group_groupoid",
    "pair_groupoid",
    "space",
    "action_groupoid",
    "bundle_groupoid",
    "isotropy_bundle",
    "quotient_groupoid",
    "quotient_projection",
    "restrict_groupoid",
    "orbits",
    "transformation_groupoid",
    "transformation_projection",
    "translation_groupoid_HdG",
    "CrossedModule",
    "CrossedModuleMorphism",
    "crossed_module",
    "validate_crossed_module",
    "from_normal_subgroup",
    "b_group",
    "from_abelian_extension",
    "from_central_extension",
    "from_isotropy",
    "cyclic_pair",
    "cm_morphism",
    "kernel_is_central",
    "image_is_normal",
    "StarAlgebra",
    "AlgebraElement",
    "Fibering",
    "Grading",
    "Ideal",
    "StarHom",
    "algebra_from_structure",
    "complex_line",
    "matrix_algebra",
    "functions_on",
    "direct_sum",
    "tensor",
    "diagonal_tensor",
    "refiber",
    "change_basis",
    "groupoid_algebra",
    "group_algebra",
    "corner",
    "fiber",
    "fiber_embedding",
    "center",
    "wedderburn",
    "wedderburn_decomposition",
    "is_isomorphic",
    "ideal_generated",
    "make_ideal",
    "quotient_algebra",
    "star_hom",
    "identity_star_hom",
    "operator_norm",
    "i_norm",
    "norms",
)
