"""Universal Euler characteristic of finite group actions and V-manifolds.

Values live in the ring whose additive basis is the set of isomorphism
classes of finite groups, with ``T^G * T^H = T^(G x H)``.
"""
from .eqcomplex import (
    EquivariantCellComplex,
    chi_orb_direct,
    chi_un_complex,
    fixed_subcomplex,
    induce_complex,
    point_complex,
    product_complex,
    strata_chi,
)
from .errors import (
    ChiunError,
    GroupTooLarge,
    InvalidAction,
    InvalidPermutation,
    IsoUndecided,
    SchemaError,
    SubgroupEnumTooLarge,
)
from .groupring import (
    HomSpec,
    RElement,
    T,
    evaluate_hom,
    format_relement,
    parse_relement,
    r_add,
    r_mul,
    r_to_polynomial,
)
from .gset import (
    GSet,
    cartesian_power_gset,
    class_in_R,
    induce,
    orbits_and_stabilizers,
    remove_big_diagonal,
)
from .isoclass import (
    ClassRegistry,
    GroupClassId,
    are_isomorphic,
    classify,
    decompose_indecomposable,
    default_registry,
    find_isomorphism,
)
from .lambdaseries import (
    LambdaStructure,
    SeriesR,
    decompose_lambda_factors,
    element_lambda_series,
    is_effective,
    monomial_lambda_series,
    power,
    series_inverse,
    series_mul,
)
from .permgroup import (
    LIMITS,
    GammaSpec,
    PermGroup,
    direct_product,
    enumerate_elements,
    group_from_spec,
    hom_count,
    subgroup_conjugacy_classes,
    wreath_symmetric,
)
from .vstrata import (
    VStrata,
    chi_un_vmfd,
    conf_oracle,
    sym_power_oracle,
    verify_macdonald,
    verify_macdonald_gset,
)

__version__ = "0.1.0"

__all__ = [
    "are_isomorphic",
    "cartesian_power_gset",
    "chi_orb_direct",
    "chi_un_complex",
    "chi_un_vmfd",
    "ChiunError",
    "class_in_R",
    "classify",
    "ClassRegistry",
    "conf_oracle",
    "decompose_indecomposable",
    "decompose_lambda_factors",
    "default_registry",
    "direct_product",
    "element_lambda_series",
    "enumerate_elements",
    "EquivariantCellComplex",
    "evaluate_hom",
    "find_isomorphism",
    "fixed_subcomplex",
    "format_relement",
    "GammaSpec",
    "group_from_spec",
    "GroupClassId",
    "GroupTooLarge",
    "GSet",
    "hom_count",
    "HomSpec",
    "induce",
    "induce_complex",
    "InvalidAction",
    "InvalidPermutation",
    "is_effective",
    "IsoUndecided",
    "LambdaStructure",
    "LIMITS",
    "monomial_lambda_series",
    "orbits_and_stabilizers",
    "parse_relement",
    "PermGroup",
    "point_complex",
    "power",
    "product_complex",
    "r_add",
    "r_mul",
    "r_to_polynomial",
    "RElement",
    "remove_big_diagonal",
    "SchemaError",
    "series_inverse",
    "series_mul",
    "SeriesR",
    "strata_chi",
    "subgroup_conjugacy_classes",
    "SubgroupEnumTooLarge",
    "sym_power_oracle",
    "T",
    "verify_macdonald",
    "verify_macdonald_gset",
    "VStrata",
    "wreath_symmetric",
]
