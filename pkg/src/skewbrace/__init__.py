"""Finite skew braces from explicit tables.

Construction of finite groups and skew braces (from nilpotent algebras,
exact factorizations, and semidirect products), subgroup-lattice and
stable-subgroup enumeration, and Galois correspondence ratios.
"""

from .algebras import (
    FpAlgebra,
    SubspaceBasis,
    additive_group,
    brace_from_radical,
    brace_from_radical_flipped,
    circle,
    circle_group,
    circle_inverse,
    circle_power,
    degraaf_algebra,
    enumerate_left_ideals,
    enumerate_right_ideals,
    enumerate_subspaces,
    index_vector,
    make_algebra,
    multiply,
    subspace_subgroup,
    vector_index,
)
from .braces import (
    GcRatio,
    SkewBrace,
    enumerate_stable_subgroups,
    gc_ratio,
    hgs_count,
    is_bi_skew,
    is_circ_stable,
    is_ideal,
    skew_brace_automorphism_count,
    stability_map,
    validate_skew_brace,
)
from .constructions import (
    ExactFactorization,
    FamilySpec,
    FormulaReport,
    a5_factorization,
    divisor_count,
    exact_factorization,
    family_formula_report,
    family_spec,
    multiplicative_order,
    all_additive_subgroups_stable,
    semidirect_biskew,
    sigma,
    stability_criterion_z9z6,
    stable_iff_normalized_check,
    zappa_szep_brace,
)
from .groups import (
    DEFAULT_AUT_CAP,
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    SubgroupSet,
    automorphism_group,
    build_from_table,
    closure_from_permutations,
    cyclic_group,
    direct_product,
    element_order,
    enumerate_subgroups,
    generated_subgroup,
    is_isomorphic,
    is_normal,
    semidirect_product_cyclic,
    small_generating_set,
    subgroup_as_group,
)

__version__ = "0.1.0"
