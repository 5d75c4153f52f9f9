"""Exact-arithmetic symplectic linear algebra.

Classification of coisotropic pairs by complete invariants and normal
forms, the algebra of linear relations with Towber-type signatures, and
linear canonical relations with factorization and partial classification.
All arithmetic is exact over the rationals.
"""

from .linalg import (
    Mat,
    Subspace,
    complement,
    contains,
    intersect,
    kernel,
    rref,
    span,
    sum_spaces,
)
from .symplectic import (
    Reduction,
    SympBasis,
    SympMap,
    SympSpace,
    WittArtin,
    classify,
    darboux_basis,
    dsum,
    dual_completion,
    extend_lagrangian_basis,
    is_symplectic_map,
    lagrangian_complement,
    map_lagrangian_splitting,
    minus,
    omega,
    orthogonal,
    reduce_space,
    reduce_subspace,
    sp_rank,
    standard_space,
    witt_artin,
)
from .relations import (
    Relation,
    TowberSignature,
    adjoint,
    compose,
    conjugate,
    converse,
    corners,
    direct_sum,
    endrel_isomorphic,
    endrel_morphism,
    flags,
    graph,
    identity_relation,
    towber_block,
    towber_signature,
    transpose,
)
from .coiso import (
    CoisoPair,
    ElementaryDecomposition,
    build_equivalence,
    canonical_invariants,
    elementary_decomposition,
    elementary_invariants,
    is_elementary_type,
    k_to_n,
    linalg_invariants,
    n_to_k,
    normal_form_pair,
    pairs_equivalent,
    validate_k,
)
from .canonical import (
    BlockNormalForm,
    CanonicalRelation,
    Equivalent,
    Factorization,
    Inequivalent,
    ReducedProblem,
    Undecided,
    block_normal_form,
    canonical_relation,
    compose_canonical,
    decide_equivalence,
    equivalence_by_parts,
    factorize,
    from_symplectomorphism,
    induced_phi,
    intersection_profile,
    is_canonical,
    is_equivalence,
    reduction_relation,
)

__version__ = "0.1.0"
