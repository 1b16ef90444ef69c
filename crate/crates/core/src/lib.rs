//! Exact algorithms for finitely generated nilpotent groups given as quotients
//! of free nilpotent groups: Mal'cev normal forms, subgroup full forms and
//! membership, subgroup presentations, kernels, centralizers, conjugacy and
//! the power problem.

pub mod bounded_extgcd;
pub mod coords;
pub mod decision_suite;
pub mod error;
pub mod format;
pub mod free_nilpotent;
pub mod group_arith;
pub mod presentations;
pub mod subgroup_reduction;
pub mod word;

pub use bounded_extgcd::{
    extgcd_bounded, extgcd_pair_bounded, gcd_vector, reduce_coefficients, BoundedCombinationTrace,
};
pub use coords::{Coords, FreeCoordinates, GroupElement};
pub use decision_suite::{
    centralizer, conjugacy, kernel_and_preimage, power_problem, power_solutions, torsion_bound,
    ConjugacyAnswer, HomSpec, Kernel, PowerAnswer, PowerSolutions,
};
pub use error::{Error, Result};
pub use free_nilpotent::{
    build_hall_basis, coords_inverse, coords_mult, coords_pow, eval_free, structure_relations,
    FreeNilpotentGroup, HallBasis, StructureRelations,
};
pub use group_arith::{inverse, mult, normal_form, power, word_problem, MalcevGroup, ProductGroup};
pub use presentations::{
    consistency_check, direct_product, direct_product_with_maps, from_finite_presentation,
    make_quotient_presentation, quotient_by_elements, DirectProduct, FullFormMatrix,
    NilpotentPresentation, QuotientPresentation,
};
pub use subgroup_reduction::{
    apply_row_operation, evaluate_product, express_in_original_generators, full_form, membership,
    membership_witness, subgroup_presentation, validate_full_form, CoordinateMatrix, Expr,
    FullForm, MembershipWitness, RowOp, SubgroupPresentation, DEFAULT_WORD_CAP,
};
pub use word::ExpWord;
