//! Multiplicative lattices: independence of rationals, the lower-bound
//! constant `a₃`, integer-relation screening and exact kernels.

pub mod a3;
pub mod kernel;
pub mod lp;
pub mod places;
pub mod relations;

pub use a3::{a3_constant, brute_force_a3, l1_ball, A3Bound, A3Record, A3_DIMENSION_GUARD};
pub use kernel::{primitive_integer_vector, rank, rref, v_space_kernel};
pub use places::{
    factor_integer, mult_independent, power_product, valuations, Independence, Place, PlaceMatrix,
};
pub use relations::{
    find_integer_relations, find_verified_relations, lll_reduce, principal_log, verify_relation,
    RelationCandidate, RelationRecord, RelationStatus, SymbolicValue,
};
