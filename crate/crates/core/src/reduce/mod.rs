//! The equation model and the structural reductions applied before the
//! finiteness engine.

pub mod equation;
pub mod formal;
pub mod log_element;
pub mod transforms;

pub use equation::{expand_exponential_sum, var_symbol, ExpPolyEquation, ExponentialSum};
pub use formal::FormalCoefficient;
pub use log_element::{
    enclose_symbols, exp_symbol, log_symbol, resolve_symbols, ExpValue, LogElement, LogKind,
    SymbolSource, TWO_PI_I,
};
pub use transforms::{
    classify_degeneracy, clear_denominators, extract_algebraic_log_sublattice,
    rescale_denominator, specialize_formal, specialize_partial, split_two_pi_i,
    translate_by_class, translate_by_vector, zero_vector, Degeneracy, SpecializationFlags,
    Sublattice, Univariate, DEGENERACY_TERM_GUARD,
};
