//! Exact and certified arithmetic: dyadic intervals, integer polynomials,
//! root isolation, algebraic numbers and bivariate polynomials.

pub mod algebraic;
pub mod bivariate;
pub mod complex;
pub mod dyadic;
pub mod exact;
pub mod factor;
pub mod interval;
pub mod mpoly;
pub mod poly;
pub mod roots;

pub use algebraic::{
    alg_arith, alg_arith_capped, resultant, AlgebraicNumber, ArithOp, DEFAULT_DEGREE_CAP,
};
pub use bivariate::BivariatePolynomial;
pub use complex::{parse_decimal, BoxRecord, CInterval, ComplexBox};
pub use dyadic::{Dyadic, Round};
pub use exact::{Enclose, Exact, Ring};
pub use factor::{factor, irreducible_over_q};
pub use interval::Interval;
pub use mpoly::{MPoly, Monomial};
pub use poly::{IntPolynomial, RatPoly};
pub use roots::{isolate_roots, isolate_roots_capped, DEFAULT_PRECISION_CAP};
