//! Exact elements of ℚ̄ and the ring interface shared by coefficient types.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::{alg_arith, AlgebraicNumber, ArithOp};
use super::complex::CInterval;
use crate::{Error, Result};

/// Commutative ring with fallible operations (algebraic arithmetic can hit
/// its degree guard).
pub trait Ring: Clone + fmt::Debug + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, o: &Self) -> Result<Self>;
    fn mul(&self, o: &Self) -> Result<Self>;

    fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).map(|d| d.is_zero()).unwrap_or(false)
    }

    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = if n < 0 { Self::one().neg() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&one).expect("integer arithmetic");
        }
        acc
    }

    fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// Certified numeric enclosure of an exact value.
pub trait Enclose {
    fn enclose(&self, prec: u32) -> Result<CInterval>;
}

/// An exact element of ℚ̄.
#[derive(Clone)]
pub enum Exact {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

impl Exact {
    pub fn int(n: i64) -> Self {
        Exact::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Exact::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Collapse degree-one algebraic numbers to rationals.
    pub fn from_algebraic(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(q) => Exact::Rational(q),
            None => Exact::Algebraic(a),
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            Exact::Rational(q) => AlgebraicNumber::from_rational(q),
            Exact::Algebraic(a) => a.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Exact::Rational(q) => Some(q),
            Exact::Algebraic(_) => None,
        }
    }

    fn arith(&self, o: &Exact, op: ArithOp) -> Result<Exact> {
        if let (Exact::Rational(a), Exact::Rational(b)) = (self, o) {
            return Ok(Exact::Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => {
                    if Zero::is_zero(b) {
                        return Err(Error::DivisionByZero);
                    }
                    a / b
                }
            }));
        }
        Ok(Exact::from_algebraic(alg_arith(
            &self.to_algebraic(),
            &o.to_algebraic(),
            op,
        )?))
    }

    pub fn div(&self, o: &Exact) -> Result<Exact> {
        self.arith(o, ArithOp::Div)
    }

    pub fn inv(&self) -> Result<Exact> {
        Exact::int(1).div(self)
    }

    pub fn powi(&self, k: i64) -> Result<Exact> {
        match self {
            Exact::Rational(q) => {
                if k < 0 && Zero::is_zero(q) {
                    return Err(Error::DivisionByZero);
                }
                let p = num_traits::pow(q.clone(), k.unsigned_abs() as usize);
                Ok(Exact::Rational(if k < 0 { p.recip() } else { p }))
            }
            Exact::Algebraic(a) => Ok(Exact::from_algebraic(a.pow(k)?)),
        }
    }

    pub fn try_eq(&self, o: &Exact) -> Result<bool> {
        match (self, o) {
            (Exact::Rational(a), Exact::Rational(b)) => Ok(a == b),
            (Exact::Algebraic(a), Exact::Algebraic(b)) => a.try_eq(b),
            _ => Ok(false),
        }
    }
}

impl Ring for Exact {
    fn zero() -> Self {
        Exact::int(0)
    }

    fn one() -> Self {
        Exact::int(1)
    }

    fn is_zero(&self) -> bool {
        match self {
            Exact::Rational(q) => Zero::is_zero(q),
            Exact::Algebraic(a) => a.is_zero(),
        }
    }

    fn is_one(&self) -> bool {
        match self {
            Exact::Rational(q) => One::is_one(q),
            Exact::Algebraic(a) => a.is_one(),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Exact::Rational(q) => Exact::Rational(-q),
            Exact::Algebraic(a) => Exact::Algebraic(a.neg()),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        self.arith(o, ArithOp::Add)
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        self.arith(o, ArithOp::Sub)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        self.arith(o, ArithOp::Mul)
    }

    fn from_int(n: i64) -> Self {
        Exact::int(n)
    }

    fn pow(&self, k: u32) -> Result<Self> {
        self.powi(k as i64)
    }
}

impl Enclose for BigRational {
    fn enclose(&self, prec: u32) -> Result<CInterval> {
        Ok(CInterval::from_rational(self, prec))
    }
}

impl Enclose for AlgebraicNumber {
    fn enclose(&self, prec: u32) -> Result<CInterval> {
        self.enclosure_bits(prec.saturating_sub(8).max(16))
    }
}

impl Enclose for Exact {
    fn enclose(&self, prec: u32) -> Result<CInterval> {
        match self {
            Exact::Rational(q) => q.enclose(prec),
            Exact::Algebraic(a) => a.enclose(prec),
        }
    }
}

impl PartialEq for Exact {
    fn eq(&self, o: &Self) -> bool {
        self.try_eq(o).unwrap_or(false)
    }
}

impl From<BigRational> for Exact {
    fn from(q: BigRational) -> Self {
        Exact::Rational(q)
    }
}

impl From<AlgebraicNumber> for Exact {
    fn from(a: AlgebraicNumber) -> Self {
        Exact::from_algebraic(a)
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Rational(q) => write!(f, "{q}"),
            Exact::Algebraic(a) => write!(f, "{a}"),
        }
    }
}
