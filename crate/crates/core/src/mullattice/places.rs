//! Place decomposition of rational vectors and multiplicative independence.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::kernel::{primitive_integer_vector, v_space_kernel};
use crate::algnum::{Dyadic, Interval};
use crate::{Error, Result};

/// Prime factorization of `|n|`; `n ≠ 0`.
pub fn factor_integer(n: &BigInt) -> Result<BTreeMap<BigInt, u32>> {
    let u: BigUint = n.magnitude().clone();
    if u.is_zero() {
        return Err(Error::invalid("cannot factor 0"));
    }
    if u.is_one() {
        return Ok(BTreeMap::new());
    }
    let (found, rest) = num_prime::nt_funcs::factors(u, None);
    if let Some(r) = rest {
        return Err(Error::invalid(format!(
            "integer factorization incomplete, cofactors {r:?}"
        )));
    }
    Ok(found
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e as u32))
        .collect())
}

/// `p`-adic valuations of a nonzero rational.
pub fn valuations(q: &BigRational) -> Result<BTreeMap<BigInt, i64>> {
    if q.is_zero() {
        return Err(Error::invalid("zero has no valuations"));
    }
    let mut v: BTreeMap<BigInt, i64> = BTreeMap::new();
    for (p, e) in factor_integer(q.numer())? {
        *v.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor_integer(q.denom())? {
        *v.entry(p).or_insert(0) -= e as i64;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Place {
    Prime(#[serde(serialize_with = "ser_bigint")] BigInt),
    Infinite,
}

fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// `log|γᵢ|_v` for every place `v` touched by the entries of `γ`.
///
/// Finite entries are exact multiples of `log p`; the archimedean row is an
/// interval. All weights are 1 over ℚ.
#[derive(Clone, Debug)]
pub struct PlaceMatrix {
    pub places: Vec<Place>,
    pub weights: Vec<BigRational>,
    /// `finite[k][i]`: the coefficient `c` with `log|γᵢ|_{p_k} = c·log p_k`.
    pub finite: Vec<Vec<BigRational>>,
    pub archimedean: Vec<Interval>,
    pub precision_bits: u32,
}

impl PlaceMatrix {
    pub fn from_rationals(gamma: &[BigRational], prec: u32) -> Result<Self> {
        let vals: Vec<BTreeMap<BigInt, i64>> =
            gamma.iter().map(valuations).collect::<Result<_>>()?;
        let primes: BTreeSet<BigInt> = vals.iter().flat_map(|v| v.keys().cloned()).collect();
        let finite: Vec<Vec<BigRational>> = primes
            .iter()
            .map(|p| {
                vals.iter()
                    .map(|v| BigRational::from_integer(-BigInt::from(*v.get(p).unwrap_or(&0))))
                    .collect()
            })
            .collect();
        let archimedean = gamma
            .iter()
            .map(|g| {
                Interval::log_int(g.numer(), prec).sub(&Interval::log_int(g.denom(), prec), prec)
            })
            .collect();
        let mut places: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
        places.push(Place::Infinite);
        Ok(PlaceMatrix {
            weights: vec![BigRational::one(); places.len()],
            places,
            finite,
            archimedean,
            precision_bits: prec,
        })
    }

    pub fn primes(&self) -> Vec<BigInt> {
        self.places
            .iter()
            .filter_map(|p| match p {
                Place::Prime(q) => Some(q.clone()),
                Place::Infinite => None,
            })
            .collect()
    }

    /// Enclosure of the entry `log|γᵢ|_v` for place index `v`.
    pub fn entry(&self, v: usize, i: usize) -> Interval {
        let prec = self.precision_bits;
        match &self.places[v] {
            Place::Infinite => self.archimedean[i].clone(),
            Place::Prime(p) => {
                let c = Interval::from_rational(&self.finite[v][i], prec);
                c.mul(&Interval::log_int(p, prec), prec)
            }
        }
    }

    /// Width-bounded check of `Σ_v w_v·L[v][i] = 0` for each column.
    pub fn product_formula_holds(&self, tol: &Dyadic) -> bool {
        let prec = self.precision_bits;
        (0..self.archimedean.len()).all(|i| {
            let s = (0..self.places.len()).fold(Interval::zero(), |acc, v| {
                let w = Interval::from_rational(&self.weights[v], prec);
                acc.add(&w.mul(&self.entry(v, i), prec), prec)
            });
            s.contains_zero() && s.mag() <= *tol
        })
    }

    /// Integer exponent matrix `e[k][i] = v_{p_k}(γᵢ)`.
    pub fn exponents(&self) -> Vec<Vec<BigRational>> {
        self.finite
            .iter()
            .map(|row| row.iter().map(|c| -c).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// A nonzero `m` with `∏ γᵢ^{mᵢ} = 1`.
    Dependent(Vec<BigInt>),
}

/// Decide multiplicative independence of nonzero rationals.
///
/// Signs are an extra ±1 coordinate: a kernel vector of the prime exponent
/// matrix whose sign sum is odd is doubled.
pub fn mult_independent(gamma: &[BigRational]) -> Result<Independence> {
    let pm = PlaceMatrix::from_rationals(gamma, 64)?;
    let t = gamma.len();
    let kernel = v_space_kernel(&pm.exponents(), t);
    let Some(first) = kernel.first() else {
        return Ok(Independence::Independent);
    };
    let mut m = primitive_integer_vector(first);
    let odd_sign = gamma
        .iter()
        .zip(&m)
        .filter(|(g, _)| g.is_negative())
        .fold(BigInt::zero(), |acc, (_, e)| acc + e);
    if !(odd_sign % 2u32).is_zero() {
        m = m.iter().map(|e| e * 2u32).collect();
    }
    debug_assert!(power_product(gamma, &m).is_one());
    Ok(Independence::Dependent(m))
}

/// `∏ γᵢ^{mᵢ}` exactly.
pub fn power_product(gamma: &[BigRational], m: &[BigInt]) -> BigRational {
    gamma.iter().zip(m).fold(BigRational::one(), |acc, (g, e)| {
        let k: i64 = e.try_into().expect("exponent fits in i64");
        let p = num_traits::pow(g.clone(), k.unsigned_abs() as usize);
        acc * if k < 0 { p.recip() } else { p }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn independence_examples() {
        assert_eq!(mult_independent(&[q(2), q(3)]).unwrap(), Independence::Independent);
        assert_eq!(
            mult_independent(&[q(2), q(4)]).unwrap(),
            Independence::Dependent(vec![2.into(), (-1).into()])
        );
        assert_eq!(
            mult_independent(&[q(6), q(10), q(15)]).unwrap(),
            Independence::Independent
        );
    }

    #[test]
    fn sign_torsion_is_doubled() {
        let r = mult_independent(&[q(-2), q(2)]).unwrap();
        assert_eq!(r, Independence::Dependent(vec![2.into(), (-2).into()]));
        let r = mult_independent(&[q(-1)]).unwrap();
        assert_eq!(r, Independence::Dependent(vec![2.into()]));
    }

    #[test]
    fn product_formula() {
        let g = [q(12), BigRational::new(5.into(), 18.into()), q(-7)];
        let pm = PlaceMatrix::from_rationals(&g, 128).unwrap();
        assert_eq!(pm.places.len(), 5);
        assert!(pm.product_formula_holds(&Dyadic::pow2(-64)));
    }
}
