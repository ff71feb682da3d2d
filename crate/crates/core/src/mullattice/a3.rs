//! Lower bound `a₃` with `h(γ^m) ≥ a₃·|m|₁` for multiplicatively independent
//! rational `γ`.
//!
//! Over ℚ, `h(γ^m) = ½ Σ_v |m·L_v|` where `L_v` is the row of `log|γᵢ|_v`.
//! Writing `z_p = Σᵢ mᵢ·v_p(γᵢ)`, this is
//! `½ (Σ_p log p·|z_p| + |Σ_p log p·z_p|)`. Replacing `log p` by rational
//! under-estimates gives a polyhedral norm `q̃ ≤ h`, and
//! `a₃ = 1 / max{|m|₁ : q̃(m) ≤ 1}` is found by one exact LP per orthant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::lp::{maximize, LpOutcome};
use super::places::{mult_independent, power_product, Independence, PlaceMatrix};
use crate::algnum::{Dyadic, Interval, Round};
use crate::height::rational_height;
use crate::{Error, Result};

/// Largest vector length accepted by [`a3_constant`].
pub const A3_DIMENSION_GUARD: usize = 6;

const A3_PRECISION_CAP: u32 = 4096;

#[derive(Clone, Debug)]
pub struct A3Bound {
    /// Certified lower bound on `a₃`.
    pub lower: Dyadic,
    /// Exact optimum of the relaxed LP; `lower ≤ 1/max_l1`.
    pub max_l1: BigRational,
    /// A maximizer of `|m|₁` on the unit ball of the relaxed norm.
    pub direction: Vec<BigRational>,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct A3Record {
    pub a3_lower: String,
    pub direction: Vec<String>,
    pub precision_bits: u32,
}

impl A3Bound {
    pub fn to_record(&self) -> A3Record {
        A3Record {
            a3_lower: self.lower.to_decimal_string(),
            direction: self.direction.iter().map(|q| q.to_string()).collect(),
            precision_bits: self.precision_bits,
        }
    }
}

fn dependence(m: Vec<BigInt>) -> Error {
    Error::DependenceDetected(m.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect())
}

/// Certified `a₃(γ)`; escalates precision until the relaxed norm is positive.
pub fn a3_constant(gamma: &[BigRational], prec: u32) -> Result<A3Bound> {
    if gamma.is_empty() {
        return Err(Error::invalid("a3 needs at least one entry"));
    }
    if gamma.len() > A3_DIMENSION_GUARD {
        return Err(Error::GuardExceeded {
            count: gamma.len() as u128,
            guard: A3_DIMENSION_GUARD as u128,
        });
    }
    if let Independence::Dependent(m) = mult_independent(gamma)? {
        return Err(dependence(m));
    }
    let abs: Vec<BigRational> = gamma.iter().map(|g| g.abs()).collect();
    let mut p = prec.max(32);
    loop {
        if let Some(b) = a3_at(&abs, p)? {
            return Ok(b);
        }
        if p >= A3_PRECISION_CAP {
            return Err(Error::precision(p, "a3: log enclosures too wide"));
        }
        p = (p * 2).min(A3_PRECISION_CAP);
    }
}

fn a3_at(gamma: &[BigRational], prec: u32) -> Result<Option<A3Bound>> {
    let pm = PlaceMatrix::from_rationals(gamma, prec)?;
    let e = pm.exponents();
    let primes = pm.primes();
    let t = gamma.len();
    let np = primes.len();

    // Midpoints for the archimedean row, lower bounds minus slack for the rest.
    let mut mids = Vec::with_capacity(np);
    let mut lows = Vec::with_capacity(np);
    for p in &primes {
        let l = Interval::log_int(p, prec);
        let c = l.lo() - &l.rad();
        if !c.is_positive() {
            return Ok(None);
        }
        mids.push(l.mid().to_rational());
        lows.push(c.to_rational());
    }

    let patterns: Vec<u32> = (0..1u32 << t).collect();
    let results: Vec<LpOutcome> = patterns
        .par_iter()
        .map(|&s| orthant_lp(&e, &mids, &lows, t, s))
        .collect();

    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    for (s, out) in patterns.iter().zip(results) {
        match out {
            LpOutcome::Unbounded => return Ok(None),
            LpOutcome::Optimal { value, x } => {
                if best.as_ref().map_or(true, |(b, _)| value > *b) {
                    let dir = (0..t)
                        .map(|i| if s >> i & 1 == 1 { -x[i].clone() } else { x[i].clone() })
                        .collect();
                    best = Some((value, dir));
                }
            }
        }
    }
    let (max_l1, direction) = best.expect("at least one pattern");
    let lower = Dyadic::from_rational(&max_l1.recip(), prec, Round::Down);
    Ok(Some(A3Bound {
        lower,
        max_l1,
        direction,
        precision_bits: prec,
    }))
}

/// LP for the orthant `sign(mᵢ) = (−1)^{bit i of s}`; variables are
/// `w = |m|` (t), `u_p ≥ |z_p|` (np) and `u_∞ ≥ |Σ ℓ̂_p z_p|` (1).
fn orthant_lp(
    e: &[Vec<BigRational>],
    mids: &[BigRational],
    lows: &[BigRational],
    t: usize,
    s: u32,
) -> LpOutcome {
    let np = e.len();
    let n = t + np + 1;
    let sign = |i: usize| {
        if s >> i & 1 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    };
    let zero = BigRational::zero();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..np {
        for dir in [BigRational::one(), -BigRational::one()] {
            let mut row = vec![zero.clone(); n];
            for i in 0..t {
                row[i] = &dir * &e[k][i] * sign(i);
            }
            row[t + k] = -BigRational::one();
            a.push(row);
            b.push(zero.clone());
        }
    }
    for dir in [BigRational::one(), -BigRational::one()] {
        let mut row = vec![zero.clone(); n];
        for i in 0..t {
            let zi: BigRational = (0..np).map(|k| &mids[k] * &e[k][i]).sum();
            row[i] = &dir * zi * sign(i);
        }
        row[n - 1] = -BigRational::one();
        a.push(row);
        b.push(zero.clone());
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut norm = vec![zero.clone(); n];
    for k in 0..np {
        norm[t + k] = &half * &lows[k];
    }
    norm[n - 1] = half;
    a.push(norm);
    b.push(BigRational::one());

    let mut c = vec![zero; n];
    for ci in c.iter_mut().take(t) {
        *ci = BigRational::one();
    }
    maximize(&c, &a, &b)
}

/// All nonzero `m ∈ ℤ^t` with `|m|₁ ≤ cap`.
pub fn l1_ball(t: usize, cap: u32) -> Vec<Vec<i64>> {
    fn rec(t: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == t {
            if cur.iter().any(|&x| x != 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in -left..=left {
            cur.push(v);
            rec(t, left - v.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, cap as i64, &mut Vec::new(), &mut out);
    out
}

/// `min_{0 < |m|₁ ≤ cap} h(γ^m)/|m|₁`, an upper bound on `a₃`.
pub fn brute_force_a3(gamma: &[BigRational], cap: u32, prec: u32) -> Result<Interval> {
    if cap == 0 {
        return Err(Error::invalid("norm cap must be positive"));
    }
    let ms = l1_ball(gamma.len(), cap);
    let vals: Vec<Interval> = ms
        .par_iter()
        .map(|m| {
            let mb: Vec<BigInt> = m.iter().map(|&x| x.into()).collect();
            let g = power_product(gamma, &mb);
            let norm: i64 = m.iter().map(|x| x.abs()).sum();
            Ok(rational_height(&g, prec)?.div_int(norm, prec))
        })
        .collect::<Result<_>>()?;
    Ok(vals
        .into_iter()
        .reduce(|a, b| a.min(&b))
        .expect("nonempty ball"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn single_prime() {
        let b = a3_constant(&[q(2)], 128).unwrap();
        let v = b.lower.to_f64();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
        let exact = Interval::ln2(128);
        assert!(b.lower <= *exact.lo());
    }

    #[test]
    fn two_and_three() {
        let b = a3_constant(&[q(2), q(3)], 128).unwrap();
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        let expect = l2 * l3 / (l2 + l3);
        assert!((b.lower.to_f64() - expect).abs() < 1e-12);
        assert!(b.lower.to_f64() <= expect + 1e-15);
    }

    #[test]
    fn dependent_is_rejected() {
        assert!(matches!(
            a3_constant(&[q(2), q(4)], 64),
            Err(Error::DependenceDetected(v)) if v == vec![2, -1]
        ));
    }

    #[test]
    fn brute_force_examples() {
        let b = brute_force_a3(&[q(2), q(3)], 1, 128).unwrap();
        assert!((b.to_f64() - 2f64.ln()).abs() < 1e-15);
        let b = brute_force_a3(&[q(2), q(3)], 5, 128).unwrap();
        assert!((b.to_f64() - 2.0 * 3f64.ln() / 5.0).abs() < 1e-15);
    }

    #[test]
    fn ball_size() {
        // |{m ∈ ℤ² : |m|₁ ≤ 3}| = 2·3² + 2·3 + 1 = 25, minus the origin
        assert_eq!(l1_ball(2, 3).len(), 24);
    }
}
