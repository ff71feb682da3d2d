//! Solving `a₃·b ≤ A·log b + C` for its largest integer solution, and
//! walking the ℓ¹ ball of that radius.

use std::collections::VecDeque;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algnum::{Dyadic, Interval, Round};
use crate::{Error, Result};

const LOG_BITS: u32 = 128;

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_GUARD: u128 = 10_000_000;

/// The constants of `a₃·|n|₁ ≤ h(exp(n·c)) ≤ A·log|n|₁ + C`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundInputs {
    /// Certified lower bound for `a₃`.
    pub a3: Dyadic,
    /// Upper bound for `A`.
    pub slope: Dyadic,
    /// Upper bound for `C`.
    pub offset: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub a3: String,
    #[serde(rename = "A")]
    pub slope: String,
    #[serde(rename = "C")]
    pub offset: String,
}

impl BoundInputs {
    pub fn new(a3: Dyadic, slope: Dyadic, offset: Dyadic) -> Self {
        BoundInputs { a3, slope, offset }
    }

    pub fn from_f64(a3: f64, slope: f64, offset: f64) -> Self {
        BoundInputs {
            a3: Dyadic::from_f64(a3),
            slope: Dyadic::from_f64(slope),
            offset: Dyadic::from_f64(offset),
        }
    }

    pub fn to_record(&self) -> BoundRecord {
        BoundRecord {
            a3: self.a3.to_decimal_string(),
            slope: self.slope.to_decimal_string(),
            offset: self.offset.to_decimal_string(),
        }
    }

    /// Whether `b` is not excluded: `a₃·b ≤ (A·log b + C)` upper-rounded.
    fn admits(&self, b: u64) -> bool {
        let lhs = &self.a3 * &Dyadic::from_int(b);
        let rhs = if b <= 1 {
            self.offset.clone()
        } else {
            let log = Interval::log_int(&BigInt::from(b), LOG_BITS);
            Interval::point(self.slope.clone())
                .mul(&log, LOG_BITS)
                .add(&Interval::point(self.offset.clone()), LOG_BITS)
                .hi()
                .clone()
        };
        lhs <= rhs
    }
}

/// Largest `b ≥ 0` with `a₃·b ≤ A·log b + C` (`log 0 = log 1 = 0`).
///
/// The comparison is convex in `b`, so its solution set past the minimizer
/// `A/a₃` is an interval found by doubling then bisection. Rounding only
/// ever admits more `b`, so the result over-estimates the true crossing.
///
/// ```
/// use pexp_core::finite::{compute_bound, BoundInputs};
/// let b = compute_bound(&BoundInputs::from_f64(std::f64::consts::LN_2, 0.0, 1000f64.ln())).unwrap();
/// assert_eq!(b, 9);
/// ```
pub fn compute_bound(inputs: &BoundInputs) -> Result<u64> {
    if !inputs.a3.is_positive() {
        return Err(Error::invalid("a₃ must be positive"));
    }
    if inputs.slope.is_negative() || inputs.offset.is_negative() {
        return Err(Error::invalid("A and C must be nonnegative"));
    }
    let mut best = u64::from(inputs.admits(1));
    let turn = inputs.slope.div(&inputs.a3, 64, Round::Down).floor();
    let turn: u64 = turn.try_into().unwrap_or(u64::MAX / 4).max(2);
    let Some(start) = [turn, turn + 1].into_iter().find(|&b| inputs.admits(b)) else {
        return Ok(best);
    };
    let (mut lo, mut hi) = (start, start);
    loop {
        hi = hi
            .checked_mul(2)
            .filter(|&h| h < 1 << 62)
            .ok_or_else(|| Error::invalid("bound does not fit in 62 bits"))?;
        if !inputs.admits(hi) {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if inputs.admits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best = best.max(lo);
    Ok(best)
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Number of `n ∈ ℤ^dim` with `|n|₁ ≤ b`: `Σ_k 2^k·C(dim, k)·C(b, k)`.
pub fn ball_size(dim: usize, b: u64) -> u128 {
    let (d, b) = (dim as u128, u128::from(b));
    (0..=d.min(b))
        .map(|k| {
            binomial(d, k)
                .saturating_mul(binomial(b, k))
                .saturating_mul(1u128.checked_shl(k as u32).unwrap_or(u128::MAX))
        })
        .fold(0u128, u128::saturating_add)
}

/// Vectors with `|n|₁ = k` in lexicographic order.
fn sphere(dim: usize, k: i64) -> Vec<Vec<i64>> {
    if dim == 1 {
        return if k == 0 { vec![vec![0]] } else { vec![vec![-k], vec![k]] };
    }
    let mut out = Vec::new();
    for v in -k..=k {
        for mut tail in sphere(dim - 1, k - v.abs()) {
            tail.insert(0, v);
            out.push(tail);
        }
    }
    out
}

/// Stream over the ℓ¹ ball, one sphere at a time.
#[derive(Clone, Debug)]
pub struct Candidates {
    dim: usize,
    radius: i64,
    next_sphere: i64,
    pending: VecDeque<Vec<i64>>,
    total: u128,
}

impl Candidates {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for Candidates {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        while self.pending.is_empty() {
            if self.next_sphere > self.radius {
                return None;
            }
            self.pending = sphere(self.dim, self.next_sphere).into();
            self.next_sphere += 1;
        }
        self.pending
            .pop_front()
            .map(|v| v.into_iter().map(BigInt::from).collect())
    }
}

/// Every `n ∈ ℤ^dim` with `|n|₁ ≤ b`, by increasing norm then
/// lexicographically.
///
/// ```
/// use pexp_core::finite::enumerate_candidates;
/// assert_eq!(enumerate_candidates(2, 3, 1000).unwrap().count(), 25);
/// ```
pub fn enumerate_candidates(dim: usize, b: u64, guard: u128) -> Result<Candidates> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let total = ball_size(dim, b);
    if total > guard {
        return Err(Error::GuardExceeded { count: total, guard });
    }
    Ok(Candidates {
        dim,
        radius: b as i64,
        next_sphere: 0,
        pending: VecDeque::new(),
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(i: &BoundInputs) -> u64 {
        let (a3, a, c) = (i.a3.to_f64(), i.slope.to_f64(), i.offset.to_f64());
        (0..100_000u64)
            .filter(|&b| a3 * b as f64 <= a * (b.max(1) as f64).ln() + c)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn spec_values() {
        let ln2 = Interval::ln2(128).lo().clone();
        let c = Interval::log_int(&BigInt::from(1000), 128).hi().clone();
        assert_eq!(compute_bound(&BoundInputs::new(ln2, Dyadic::zero(), c)).unwrap(), 9);
        // The crossing of 0.424908·b = 2 ln b + 5 lies in (27, 28).
        assert_eq!(compute_bound(&BoundInputs::from_f64(0.424908, 2.0, 5.0)).unwrap(), 27);
        assert_eq!(compute_bound(&BoundInputs::from_f64(1.0, 0.0, 0.0)).unwrap(), 0);
    }

    #[test]
    fn gap_below_the_minimizer() {
        let i = BoundInputs::from_f64(0.1, 10.0, 0.0);
        assert!(!i.admits(1));
        assert_eq!(compute_bound(&i).unwrap(), scan(&i));
    }

    #[test]
    fn agrees_with_scan() {
        for (a3, a, c) in [(0.3, 1.0, 2.0), (2.0, 5.0, 0.5), (0.05, 0.0, 3.01), (1.0, 30.0, 1.0)] {
            let i = BoundInputs::from_f64(a3, a, c);
            assert_eq!(compute_bound(&i).unwrap(), scan(&i), "{a3} {a} {c}");
        }
    }

    #[test]
    fn ball_counts_and_order() {
        let v: Vec<_> = enumerate_candidates(1, 2, 100).unwrap().collect();
        assert_eq!(v.len(), 5);
        assert_eq!(enumerate_candidates(2, 1, 100).unwrap().count(), 5);
        for (d, b) in [(2, 3), (3, 4), (4, 2)] {
            let all: Vec<_> = enumerate_candidates(d, b, 10_000).unwrap().collect();
            assert_eq!(all.len() as u128, ball_size(d, b));
            let mut sorted = all.clone();
            sorted.sort_by_key(|n| (n.iter().map(|x| x.magnitude().clone()).sum::<num_bigint::BigUint>(), n.clone()));
            assert_eq!(all, sorted);
        }
        assert_eq!(
            enumerate_candidates(3, 100, 1000).unwrap_err(),
            Error::GuardExceeded { count: ball_size(3, 100), guard: 1000 }
        );
    }
}
