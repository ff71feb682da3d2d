//! Three-valued certification of a single candidate vector.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algnum::{CInterval, Ring};
use crate::reduce::{expand_exponential_sum, ExpPolyEquation, ExpValue, ExponentialSum, FormalCoefficient};
use crate::Result;

/// Precision levels tried in turn: `start, 2·start, …` up to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32) -> Self {
        let start_bits = start_bits.max(32);
        PrecisionPolicy {
            start_bits,
            max_bits: (start_bits * 8).min(4096).max(start_bits),
        }
    }

    pub fn levels(&self) -> Vec<u32> {
        let mut v = vec![self.start_bits];
        while *v.last().unwrap() < self.max_bits {
            v.push((v.last().unwrap() * 2).min(self.max_bits));
        }
        v
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy::new(128)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateStatus {
    /// The value is the zero polynomial in the independent symbols.
    ExactlyVerified,
    /// An enclosure at this precision excludes zero.
    CertifiedNonSolution { precision_bits: u32 },
    /// Every enclosure up to this precision straddles zero.
    Probable { precision_bits: u32 },
}

impl CandidateStatus {
    pub fn is_solution_like(&self) -> bool {
        !matches!(self, CandidateStatus::CertifiedNonSolution { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    #[serde(with = "crate::finite::serde_ints")]
    pub vector: Vec<BigInt>,
    #[serde(flatten)]
    pub status: CandidateStatus,
    /// Every exponential-sum coefficient `q_i(n)` vanishes.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all_coefficients_vanish: bool,
}

/// Reusable state for testing many candidates of one equation.
pub struct CandidateTester {
    eq: ExpPolyEquation,
    exps: Vec<ExpValue>,
    sum: ExponentialSum,
    levels: Vec<(u32, BTreeMap<String, CInterval>)>,
}

impl CandidateTester {
    pub fn new(eq: &ExpPolyEquation, policy: PrecisionPolicy) -> Result<Self> {
        let levels = policy
            .levels()
            .into_iter()
            .map(|p| Ok((p, eq.enclose_symbols(p + 32)?)))
            .collect::<Result<_>>()?;
        Ok(CandidateTester {
            eq: eq.clone(),
            exps: eq.exp_values()?,
            sum: expand_exponential_sum(eq)?,
            levels,
        })
    }

    pub fn equation(&self) -> &ExpPolyEquation {
        &self.eq
    }

    /// First enclosure of `v` that excludes zero, if any level gives one.
    pub fn certify_nonzero(&self, v: &FormalCoefficient) -> Result<Option<(u32, CInterval)>> {
        for (p, syms) in &self.levels {
            let e = v.enclose(syms, *p)?;
            if !e.contains_zero() {
                return Ok(Some((*p, e)));
            }
        }
        Ok(None)
    }

    /// Enclosure of `v` at the highest level.
    pub fn enclose_finest(&self, v: &FormalCoefficient) -> Result<CInterval> {
        let (p, syms) = self.levels.last().expect("at least one level");
        v.enclose(syms, *p)
    }

    pub fn test(&self, n: &[BigInt]) -> Result<CandidateReport> {
        let v = self.eq.value_at(n, &self.exps)?;
        let status = if v.is_zero() {
            CandidateStatus::ExactlyVerified
        } else {
            let mut status = None;
            for (p, syms) in &self.levels {
                if !v.enclose(syms, *p)?.contains_zero() {
                    status = Some(CandidateStatus::CertifiedNonSolution { precision_bits: *p });
                    break;
                }
            }
            status.unwrap_or(CandidateStatus::Probable {
                precision_bits: self.levels.last().map_or(0, |l| l.0),
            })
        };
        let all_coefficients_vanish =
            status.is_solution_like() && self.sum.all_coefficients_vanish(n)?;
        Ok(CandidateReport {
            vector: n.to_vec(),
            status,
            all_coefficients_vanish,
        })
    }
}

/// Certify `p(n·c, exp(n·c))` for one vector.
pub fn test_candidate(
    eq: &ExpPolyEquation,
    n: &[BigInt],
    policy: PrecisionPolicy,
) -> Result<CandidateReport> {
    CandidateTester::new(eq, policy)?.test(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{BivariatePolynomial, Exact, MPoly};
    use crate::reduce::{FormalCoefficient, LogElement};
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    fn tau38() -> ExpPolyEquation {
        let tau = MPoly::monomial(&[("log(2)", 1)], Exact::Rational(BigRational::new(3.into(), 8.into())));
        let p = BivariatePolynomial::from_terms([
            ((1, 0), FormalCoefficient::one()),
            ((0, 1), FormalCoefficient::from_poly(tau).neg()),
        ])
        .unwrap();
        let b = LogElement::log_of_rational(BigRational::from_integer(2.into()), 0).unwrap();
        ExpPolyEquation::new(p, vec![b], BTreeMap::new(), true).unwrap()
    }

    #[test]
    fn tau38_statuses() {
        let eq = tau38();
        let t = CandidateTester::new(&eq, PrecisionPolicy::new(64)).unwrap();
        assert_eq!(t.test(&[3.into()]).unwrap().status, CandidateStatus::ExactlyVerified);
        assert_eq!(
            t.test(&[1.into()]).unwrap().status,
            CandidateStatus::CertifiedNonSolution { precision_bits: 64 }
        );
    }

    #[test]
    fn exact_zero_at_origin() {
        let p = BivariatePolynomial::from_terms([
            ((1, 1), FormalCoefficient::one()),
            ((1, 0), FormalCoefficient::one()),
        ])
        .unwrap();
        let b = LogElement::log_of_rational(BigRational::from_integer(3.into()), 0).unwrap();
        let eq = ExpPolyEquation::new(p, vec![b], BTreeMap::new(), true).unwrap();
        let r = test_candidate(&eq, &[0.into()], PrecisionPolicy::default()).unwrap();
        assert_eq!(r.status, CandidateStatus::ExactlyVerified);
        assert!(r.all_coefficients_vanish);
    }

    #[test]
    fn levels_double() {
        assert_eq!(PrecisionPolicy::new(64).levels(), vec![64, 128, 256, 512]);
    }
}
