//! Equation-to-equation reductions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::equation::{ExpPolyEquation, ExponentialSum};
use super::formal::FormalCoefficient;
use super::log_element::{ExpValue, LogElement, LogKind, TWO_PI_I};
use crate::algnum::{BivariatePolynomial, Exact, MPoly, Ring};
use crate::{Error, Result};

/// Divide the basis by `N`: rational solutions with denominators dividing
/// `N` become the integer solutions `N·q` of the result.
pub fn rescale_denominator(eq: &ExpPolyEquation, n: u64) -> Result<ExpPolyEquation> {
    if n == 0 {
        return Err(Error::invalid("denominator N must be positive"));
    }
    let s = BigRational::new(BigInt::one(), BigInt::from(n));
    let mut out = eq.clone();
    out.basis = eq.basis.iter().map(|b| b.scaled(&s)).collect();
    Ok(out)
}

/// The entries of the basis with algebraic exponential.
#[derive(Clone, Debug)]
pub struct Sublattice {
    /// `2πi`-type entry first when present, then logarithms in input order.
    pub c: Vec<LogElement>,
    /// `embedding[i][k]`: coordinate `i` of the original basis for `c_k`.
    pub embedding: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn has_two_pi_i(&self) -> bool {
        self.c.first().is_some_and(|e| matches!(e.kind, LogKind::TwoPiI))
    }

    /// `E·n′` for `n′` in sublattice coordinates.
    pub fn embed(&self, n: &[BigInt]) -> Vec<BigInt> {
        self.embedding
            .iter()
            .map(|row| row.iter().zip(n).map(|(e, v)| v * *e).sum())
            .collect()
    }
}

pub fn extract_algebraic_log_sublattice(eq: &ExpPolyEquation) -> Result<Sublattice> {
    let mut idx: Vec<usize> = Vec::new();
    let twos: Vec<usize> = (0..eq.dim())
        .filter(|&i| matches!(eq.basis[i].kind, LogKind::TwoPiI))
        .collect();
    if twos.len() > 1 {
        return Err(Error::invalid(
            "basis holds two rational multiples of 2πi, which are ℚ-linearly dependent",
        ));
    }
    idx.extend(&twos);
    idx.extend((0..eq.dim()).filter(|&i| matches!(eq.basis[i].kind, LogKind::Log { .. })));
    let c = idx.iter().map(|&i| eq.basis[i].clone()).collect();
    let embedding = (0..eq.dim())
        .map(|i| idx.iter().map(|&j| i64::from(i == j)).collect())
        .collect();
    Ok(Sublattice { c, embedding })
}

/// `r(X, Y) = p(a + X, e·Y)` over the new basis `c`.
pub fn translate_by_class(
    eq: &ExpPolyEquation,
    a_formal: &FormalCoefficient,
    a_exp: &FormalCoefficient,
    c: Vec<LogElement>,
) -> Result<ExpPolyEquation> {
    if a_exp.is_zero() {
        return Err(Error::invalid("exponential of a translate cannot vanish"));
    }
    let mut out = eq.clone();
    out.p = eq.p.affine_substitute(a_formal, a_exp)?;
    out.basis = c;
    Ok(out)
}

/// [`translate_by_class`] with `a = n_m·b` and `e = exp(n_m·b)`.
pub fn translate_by_vector(
    eq: &ExpPolyEquation,
    n_m: &[BigInt],
    c: Vec<LogElement>,
) -> Result<ExpPolyEquation> {
    let exps = eq.exp_values()?;
    let a = eq.x_value(n_m)?;
    let e = eq.y_value(n_m, &exps)?;
    translate_by_class(eq, &a, &e, c)
}

/// Split on the residue of the first coordinate when the first entry is
/// `(a/N)·2πi`. Output `s` has first entry `a·2πi` and polynomial
/// `p(X + (a·s/N)·2πi, ζ_N^{a·s}·Y)`; its solution `(q, n′)` corresponds to
/// `(N·q + s, n′)`.
pub fn split_two_pi_i(eq: &ExpPolyEquation) -> Result<Vec<ExpPolyEquation>> {
    let first = eq
        .basis
        .first()
        .filter(|e| matches!(e.kind, LogKind::TwoPiI))
        .ok_or_else(|| Error::invalid("first basis entry is not a multiple of 2πi"))?;
    let a = first.scale.numer().clone();
    let n = first.scale.denom().clone();
    let nn: u64 = (&n)
        .try_into()
        .map_err(|_| Error::invalid("2πi denominator too large"))?;
    let mut out = Vec::with_capacity(nn as usize);
    for s in 0..nn {
        let shift = BigRational::new(&a * BigInt::from(s), n.clone());
        let turn = LogElement {
            kind: LogKind::TwoPiI,
            scale: shift.clone(),
        };
        let ExpValue::Algebraic(zeta) = turn.exp_value()? else {
            unreachable!("roots of unity are algebraic")
        };
        let a_formal = FormalCoefficient::from_poly(MPoly::monomial(
            &[(TWO_PI_I, 1)],
            Exact::Rational(shift),
        ));
        let mut basis = eq.basis.clone();
        basis[0] = LogElement {
            kind: LogKind::TwoPiI,
            scale: BigRational::from_integer(a.clone()),
        };
        out.push(translate_by_class(
            eq,
            &a_formal,
            &FormalCoefficient::exact(zeta),
            basis,
        )?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Univariate {
    /// Only `x` occurs.
    X,
    /// Only `y` occurs.
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializationFlags {
    pub nonzero: bool,
    pub dx_nonzero: bool,
    pub dy_nonzero: bool,
    pub univariate: Option<Univariate>,
}

impl SpecializationFlags {
    fn of<C: Ring>(p: &BivariatePolynomial<C>) -> Self {
        let (dx, dy) = p.partials_nonzero();
        SpecializationFlags {
            nonzero: !p.is_zero(),
            dx_nonzero: dx,
            dy_nonzero: dy,
            univariate: match (dx, dy) {
                (true, false) => Some(Univariate::X),
                (false, true) => Some(Univariate::Y),
                _ => None,
            },
        }
    }

    pub fn healthy(&self) -> bool {
        self.nonzero && self.dx_nonzero && self.dy_nonzero
    }
}

/// Clear denominators, then divide by the largest power of each assigned
/// symbol common to all coefficients. The result has polynomial coefficients
/// and differs from `p` by a nonzero factor in the coefficient field.
pub fn clear_denominators(
    p: &BivariatePolynomial<FormalCoefficient>,
    symbols: &[String],
) -> Result<BivariatePolynomial<MPoly<Exact>>> {
    let mut dens: Vec<MPoly<Exact>> = Vec::new();
    for c in p.terms().values() {
        if !c.is_polynomial() && !dens.contains(c.den()) {
            dens.push(c.den().clone());
        }
    }
    let mut cleared = BivariatePolynomial::zero();
    for (e, c) in p.terms() {
        let mut t = c.num().clone();
        for d in &dens {
            if d != c.den() {
                t = t.mul(d)?;
            }
        }
        if let Some(k) = c.den().as_constant() {
            t = t.scale(&k.inv()?)?;
        }
        cleared = cleared.add(&BivariatePolynomial::from_terms([(*e, t)])?)?;
    }
    for s in symbols {
        let k = cleared
            .terms()
            .values()
            .map(|t| t.min_degree_in(s))
            .min()
            .unwrap_or(0);
        if k > 0 {
            cleared = cleared.map_coeffs(|t| Ok(t.shift_down(s, k)))?;
        }
    }
    Ok(cleared)
}

/// Full specialization `σ` of every symbol to an exact value.
pub fn specialize_formal(
    p: &BivariatePolynomial<FormalCoefficient>,
    assignment: &BTreeMap<String, Exact>,
) -> Result<(BivariatePolynomial<Exact>, SpecializationFlags)> {
    let names: Vec<String> = assignment.keys().cloned().collect();
    let cleared = clear_denominators(p, &names)?;
    let map: BTreeMap<String, MPoly<Exact>> = assignment
        .iter()
        .map(|(k, v)| (k.clone(), MPoly::constant(v.clone())))
        .collect();
    let out = cleared.map_coeffs(|t| {
        t.substitute(&map)?
            .as_constant()
            .ok_or_else(|| Error::invalid(format!("assignment misses symbols of {t}")))
    })?;
    if out.is_zero() {
        return Err(Error::SpecializationAnnihilates);
    }
    let flags = SpecializationFlags::of(&out);
    Ok((out, flags))
}

/// Specialize only the assigned symbols; the rest stay formal.
pub fn specialize_partial(
    p: &BivariatePolynomial<FormalCoefficient>,
    assignment: &BTreeMap<String, Exact>,
) -> Result<(BivariatePolynomial<FormalCoefficient>, SpecializationFlags)> {
    let names: Vec<String> = assignment.keys().cloned().collect();
    let cleared = clear_denominators(p, &names)?;
    let map: BTreeMap<String, MPoly<Exact>> = assignment
        .iter()
        .map(|(k, v)| (k.clone(), MPoly::constant(v.clone())))
        .collect();
    let out = cleared.map_coeffs(|t| Ok(FormalCoefficient::from_poly(t.substitute(&map)?)))?;
    if out.is_zero() {
        return Err(Error::SpecializationAnnihilates);
    }
    let flags = SpecializationFlags::of(&out);
    Ok((out, flags))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// Levels of a proper subset whose terms sum to exactly zero.
    Degenerate(Vec<u32>),
    ProbablyNonDegenerate,
}

/// Largest number of terms [`classify_degeneracy`] will scan.
pub const DEGENERACY_TERM_GUARD: usize = 20;

/// Scan proper nonempty subsets (smallest first) for an exactly vanishing
/// subsum; every other subsum must have an enclosure excluding zero.
pub fn classify_degeneracy(
    sum: &ExponentialSum,
    candidate: &[BigInt],
    prec: u32,
) -> Result<Degeneracy> {
    let s = sum.terms.len();
    if s > DEGENERACY_TERM_GUARD {
        return Err(Error::GuardExceeded {
            count: s as u128,
            guard: DEGENERACY_TERM_GUARD as u128,
        });
    }
    let exps = sum.equation.exp_values()?;
    let terms = sum.terms_at(candidate, &exps)?;
    let mut masks: Vec<u32> = (1..(1u32 << s) - 1).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut unresolved = Vec::new();
    for &m in &masks {
        let mut acc = FormalCoefficient::zero();
        for (i, t) in terms.iter().enumerate() {
            if m >> i & 1 == 1 {
                acc = acc.add(t)?;
            }
        }
        if acc.is_zero() {
            let levels = (0..s)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| sum.terms[i].0)
                .collect();
            return Ok(Degeneracy::Degenerate(levels));
        }
        unresolved.push(acc);
    }
    let mut p = prec;
    loop {
        let syms = sum.equation.enclose_symbols(p + 16)?;
        let mut still = Vec::new();
        for acc in unresolved {
            if acc.enclose(&syms, p)?.contains_zero() {
                still.push(acc);
            }
        }
        if still.is_empty() {
            return Ok(Degeneracy::ProbablyNonDegenerate);
        }
        if p >= 4 * prec.max(64) {
            return Err(Error::precision(p, "a subsum enclosure straddles zero"));
        }
        unresolved = still;
        p *= 2;
    }
}

pub fn zero_vector(d: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::equation::expand_exponential_sum;

    fn fc(n: i64) -> FormalCoefficient {
        FormalCoefficient::from_int(n)
    }

    fn log2_eq(terms: &[((u32, u32), i64)]) -> ExpPolyEquation {
        let p = BivariatePolynomial::from_terms(terms.iter().map(|(e, c)| (*e, fc(*c)))).unwrap();
        ExpPolyEquation::new(
            p,
            vec![LogElement::log_of_rational(BigRational::from_integer(2.into()), 0).unwrap()],
            BTreeMap::new(),
            true,
        )
        .unwrap()
    }

    #[test]
    fn single_vanishing_term_is_degenerate() {
        // y − 1 + x·y² at n = 0
        let eq = log2_eq(&[((0, 1), 1), ((0, 0), -1), ((1, 2), 1)]);
        let s = expand_exponential_sum(&eq).unwrap();
        let d = classify_degeneracy(&s, &[0.into()], 64).unwrap();
        assert_eq!(d, Degeneracy::Degenerate(vec![2]));
    }

    #[test]
    fn no_vanishing_subsum() {
        // y² − 3y + 2 + x(y − 1) at n = 0: terms 2, −3, 1
        let eq = log2_eq(&[((0, 2), 1), ((0, 1), -3), ((0, 0), 2), ((1, 1), 1), ((1, 0), -1)]);
        let s = expand_exponential_sum(&eq).unwrap();
        let d = classify_degeneracy(&s, &[0.into()], 64).unwrap();
        assert_eq!(d, Degeneracy::ProbablyNonDegenerate);
    }

    #[test]
    fn specialization_examples() {
        let tau = FormalCoefficient::symbol("tau");
        let zero = BTreeMap::from([("tau".to_string(), Exact::int(0))]);
        let p = BivariatePolynomial::from_terms([
            ((1, 0), fc(1)),
            ((0, 1), fc(1).add(&tau).unwrap().neg()),
        ])
        .unwrap();
        let (r, f) = specialize_formal(&p, &zero).unwrap();
        assert_eq!(r, BivariatePolynomial::from_terms([((1, 0), Exact::int(1)), ((0, 1), Exact::int(-1))]).unwrap());
        assert!(f.healthy());

        let p = BivariatePolynomial::from_terms([((1, 0), fc(1)), ((0, 1), tau.neg())]).unwrap();
        let (_, f) = specialize_formal(&p, &zero).unwrap();
        assert_eq!(f.univariate, Some(Univariate::X));

        let inv = fc(1).div(&tau).unwrap();
        let p = BivariatePolynomial::from_terms([((1, 0), fc(1)), ((0, 1), inv.neg())]).unwrap();
        let (r, f) = specialize_formal(&p, &zero).unwrap();
        assert_eq!(r, BivariatePolynomial::from_terms([((0, 1), Exact::int(-1))]).unwrap());
        assert_eq!(f.univariate, Some(Univariate::Y));
    }

    #[test]
    fn split_by_two() {
        let p = BivariatePolynomial::from_terms([((1, 0), fc(1)), ((0, 1), fc(-1))]).unwrap();
        let eq = ExpPolyEquation::new(
            p,
            vec![
                LogElement::two_pi_i_over(2),
                LogElement::log_of_rational(BigRational::from_integer(2.into()), 0).unwrap(),
            ],
            BTreeMap::new(),
            true,
        )
        .unwrap();
        let parts = split_two_pi_i(&eq).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].basis[0].scale.is_one());
        assert_eq!(parts[0].p, eq.p);
        assert_eq!(parts[1].p.coeff(0, 1), fc(1));
    }
}
