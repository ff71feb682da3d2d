//! Sparse bivariate polynomials `p(x, y)` with a generic coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use super::complex::{CInterval, ComplexBox};
use super::exact::{Enclose, Ring};
use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct BivariatePolynomial<C> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Ring> BivariatePolynomial<C> {
    pub fn zero() -> Self {
        BivariatePolynomial {
            terms: BTreeMap::new(),
        }
    }

    /// Build from `((i, j), c)` meaning `c·x^i·y^j`; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), C)>) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    pub fn x() -> Self {
        BivariatePolynomial::from_terms([((1, 0), C::one())]).unwrap()
    }

    pub fn y() -> Self {
        BivariatePolynomial::from_terms([((0, 1), C::one())]).unwrap()
    }

    pub fn constant(c: C) -> Self {
        BivariatePolynomial::from_terms([((0, 0), c)]).unwrap()
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), C> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Distinct y-exponents carrying a nonzero coefficient, ascending.
    pub fn y_levels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn add_term(&mut self, e: (u32, u32), c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old.add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, c.clone())?;
        }
        Ok(p)
    }

    pub fn neg(&self) -> Self {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &o.terms {
                p.add_term((i1 + i2, j1 + j2), c1.mul(c2)?)?;
            }
        }
        Ok(p)
    }

    pub fn scale(&self, k: &C) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, c.mul(k)?)?;
        }
        Ok(p)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<BivariatePolynomial<D>> {
        let mut p = BivariatePolynomial::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, f(c)?)?;
        }
        Ok(p)
    }

    pub fn partial_x(&self) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                p.add_term((i - 1, *j), c.mul(&C::from_int(*i as i64))?)?;
            }
        }
        Ok(p)
    }

    pub fn partial_y(&self) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                p.add_term((*i, j - 1), c.mul(&C::from_int(*j as i64))?)?;
            }
        }
        Ok(p)
    }

    /// `(∂p/∂x ≠ 0, ∂p/∂y ≠ 0)`, read off the support (characteristic 0).
    pub fn partials_nonzero(&self) -> (bool, bool) {
        (
            self.terms.keys().any(|k| k.0 > 0),
            self.terms.keys().any(|k| k.1 > 0),
        )
    }

    /// `p(a + X, e·Y)`.
    pub fn affine_substitute(&self, a: &C, e: &C) -> Result<Self> {
        let mut p = BivariatePolynomial::zero();
        let dx = self.degree_x();
        let dy = self.degree_y();
        let a_pows = powers(a, dx)?;
        let e_pows = powers(e, dy)?;
        for ((i, j), c) in &self.terms {
            let cj = c.mul(&e_pows[*j as usize])?;
            // (a + X)^i = Σ_k binom(i, k) a^(i−k) X^k
            let mut binom: i64 = 1;
            for k in 0..=*i {
                let t = cj
                    .mul(&C::from_int(binom))?
                    .mul(&a_pows[(i - k) as usize])?;
                p.add_term((k, *j), t)?;
                binom = binom * (*i - k) as i64 / (k + 1) as i64;
            }
        }
        Ok(p)
    }

    /// Exact evaluation at ring elements.
    pub fn eval(&self, x: &C, y: &C) -> Result<C> {
        let xp = powers(x, self.degree_x())?;
        let yp = powers(y, self.degree_y())?;
        let mut acc = C::zero();
        for ((i, j), c) in &self.terms {
            acc = acc.add(&c.mul(&xp[*i as usize])?.mul(&yp[*j as usize])?)?;
        }
        Ok(acc)
    }

    /// Coefficients of the powers of `y`: `p = Σ_j q_j(x)·y^j`.
    pub fn y_slices(&self) -> BTreeMap<u32, BTreeMap<u32, C>> {
        let mut out: BTreeMap<u32, BTreeMap<u32, C>> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            out.entry(*j).or_default().insert(*i, c.clone());
        }
        out
    }

    /// Coefficients of the powers of `x`: `p = Σ_i r_i(y)·x^i`.
    pub fn x_slices(&self) -> BTreeMap<u32, BTreeMap<u32, C>> {
        let mut out: BTreeMap<u32, BTreeMap<u32, C>> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            out.entry(*i).or_default().insert(*j, c.clone());
        }
        out
    }

    /// Swap the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        BivariatePolynomial {
            terms: self.terms.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect(),
        }
    }

    /// Interval evaluation with an explicit coefficient enclosure.
    pub fn eval_cinterval_with(
        &self,
        x: &CInterval,
        y: &CInterval,
        coeff: &impl Fn(&C) -> Result<CInterval>,
        prec: u32,
    ) -> Result<CInterval> {
        let xp = cpowers(x, self.degree_x(), prec);
        let yp = cpowers(y, self.degree_y(), prec);
        let mut acc = CInterval::zero();
        for ((i, j), c) in &self.terms {
            let t = coeff(c)?
                .mul(&xp[*i as usize], prec)
                .mul(&yp[*j as usize], prec);
            acc = acc.add(&t, prec);
        }
        Ok(acc)
    }
}

impl<C: Ring + Enclose> BivariatePolynomial<C> {
    /// Enclosure of `{p(x₀, y₀) : x₀ ∈ x, y₀ ∈ y}`.
    pub fn eval_interval(&self, x: &ComplexBox, y: &ComplexBox, prec: u32) -> Result<ComplexBox> {
        let v = self.eval_cinterval(&x.to_cinterval(), &y.to_cinterval(), prec)?;
        Ok(ComplexBox::from_cinterval(&v))
    }

    pub fn eval_cinterval(&self, x: &CInterval, y: &CInterval, prec: u32) -> Result<CInterval> {
        self.eval_cinterval_with(x, y, &|c: &C| c.enclose(prec), prec)
    }
}

fn powers<C: Ring>(a: &C, n: u32) -> Result<Vec<C>> {
    let mut v = vec![C::one()];
    for k in 1..=n as usize {
        v.push(v[k - 1].mul(a)?);
    }
    Ok(v)
}

fn cpowers(a: &CInterval, n: u32, prec: u32) -> Vec<CInterval> {
    let mut v = vec![CInterval::one()];
    for k in 1..=n as usize {
        v.push(v[k - 1].mul(a, prec));
    }
    v
}

/// Parse-time helper: reject repeated monomials instead of summing them.
pub fn check_distinct_monomials<'a>(keys: impl IntoIterator<Item = &'a (u32, u32)>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for k in keys {
        if !seen.insert(*k) {
            return Err(Error::invalid(format!("duplicate monomial x^{}·y^{}", k.0, k.1)));
        }
    }
    Ok(())
}

impl<C: Ring + fmt::Display> fmt::Display for BivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, j), c)| {
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push("x".to_string()),
                    _ => mono.push(format!("x^{i}")),
                }
                match j {
                    0 => {}
                    1 => mono.push("y".to_string()),
                    _ => mono.push(format!("y^{j}")),
                }
                let m = mono.join("·");
                if m.is_empty() {
                    format!("({c})")
                } else if c.is_one() {
                    m
                } else {
                    format!("({c})·{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for BivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{Dyadic, Exact};

    type P = BivariatePolynomial<Exact>;

    fn q(n: i64) -> Exact {
        Exact::int(n)
    }

    #[test]
    fn partials() {
        let p = P::from_terms([((1, 0), q(1)), ((0, 1), q(-2))]).unwrap();
        assert_eq!(p.partials_nonzero(), (true, true));
        let p = P::from_terms([((0, 2), q(1)), ((0, 0), q(-3))]).unwrap();
        assert_eq!(p.partials_nonzero(), (false, true));
        let p = P::from_terms([((1, 1), q(1)), ((1, 0), q(1)), ((0, 0), q(1))]).unwrap();
        assert_eq!(p.partials_nonzero(), (true, true));
    }

    #[test]
    fn interval_examples() {
        let xy = P::from_terms([((1, 1), q(1))]).unwrap();
        let v = xy
            .eval_interval(&ComplexBox::from_int(2), &ComplexBox::from_int(3), 64)
            .unwrap();
        assert!(v.contains_point(&Dyadic::from_int(6), &Dyadic::zero()));
        let p = P::from_terms([((2, 0), q(1)), ((0, 1), q(-1))]).unwrap();
        let x = ComplexBox::new(Dyadic::from_f64(1.4142), Dyadic::zero(), Dyadic::from_f64(1e-4));
        let v = p.eval_interval(&x, &ComplexBox::from_int(2), 64).unwrap();
        assert!(v.contains_point(&Dyadic::zero(), &Dyadic::zero()));
        assert!(v.radius.to_f64() <= 0.5e-3);
    }

    #[test]
    fn affine_substitution_roundtrip() {
        let p = BivariatePolynomial::<Exact>::from_terms([
            ((2, 1), Exact::int(3)),
            ((0, 2), Exact::int(-1)),
            ((1, 0), Exact::int(5)),
        ])
        .unwrap();
        let a = Exact::rational(2, 3);
        let e = Exact::int(7);
        let r = p.affine_substitute(&a, &e).unwrap();
        assert_eq!(r.degree_x(), 2);
        let back = r
            .affine_substitute(&a.neg(), &e.inv().unwrap())
            .unwrap();
        assert_eq!(back, p);
    }
}
