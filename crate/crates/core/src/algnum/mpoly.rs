//! Sparse multivariate polynomials over named symbols.

use std::collections::BTreeMap;
use std::fmt;

use super::complex::CInterval;
use super::exact::Ring;
use crate::Result;

/// Exponent vector keyed by symbol name; zero exponents are never stored.
pub type Monomial = BTreeMap<String, u32>;

#[derive(Clone, PartialEq)]
pub struct MPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> MPoly<C> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::new(), c);
        }
        p
    }

    pub fn one() -> Self {
        MPoly::constant(C::one())
    }

    pub fn symbol(name: &str) -> Self {
        MPoly::monomial(&[(name, 1)], C::one())
    }

    pub fn monomial(powers: &[(&str, u32)], c: C) -> Self {
        let m: Monomial = powers
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(s, e)| (s.to_string(), *e))
            .collect();
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().cloned())
            .collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn degree_in(&self, sym: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(sym).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Largest power of `sym` dividing every term.
    pub fn min_degree_in(&self, sym: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(sym).copied().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone())?;
        }
        Ok(p)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut p = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = m1.clone();
                for (s, e) in m2 {
                    *m.entry(s.clone()).or_insert(0) += e;
                }
                p.add_term(m, c1.mul(c2)?)?;
            }
        }
        Ok(p)
    }

    pub fn scale(&self, k: &C) -> Result<Self> {
        let mut p = MPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c.mul(k)?)?;
        }
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Divide every term by `sym^k` (caller guarantees divisibility).
    pub fn shift_down(&self, sym: &str, k: u32) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    let e = m.get(sym).copied().unwrap_or(0);
                    assert!(e >= k, "shift_down below zero");
                    if e == k {
                        m.remove(sym);
                    } else {
                        m.insert(sym.to_string(), e - k);
                    }
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Substitute polynomials for some symbols; others are left in place.
    pub fn substitute(&self, map: &BTreeMap<String, MPoly<C>>) -> Result<Self> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            let mut rest = Monomial::new();
            for (s, e) in m {
                match map.get(s) {
                    Some(v) => t = t.mul(&v.pow(*e)?)?,
                    None => {
                        rest.insert(s.clone(), *e);
                    }
                }
            }
            let mono = MPoly {
                terms: BTreeMap::from([(rest, C::one())]),
            };
            out = out.add(&t.mul(&mono)?)?;
        }
        Ok(out)
    }

    /// Rename symbols.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut nm = Monomial::new();
            for (s, e) in m {
                *nm.entry(f(s)).or_insert(0) += e;
            }
            out.add_term(nm, c.clone())?;
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<MPoly<D>> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?)?;
        }
        Ok(out)
    }

    /// Interval evaluation with symbol values and a coefficient enclosure.
    pub fn eval_interval(
        &self,
        values: &BTreeMap<String, CInterval>,
        coeff: &impl Fn(&C) -> Result<CInterval>,
        prec: u32,
    ) -> Result<CInterval> {
        let mut acc = CInterval::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c)?;
            for (s, e) in m {
                let v = values
                    .get(s)
                    .ok_or_else(|| crate::Error::invalid(format!("no value for symbol {s}")))?;
                t = t.mul(&v.pow(*e, prec), prec);
            }
            acc = acc.add(&t, prec);
        }
        Ok(acc)
    }
}

impl<C: Ring> Ring for MPoly<C> {
    fn zero() -> Self {
        MPoly::zero()
    }

    fn one() -> Self {
        MPoly::one()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn neg(&self) -> Self {
        MPoly::neg(self)
    }

    fn add(&self, o: &Self) -> Result<Self> {
        MPoly::add(self, o)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        MPoly::mul(self, o)
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        MPoly::sub(self, o)
    }
}

pub(crate) fn fmt_monomial(m: &Monomial) -> String {
    m.iter()
        .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

impl<C: Ring + fmt::Display> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    fmt_monomial(m)
                } else {
                    format!("({c})·{}", fmt_monomial(m))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Ring> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c:?})·{}", fmt_monomial(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::Exact;

    #[test]
    fn arithmetic_and_substitution() {
        let t: MPoly<Exact> = MPoly::symbol("t");
        let one = MPoly::one();
        let p = t.add(&one).unwrap().pow(2).unwrap();
        assert_eq!(p.terms().len(), 3);
        let q = p.sub(&t.mul(&t).unwrap()).unwrap();
        // 2t + 1
        assert_eq!(q.degree_in("t"), 1);
        let map = BTreeMap::from([("t".to_string(), MPoly::constant(Exact::int(3)))]);
        assert_eq!(q.substitute(&map).unwrap().as_constant(), Some(Exact::int(7)));
    }

    #[test]
    fn shift_down_divides() {
        let t: MPoly<Exact> = MPoly::symbol("t");
        let p = t.pow(3).unwrap().add(&t.pow(2).unwrap()).unwrap();
        assert_eq!(p.min_degree_in("t"), 2);
        let q = p.shift_down("t", 2);
        assert_eq!(q, t.add(&MPoly::one()).unwrap());
    }
}
