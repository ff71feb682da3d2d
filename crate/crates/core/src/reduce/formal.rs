//! Rational functions in transcendental symbols with exact ℚ̄ coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::algnum::{CInterval, Enclose, Exact, MPoly, Monomial, Ring};
use crate::{Error, Result};

/// `num / den` with `den ≠ 0`.
///
/// Normalization divides out common monomials, makes a constant denominator
/// equal to one and scales the denominator's last term to coefficient one.
/// No multivariate gcd is taken, so equal values may have different
/// representations; equality cross-multiplies.
#[derive(Clone)]
pub struct FormalCoefficient {
    num: MPoly<Exact>,
    den: MPoly<Exact>,
}

impl FormalCoefficient {
    pub fn new(num: MPoly<Exact>, den: MPoly<Exact>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut f = FormalCoefficient { num, den };
        f.normalize()?;
        Ok(f)
    }

    pub fn from_poly(num: MPoly<Exact>) -> Self {
        FormalCoefficient {
            num,
            den: MPoly::one(),
        }
    }

    pub fn exact(c: Exact) -> Self {
        FormalCoefficient::from_poly(MPoly::constant(c))
    }

    pub fn symbol(name: &str) -> Self {
        FormalCoefficient::from_poly(MPoly::symbol(name))
    }

    /// `sym^k` for any integer `k`.
    pub fn symbol_power(name: &str, k: i64) -> Self {
        let m = MPoly::monomial(&[(name, k.unsigned_abs() as u32)], Exact::int(1));
        if k >= 0 {
            FormalCoefficient::from_poly(m)
        } else {
            FormalCoefficient {
                num: MPoly::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &MPoly<Exact> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<Exact> {
        &self.den
    }

    pub fn as_exact(&self) -> Option<Exact> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.div(&d).ok()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s.sort();
        s.dedup();
        s
    }

    fn normalize(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = MPoly::one();
            return Ok(());
        }
        for s in self.den.symbols() {
            let k = self.num.min_degree_in(&s).min(self.den.min_degree_in(&s));
            if k > 0 {
                self.num = self.num.shift_down(&s, k);
                self.den = self.den.shift_down(&s, k);
            }
        }
        let (_, lc) = self
            .den
            .terms()
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.inv()?;
            self.num = self.num.scale(&inv)?;
            self.den = self.den.scale(&inv)?;
        }
        if self.num == self.den {
            self.num = MPoly::one();
            self.den = MPoly::one();
        }
        Ok(())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        FormalCoefficient::new(self.num.mul(&o.den)?, self.den.mul(&o.num)?)
    }

    pub fn powi(&self, k: i64) -> Result<Self> {
        let p = Ring::pow(self, k.unsigned_abs() as u32)?;
        if k < 0 {
            FormalCoefficient::from_poly(MPoly::one()).div(&p)
        } else {
            Ok(p)
        }
    }

    /// Replace symbols by formal values; unmapped symbols stay.
    pub fn substitute(&self, map: &BTreeMap<String, FormalCoefficient>) -> Result<Self> {
        let sub = |p: &MPoly<Exact>| -> Result<FormalCoefficient> {
            let mut acc = FormalCoefficient::zero();
            for (m, c) in p.terms() {
                let mut t = FormalCoefficient::exact(c.clone());
                let mut rest = Monomial::new();
                for (s, e) in m {
                    match map.get(s) {
                        Some(v) => t = t.mul(&Ring::pow(v, *e)?)?,
                        None => {
                            rest.insert(s.clone(), *e);
                        }
                    }
                }
                let mono = MPoly::from_terms([(rest, Exact::int(1))])?;
                acc = acc.add(&t.mul(&FormalCoefficient::from_poly(mono))?)?;
            }
            Ok(acc)
        };
        sub(&self.num)?.div(&sub(&self.den)?)
    }

    /// Send every symbol to an exact value; errors if the denominator vanishes.
    pub fn specialize(&self, assignment: &BTreeMap<String, Exact>) -> Result<Exact> {
        let map: BTreeMap<String, MPoly<Exact>> = assignment
            .iter()
            .map(|(k, v)| (k.clone(), MPoly::constant(v.clone())))
            .collect();
        let n = self.num.substitute(&map)?;
        let d = self.den.substitute(&map)?;
        let (Some(n), Some(d)) = (n.as_constant(), d.as_constant()) else {
            return Err(Error::invalid(format!(
                "assignment misses symbols of {self}"
            )));
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        n.div(&d)
    }

    /// Enclosure given enclosures of every symbol.
    pub fn enclose(&self, values: &BTreeMap<String, CInterval>, prec: u32) -> Result<CInterval> {
        let coeff = |c: &Exact| c.enclose(prec + 8);
        let n = self.num.eval_interval(values, &coeff, prec)?;
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            return Ok(n);
        }
        let d = self.den.eval_interval(values, &coeff, prec)?;
        n.div(&d, prec)
            .ok_or_else(|| Error::precision(prec, "denominator enclosure meets zero"))
    }
}

impl Ring for FormalCoefficient {
    fn zero() -> Self {
        FormalCoefficient::from_poly(MPoly::zero())
    }

    fn one() -> Self {
        FormalCoefficient::from_poly(MPoly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn neg(&self) -> Self {
        FormalCoefficient {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        if self.den == o.den {
            return FormalCoefficient::new(self.num.add(&o.num)?, self.den.clone());
        }
        FormalCoefficient::new(
            self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?)?,
            self.den.mul(&o.den)?,
        )
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        FormalCoefficient::new(self.num.mul(&o.num)?, self.den.mul(&o.den)?)
    }

    fn from_int(n: i64) -> Self {
        FormalCoefficient::exact(Exact::int(n))
    }
}

impl PartialEq for FormalCoefficient {
    fn eq(&self, o: &Self) -> bool {
        match (self.num.mul(&o.den), o.num.mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl From<Exact> for FormalCoefficient {
    fn from(c: Exact) -> Self {
        FormalCoefficient::exact(c)
    }
}

impl fmt::Display for FormalCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for FormalCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> FormalCoefficient {
        FormalCoefficient::symbol("tau")
    }

    #[test]
    fn reciprocal_cancels() {
        let t = tau();
        let inv = t.powi(-1).unwrap();
        assert!(t.mul(&inv).unwrap().is_one());
        assert_eq!(inv.den(), &MPoly::symbol("tau"));
    }

    #[test]
    fn specialize_and_pole() {
        let f = tau().add(&FormalCoefficient::one()).unwrap().div(&tau()).unwrap();
        let a = BTreeMap::from([("tau".to_string(), Exact::int(2))]);
        assert_eq!(f.specialize(&a).unwrap(), Exact::rational(3, 2));
        let z = BTreeMap::from([("tau".to_string(), Exact::int(0))]);
        assert!(matches!(f.specialize(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn sums_over_common_denominator() {
        let f = tau().powi(-1).unwrap();
        let s = f.add(&f).unwrap();
        assert_eq!(s, FormalCoefficient::from_int(2).div(&tau()).unwrap());
        assert!(s.sub(&s).unwrap().is_zero());
    }
}
