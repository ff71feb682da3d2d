//! The equation `p(x·b, exp(x·b)) = 0` and its exponential-sum expansion.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::formal::FormalCoefficient;
use super::log_element::{enclose_symbols, resolve_symbols, ExpValue, LogElement, SymbolSource};
use crate::algnum::{BivariatePolynomial, CInterval, ComplexBox, Exact, MPoly, Ring};
use crate::{Error, Result};

/// Name of the `k`-th solution coordinate inside expanded sums (1-based).
pub fn var_symbol(k: usize) -> String {
    format!("n_{}", k + 1)
}

fn is_reserved(name: &str) -> bool {
    name.strip_prefix("n_")
        .is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
}

#[derive(Clone, Debug)]
pub struct ExpPolyEquation {
    pub p: BivariatePolynomial<FormalCoefficient>,
    pub basis: Vec<LogElement>,
    pub transcendental_values: BTreeMap<String, ComplexBox>,
    pub asserted_independent: bool,
}

impl ExpPolyEquation {
    pub fn new(
        p: BivariatePolynomial<FormalCoefficient>,
        basis: Vec<LogElement>,
        transcendental_values: BTreeMap<String, ComplexBox>,
        asserted_independent: bool,
    ) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if basis.is_empty() {
            return Err(Error::invalid("basis must be nonempty"));
        }
        if let Some(bad) = transcendental_values.keys().find(|k| is_reserved(k)) {
            return Err(Error::invalid(format!("symbol name {bad:?} is reserved")));
        }
        let eq = ExpPolyEquation {
            p,
            basis,
            transcendental_values,
            asserted_independent,
        };
        eq.symbol_sources()?;
        Ok(eq)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Hypotheses of the main theorem that fail for `p`.
    pub fn warnings(&self) -> Vec<String> {
        let (dx, dy) = self.p.partials_nonzero();
        let mut w = Vec::new();
        if !dx {
            w.push("∂p/∂x = 0: p does not involve x".to_string());
        }
        if !dy {
            w.push("∂p/∂y = 0: p does not involve y".to_string());
        }
        w
    }

    /// Every symbol that a numeric evaluation may need.
    pub fn symbols(&self) -> Result<Vec<String>> {
        let mut s: Vec<String> = Vec::new();
        for c in self.p.terms().values() {
            s.extend(c.symbols());
        }
        for b in &self.basis {
            s.extend(b.symbolic()?.symbols());
            if let Some(e) = b.exp_symbol_name() {
                s.push(e);
            }
        }
        s.sort();
        s.dedup();
        Ok(s)
    }

    pub fn symbol_sources(&self) -> Result<BTreeMap<String, SymbolSource>> {
        resolve_symbols(&self.symbols()?, &self.basis, &self.transcendental_values)
    }

    pub fn enclose_symbols(&self, prec: u32) -> Result<BTreeMap<String, CInterval>> {
        enclose_symbols(&self.symbol_sources()?, &self.transcendental_values, prec)
    }

    pub fn exp_values(&self) -> Result<Vec<ExpValue>> {
        self.basis.iter().map(|b| b.exp_value()).collect()
    }

    /// `n·b` as a linear form in the symbols.
    pub fn x_value(&self, n: &[BigInt]) -> Result<FormalCoefficient> {
        check_dim(n, self.dim())?;
        let mut acc = MPoly::zero();
        for (k, b) in n.iter().zip(&self.basis) {
            acc = acc.add(&b.symbolic()?.scale(&Exact::Rational(k.clone().into()))?)?;
        }
        Ok(FormalCoefficient::from_poly(acc))
    }

    /// `exp(n·b) = ∏ exp(b_k)^{n_k}`, exact where possible.
    pub fn y_value(&self, n: &[BigInt], exps: &[ExpValue]) -> Result<FormalCoefficient> {
        check_dim(n, self.dim())?;
        let mut alg = Exact::int(1);
        let mut acc = FormalCoefficient::one();
        for (k, e) in n.iter().zip(exps) {
            let k: i64 = k
                .try_into()
                .map_err(|_| Error::invalid("exponent does not fit in i64"))?;
            match e {
                ExpValue::Algebraic(a) => alg = alg.mul(&a.powi(k)?)?,
                ExpValue::Symbol(s) => acc = acc.mul(&FormalCoefficient::symbol_power(s, k))?,
            }
        }
        acc.mul(&FormalCoefficient::exact(alg))
    }

    /// `p(n·b, exp(n·b))` as an exact formal value.
    pub fn value_at(&self, n: &[BigInt], exps: &[ExpValue]) -> Result<FormalCoefficient> {
        let x = self.x_value(n)?;
        let y = self.y_value(n, exps)?;
        self.p.eval(&x, &y)
    }

    /// Direct interval evaluation: `x = Σ n_k·b_k` numerically, `y = exp(x)`.
    pub fn enclose_direct(&self, n: &[BigInt], prec: u32) -> Result<CInterval> {
        check_dim(n, self.dim())?;
        let syms = self.enclose_symbols(prec + 16)?;
        let mut x = CInterval::zero();
        for (k, b) in n.iter().zip(&self.basis) {
            x = x.add(&b.enclose(&syms, prec + 16)?.mul(&CInterval::from_int(k.clone()), prec + 16), prec + 16);
        }
        let y = x.exp(prec + 16);
        let coeff = |c: &FormalCoefficient| c.enclose(&syms, prec + 16);
        self.p.eval_cinterval_with(&x, &y, &coeff, prec)
    }
}

fn check_dim(n: &[BigInt], d: usize) -> Result<()> {
    if n.len() != d {
        return Err(Error::invalid(format!(
            "vector has {} entries, basis has {d}",
            n.len()
        )));
    }
    Ok(())
}

/// `Σ_i q_i(x)·exp(i·x·b)` with `q_i` polynomial in the coordinates `n_k`.
#[derive(Clone, Debug)]
pub struct ExponentialSum {
    /// `(level, q_level)`, levels strictly increasing, `q ≠ 0`.
    pub terms: Vec<(u32, FormalCoefficient)>,
    pub equation: ExpPolyEquation,
}

/// Substitute `x ↦ Σ n_k·b_k` and collect by powers of `exp(x·b)`.
pub fn expand_exponential_sum(eq: &ExpPolyEquation) -> Result<ExponentialSum> {
    let mut lin = MPoly::zero();
    for (k, b) in eq.basis.iter().enumerate() {
        lin = lin.add(&MPoly::symbol(&var_symbol(k)).mul(&b.symbolic()?)?)?;
    }
    let lin = FormalCoefficient::from_poly(lin);
    let mut terms = Vec::new();
    for (level, slice) in eq.p.y_slices() {
        let mut q = FormalCoefficient::zero();
        for (i, c) in slice {
            q = q.add(&c.mul(&Ring::pow(&lin, i)?)?)?;
        }
        if !q.is_zero() {
            terms.push((level, q));
        }
    }
    Ok(ExponentialSum {
        terms,
        equation: eq.clone(),
    })
}

impl ExponentialSum {
    /// `q_i(n)·exp(n·b)^i` for each stored level.
    pub fn terms_at(&self, n: &[BigInt], exps: &[ExpValue]) -> Result<Vec<FormalCoefficient>> {
        let map: BTreeMap<String, FormalCoefficient> = n
            .iter()
            .enumerate()
            .map(|(k, v)| (var_symbol(k), FormalCoefficient::exact(Exact::Rational(v.clone().into()))))
            .collect();
        let y = self.equation.y_value(n, exps)?;
        self.terms
            .iter()
            .map(|(lvl, q)| q.substitute(&map)?.mul(&Ring::pow(&y, *lvl)?))
            .collect()
    }

    /// Whether every `q_i(n)` vanishes exactly.
    pub fn all_coefficients_vanish(&self, n: &[BigInt]) -> Result<bool> {
        let map: BTreeMap<String, FormalCoefficient> = n
            .iter()
            .enumerate()
            .map(|(k, v)| (var_symbol(k), FormalCoefficient::exact(Exact::Rational(v.clone().into()))))
            .collect();
        for (_, q) in &self.terms {
            if !q.substitute(&map)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn fc(n: i64) -> FormalCoefficient {
        FormalCoefficient::from_int(n)
    }

    /// `x − (3/8)·log 2·y` over the basis `(log 2)`.
    fn tau38() -> ExpPolyEquation {
        let tau = FormalCoefficient::symbol("log(2)")
            .mul(&FormalCoefficient::exact(Exact::rational(3, 8)))
            .unwrap();
        let p = BivariatePolynomial::from_terms([((1, 0), fc(1)), ((0, 1), tau.neg())]).unwrap();
        ExpPolyEquation::new(
            p,
            vec![LogElement::log_of_rational(q(2), 0).unwrap()],
            BTreeMap::new(),
            true,
        )
        .unwrap()
    }

    #[test]
    fn tau38_is_exactly_zero_at_three() {
        let eq = tau38();
        let e = eq.exp_values().unwrap();
        assert!(eq.value_at(&[3.into()], &e).unwrap().is_zero());
        assert!(!eq.value_at(&[1.into()], &e).unwrap().is_zero());
        let v = eq.enclose_direct(&[1.into()], 64).unwrap();
        assert!(!v.contains_zero());
    }

    #[test]
    fn expansion_levels() {
        let eq = tau38();
        let s = expand_exponential_sum(&eq).unwrap();
        assert_eq!(s.terms.iter().map(|t| t.0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(
            s.terms[0].1,
            FormalCoefficient::from_poly(
                MPoly::symbol("n_1").mul(&MPoly::symbol("log(2)")).unwrap()
            )
        );
    }

    #[test]
    fn reserved_names_rejected() {
        let p = BivariatePolynomial::from_terms([((1, 0), fc(1))]).unwrap();
        let vals = BTreeMap::from([("n_1".to_string(), ComplexBox::from_int(1))]);
        assert!(ExpPolyEquation::new(p, vec![LogElement::formal("n_1")], vals, false).is_err());
    }
}
