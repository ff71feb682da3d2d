//! Basis entries of an equation: logarithms of algebraic numbers, rational
//! multiples of `2πi`, and formal transcendentals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::formal::FormalCoefficient;
use crate::algnum::{
    parse_decimal, AlgebraicNumber, CInterval, ComplexBox, Dyadic, Exact, IntPolynomial, MPoly,
    Ring,
};
use crate::mullattice::principal_log;
use crate::{Error, Result};

/// Symbol standing for `2πi` in formal coefficients.
pub const TWO_PI_I: &str = "two_pi_i";

#[derive(Clone, Debug)]
pub enum LogKind {
    /// `Log λ + 2πi·branch`, written with `symbol` for `Log λ`.
    Log {
        lambda: Exact,
        branch: i64,
        symbol: String,
    },
    /// `2πi`.
    TwoPiI,
    /// A formal transcendental whose value is supplied by the user.
    Formal(String),
}

/// `scale · (base value of kind)`.
#[derive(Clone, Debug)]
pub struct LogElement {
    pub kind: LogKind,
    pub scale: BigRational,
}

/// `exp` of a basis entry: exact when the entry is in `log(ℚ̄*)`.
#[derive(Clone, Debug)]
pub enum ExpValue {
    Algebraic(Exact),
    Symbol(String),
}

/// Default symbol for the principal logarithm of a rational.
pub fn log_symbol(q: &BigRational) -> String {
    format!("log({q})")
}

/// Symbol for `exp(scale·name)`.
pub fn exp_symbol(name: &str, scale: &BigRational) -> String {
    if scale.is_one() {
        format!("exp({name})")
    } else {
        format!("exp({scale}*{name})")
    }
}

impl LogElement {
    pub fn log_of_rational(q: BigRational, branch: i64) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::invalid("logarithm of zero"));
        }
        Ok(LogElement {
            kind: LogKind::Log {
                symbol: log_symbol(&q),
                lambda: Exact::Rational(q),
                branch,
            },
            scale: BigRational::one(),
        })
    }

    pub fn log_of(lambda: Exact, branch: i64, symbol: &str) -> Result<Self> {
        if Ring::is_zero(&lambda) {
            return Err(Error::invalid("logarithm of zero"));
        }
        Ok(LogElement {
            kind: LogKind::Log {
                lambda,
                branch,
                symbol: symbol.to_string(),
            },
            scale: BigRational::one(),
        })
    }

    /// `2πi / n`.
    pub fn two_pi_i_over(n: i64) -> Self {
        LogElement {
            kind: LogKind::TwoPiI,
            scale: BigRational::new(1.into(), n.into()),
        }
    }

    pub fn formal(name: &str) -> Self {
        LogElement {
            kind: LogKind::Formal(name.to_string()),
            scale: BigRational::one(),
        }
    }

    pub fn scaled(&self, s: &BigRational) -> Self {
        LogElement {
            kind: self.kind.clone(),
            scale: &self.scale * s,
        }
    }

    /// Whether `exp` of this entry is algebraic.
    pub fn is_algebraic_log(&self) -> bool {
        !matches!(self.kind, LogKind::Formal(_))
    }

    /// The entry as a linear form in symbols.
    pub fn symbolic(&self) -> Result<MPoly<Exact>> {
        let s = Exact::Rational(self.scale.clone());
        match &self.kind {
            LogKind::Log { branch, symbol, .. } => {
                let base = MPoly::symbol(symbol)
                    .add(&MPoly::monomial(&[(TWO_PI_I, 1)], Exact::int(*branch)))?;
                base.scale(&s)
            }
            LogKind::TwoPiI => Ok(MPoly::monomial(&[(TWO_PI_I, 1)], s)),
            LogKind::Formal(name) => Ok(MPoly::monomial(&[(name.as_str(), 1)], s)),
        }
    }

    /// Enclosure of the entry given symbol enclosures.
    pub fn enclose(&self, symbols: &BTreeMap<String, CInterval>, prec: u32) -> Result<CInterval> {
        FormalCoefficient::from_poly(self.symbolic()?).enclose(symbols, prec)
    }

    /// The `exp(·)` symbol of a formal entry.
    pub fn exp_symbol_name(&self) -> Option<String> {
        match &self.kind {
            LogKind::Formal(name) => Some(exp_symbol(name, &self.scale)),
            _ => None,
        }
    }

    /// `exp` of the entry: `λ^scale` on the designated branch, a root of
    /// unity, or an `exp(·)` symbol.
    pub fn exp_value(&self) -> Result<ExpValue> {
        let (a, d) = (self.scale.numer().clone(), self.scale.denom().clone());
        match &self.kind {
            LogKind::Formal(name) => Ok(ExpValue::Symbol(exp_symbol(name, &self.scale))),
            LogKind::TwoPiI => {
                let r = BigRational::new(a.mod_floor(&d), d.clone());
                if r.is_zero() {
                    return Ok(ExpValue::Algebraic(Exact::int(1)));
                }
                if r == BigRational::new(1.into(), 2.into()) {
                    return Ok(ExpValue::Algebraic(Exact::int(-1)));
                }
                let n = d.to_usize().ok_or_else(|| Error::invalid("2πi denominator too large"))?;
                let z = CInterval::two_pi_i(140)
                    .mul(&CInterval::from_rational(&r, 140), 140)
                    .exp(128);
                let root = near_root(&IntPolynomial::cyclotomic(n), &z)?;
                Ok(ExpValue::Algebraic(Exact::from_algebraic(root)))
            }
            LogKind::Log { lambda, branch, .. } => {
                if self.scale.is_one() {
                    return Ok(ExpValue::Algebraic(lambda.clone()));
                }
                let k = a.to_i64().ok_or_else(|| Error::invalid("scale numerator too large"))?;
                let dd = d.to_usize().ok_or_else(|| Error::invalid("scale denominator too large"))?;
                let beta = lambda.powi(k)?;
                let pb = match &beta {
                    Exact::Rational(q) => IntPolynomial::linear_for(q),
                    Exact::Algebraic(b) => b.minpoly().clone(),
                };
                let mut coeffs = vec![BigInt::zero(); pb.degree() * dd + 1];
                for (i, c) in pb.coeffs().iter().enumerate() {
                    coeffs[i * dd] = c.clone();
                }
                let w = principal_log(lambda, 140)?
                    .add(
                        &CInterval::two_pi_i(140).mul(&CInterval::from_int(*branch), 140),
                        140,
                    )
                    .mul(&CInterval::from_rational(&self.scale, 140), 140)
                    .exp(128);
                let root = near_root(&IntPolynomial::new(coeffs), &w)?;
                Ok(ExpValue::Algebraic(Exact::from_algebraic(root)))
            }
        }
    }
}

fn near_root(poly: &IntPolynomial, z: &CInterval) -> Result<AlgebraicNumber> {
    let b = ComplexBox::from_cinterval(z);
    let approx = ComplexBox::new(
        b.center_re.clone(),
        b.center_im.clone(),
        Dyadic::max(&b.radius, &Dyadic::pow2(-100)),
    );
    AlgebraicNumber::from_poly_and_approx(poly, &approx)
}

/// Where the numeric value of a symbol comes from.
#[derive(Clone, Debug)]
pub enum SymbolSource {
    PrincipalLog(Exact),
    TwoPiI,
    Given(ComplexBox),
    ExpOf { name: String, scale: BigRational },
}

/// Resolve every symbol used by an equation to a numeric source.
pub fn resolve_symbols(
    names: &[String],
    basis: &[LogElement],
    given: &BTreeMap<String, ComplexBox>,
) -> Result<BTreeMap<String, SymbolSource>> {
    let mut out = BTreeMap::new();
    let mut unknown = Vec::new();
    for s in names {
        match resolve_one(s, basis, given) {
            Some(src) => {
                out.insert(s.clone(), src);
            }
            None => unknown.push(s.clone()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::InvalidProblem(
            unknown
                .into_iter()
                .map(|s| format!("symbol {s:?} has no value"))
                .collect(),
        ));
    }
    Ok(out)
}

fn resolve_one(
    s: &str,
    basis: &[LogElement],
    given: &BTreeMap<String, ComplexBox>,
) -> Option<SymbolSource> {
    if s == TWO_PI_I {
        return Some(SymbolSource::TwoPiI);
    }
    for b in basis {
        if let LogKind::Log { lambda, symbol, .. } = &b.kind {
            if symbol == s {
                return Some(SymbolSource::PrincipalLog(lambda.clone()));
            }
        }
    }
    if let Some(v) = given.get(s) {
        return Some(SymbolSource::Given(v.clone()));
    }
    if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
        let (scale, name) = match inner.split_once('*') {
            Some((sc, n)) => (parse_decimal(sc).ok()?, n),
            None => (BigRational::one(), inner),
        };
        if given.contains_key(name) {
            return Some(SymbolSource::ExpOf {
                name: name.to_string(),
                scale,
            });
        }
    }
    if let Some(inner) = s.strip_prefix("log(").and_then(|r| r.strip_suffix(')')) {
        let q = parse_decimal(inner).ok()?;
        if !q.is_zero() {
            return Some(SymbolSource::PrincipalLog(Exact::Rational(q)));
        }
    }
    None
}

/// Enclose every resolved symbol at `prec` bits.
pub fn enclose_symbols(
    sources: &BTreeMap<String, SymbolSource>,
    given: &BTreeMap<String, ComplexBox>,
    prec: u32,
) -> Result<BTreeMap<String, CInterval>> {
    let mut out = BTreeMap::new();
    for (s, src) in sources {
        let v = match src {
            SymbolSource::TwoPiI => CInterval::two_pi_i(prec),
            SymbolSource::PrincipalLog(l) => principal_log(l, prec)?,
            SymbolSource::Given(b) => b.to_cinterval(),
            SymbolSource::ExpOf { name, scale } => given[name]
                .to_cinterval()
                .mul(&CInterval::from_rational(scale, prec), prec)
                .exp(prec),
        };
        out.insert(s.clone(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn exp_of_scaled_log_is_root() {
        let e = LogElement::log_of_rational(q(2), 0).unwrap().scaled(&BigRational::new(1.into(), 2.into()));
        let ExpValue::Algebraic(Exact::Algebraic(a)) = e.exp_value().unwrap() else {
            panic!("expected algebraic")
        };
        assert_eq!(a.minpoly(), &IntPolynomial::from_i64(&[-2, 0, 1]));
        assert!(a.isolating_box().center_re.is_positive());
    }

    #[test]
    fn roots_of_unity() {
        let quarter = LogElement::two_pi_i_over(4);
        let ExpValue::Algebraic(z) = quarter.exp_value().unwrap() else { panic!() };
        assert_eq!(z, Exact::Algebraic(AlgebraicNumber::i()));
        let half = LogElement::two_pi_i_over(2);
        assert!(matches!(half.exp_value().unwrap(), ExpValue::Algebraic(v) if v == Exact::int(-1)));
    }

    #[test]
    fn branch_shows_in_symbolic_form() {
        let e = LogElement::log_of_rational(q(2), 1).unwrap();
        let f = e.symbolic().unwrap();
        assert_eq!(f.degree_in(TWO_PI_I), 1);
        assert_eq!(f.degree_in("log(2)"), 1);
    }
}
