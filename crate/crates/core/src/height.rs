//! Logarithmic Weil height, Mahler measure and the affine height bounds used by
//! the finiteness engine.
//!
//! Every quantity is an outward-rounded [`Interval`]; bounds are carried as
//! affine forms `h(target) ≤ A·arg + C` with `A` and `C` rounded up.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algnum::{
    AlgebraicNumber, BivariatePolynomial, Dyadic, Exact, IntPolynomial, Interval, Ring, Round,
};
use crate::{Error, Result};

/// Certified enclosure of a height (nats).
#[derive(Clone, Debug, PartialEq)]
pub struct HeightValue {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub lower: String,
    pub upper: String,
    pub precision_bits: u32,
}

impl HeightValue {
    pub fn from_interval(i: &Interval, prec: u32) -> Self {
        let lower = Dyadic::max(i.lo(), &Dyadic::zero());
        let upper = Dyadic::max(i.hi(), &Dyadic::zero());
        HeightValue {
            lower,
            upper,
            precision_bits: prec,
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lower.clone(), self.upper.clone())
    }

    pub fn width(&self) -> Dyadic {
        &self.upper - &self.lower
    }

    pub fn to_f64(&self) -> f64 {
        self.interval().to_f64()
    }

    pub fn to_record(&self) -> HeightRecord {
        HeightRecord {
            lower: self.lower.to_decimal_string(),
            upper: self.upper.to_decimal_string(),
            precision_bits: self.precision_bits,
        }
    }
}

/// `log max(|p|, |q|)` for a nonzero rational in lowest terms.
pub fn rational_height(q: &BigRational, prec: u32) -> Result<Interval> {
    if q.is_zero() {
        return Err(Error::invalid("height of zero is undefined"));
    }
    let m = q.numer().abs().max(q.denom().clone());
    Ok(Interval::log_int(&m, prec))
}

/// Enclosure of `log M(f)`.
pub fn log_mahler_measure(f: &IntPolynomial, prec: u32) -> Result<Interval> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (unit, factors) = crate::algnum::factor(f);
    let mut acc = Interval::log_int(&unit, prec);
    for (g, e) in factors {
        let lg = log_mahler_square_free(&g, prec)?;
        acc = acc.add(&lg.mul_int(e as i64, prec), prec);
    }
    Ok(acc)
}

fn log_mahler_square_free(g: &IntPolynomial, prec: u32) -> Result<Interval> {
    let mut acc = Interval::log_int(&g.leading(), prec);
    if g.degree() == 1 {
        // |lc|·max(1, |root|) = max(|a1|, |a0|)
        let m = g.coeff(0).abs().max(g.coeff(1).abs());
        return Ok(Interval::log_int(&m, prec));
    }
    let target = Dyadic::pow2(-(prec as i64));
    for b in crate::algnum::isolate_roots(g, &target)? {
        let r = b.to_cinterval().abs(prec + 16);
        acc = acc.add(&r.log_plus(prec + 16), prec + 16);
    }
    Ok(acc.round(prec))
}

/// Enclosure of `M(f) = |lc|·∏ max(1, |root|)` (roots with multiplicity).
pub fn mahler_measure(f: &IntPolynomial, prec: u32) -> Result<Interval> {
    Ok(log_mahler_measure(f, prec)?.exp(prec))
}

/// Weil height `h(a) = log M(minpoly) / deg`; exact formula for rationals.
pub fn weil_height(a: &AlgebraicNumber, prec: u32) -> Result<HeightValue> {
    if a.is_zero() {
        return Err(Error::invalid("height of zero is undefined"));
    }
    let i = match a.as_rational() {
        Some(q) => rational_height(&q, prec)?,
        None => log_mahler_measure(a.minpoly(), prec)?.div_int(a.degree() as i64, prec),
    };
    Ok(HeightValue::from_interval(&i, prec))
}

/// Height of an exact value.
pub fn exact_height(x: &Exact, prec: u32) -> Result<Interval> {
    match x {
        Exact::Rational(q) => rational_height(q, prec),
        Exact::Algebraic(a) => Ok(weil_height(a, prec)?.interval()),
    }
}

/// What the affine bound's argument is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgumentKind {
    /// `log|m|₁`
    LogOfOneNorm,
    /// `|m|₁`
    OneNorm,
    /// `h(partner)`
    HeightOfPartner,
}

/// Certified inequality `h(target) ≤ A·arg + C`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineBound {
    pub slope: Dyadic,
    pub offset: Dyadic,
    pub argument_kind: ArgumentKind,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRecord {
    #[serde(rename = "A")]
    pub slope: String,
    #[serde(rename = "C")]
    pub offset: String,
    pub argument_kind: ArgumentKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

const BOUND_BITS: u32 = 64;

impl AffineBound {
    fn new(slope: &Dyadic, offset: &Dyadic, kind: ArgumentKind) -> Self {
        AffineBound {
            slope: slope.round(BOUND_BITS, Round::Up),
            offset: Dyadic::max(offset, &Dyadic::zero()).round(BOUND_BITS, Round::Up),
            argument_kind: kind,
            notes: Vec::new(),
        }
    }

    /// Upper bound of `A·arg + C` for an argument enclosure.
    pub fn apply(&self, arg: &Interval, prec: u32) -> Dyadic {
        Interval::point(self.slope.clone())
            .mul(arg, prec)
            .add(&Interval::point(self.offset.clone()), prec)
            .hi()
            .clone()
    }

    /// `outer ∘ self`: if `h(t) ≤ A₁·arg + C₁` and `h(u) ≤ A₂·h(t) + C₂`
    /// then `h(u) ≤ A₂A₁·arg + (A₂C₁ + C₂)`.
    pub fn then(&self, outer: &AffineBound) -> AffineBound {
        assert_eq!(outer.argument_kind, ArgumentKind::HeightOfPartner);
        let a = (&outer.slope * &self.slope).round(BOUND_BITS, Round::Up);
        let c = (&(&outer.slope * &self.offset) + &outer.offset).round(BOUND_BITS, Round::Up);
        let mut b = AffineBound::new(&a, &c, self.argument_kind);
        b.notes = self.notes.iter().chain(&outer.notes).cloned().collect();
        b
    }

    pub fn to_record(&self) -> AffineRecord {
        AffineRecord {
            slope: self.slope.to_decimal_string(),
            offset: self.offset.to_decimal_string(),
            argument_kind: self.argument_kind,
            notes: self.notes.clone(),
        }
    }
}

/// `h(m·c) ≤ t·log|m|₁ + Σ h(cᵢ) + (t − 1)·log 2` for all nonzero integer `m`.
pub fn a1_constant(c: &[Exact], prec: u32) -> Result<AffineBound> {
    if c.is_empty() {
        return Err(Error::invalid("a1 needs a nonempty vector"));
    }
    let mut sum = Interval::zero();
    for x in c {
        if x.is_zero() {
            return Err(Error::invalid("a1 entries must be nonzero"));
        }
        sum = sum.add(&exact_height(x, prec)?, prec);
    }
    let t = c.len() as i64;
    let off = sum.add(&Interval::ln2(prec).mul_int(t - 1, prec), prec);
    Ok(AffineBound::new(
        &Dyadic::from_int(t),
        off.hi(),
        ArgumentKind::LogOfOneNorm,
    ))
}

/// `h(γ^m) ≤ maxᵢ h(γᵢ)·|m|₁`.
pub fn a2_constant(gamma: &[Exact], prec: u32) -> Result<AffineBound> {
    let mut a = Dyadic::zero();
    for g in gamma {
        if g.is_zero() {
            return Err(Error::invalid("a2 entries must be nonzero"));
        }
        a = Dyadic::max(&a, exact_height(g, prec)?.hi());
    }
    Ok(AffineBound::new(&a, &Dyadic::zero(), ArgumentKind::OneNorm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Bound `h(x)` in terms of `h(y)`.
    XFromY,
    /// Bound `h(y)` in terms of `h(x)`.
    YFromX,
}

/// Affine form of `h(target) ≤ A·h(partner) + C` for `f(α, β) = 0`.
///
/// Writing `f = Σ_j r_j(partner)·target^j`, at every place the vector
/// `(r_j(β))` is bounded by the coefficient vector times `max(1, |β|)^{deg}`
/// times the number of terms in the largest `r_j` (archimedean places only),
/// so `h_proj(r(β)) ≤ h_proj(f) + deg_partner·h(β) + log(terms)`. A root of a
/// polynomial of degree ≥ 2 has height at most its projective height plus
/// `log 2`; in degree 1 the root's height equals the projective height.
pub fn a4_bound(
    f: &BivariatePolynomial<Exact>,
    direction: Direction,
    prec: u32,
) -> Result<AffineBound> {
    let g = match direction {
        Direction::XFromY => f.clone(),
        Direction::YFromX => f.swap_xy(),
    };
    // g(target = x, partner = y)
    let (dx, _) = g.partials_nonzero();
    if !dx {
        return Err(Error::DirectionDegenerate(format!(
            "{f} does not constrain the {} variable",
            match direction {
                Direction::XFromY => "x",
                Direction::YFromX => "y",
            }
        )));
    }
    let slices = g.x_slices();
    let deg_target = g.degree_x();
    let deg_partner = g.degree_y();
    let max_terms = slices.values().map(|s| s.len()).max().unwrap_or(1);
    let coeffs: Vec<Exact> = g.terms().values().cloned().collect();
    let hproj = projective_height_upper(&coeffs, prec)?;
    let mut off = hproj.add(&Interval::log_int(&BigInt::from(max_terms), prec), prec);
    if deg_target >= 2 {
        off = off.add(&Interval::ln2(prec), prec);
    }
    let mut b = AffineBound::new(
        &Dyadic::from_int(deg_partner as i64),
        off.hi(),
        ArgumentKind::HeightOfPartner,
    );
    b.notes = exceptional_partners(&slices);
    Ok(b)
}

/// Upper bound on the projective height of a coefficient vector: exact for
/// rational vectors, `Σ h(cᵢ)` otherwise.
pub fn projective_height_upper(c: &[Exact], prec: u32) -> Result<Interval> {
    let nz: Vec<&Exact> = c.iter().filter(|x| !x.is_zero()).collect();
    if nz.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(qs) = nz.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>() {
        let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = qs
            .iter()
            .map(|q| (*q * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let m = ints.iter().map(|v| (v / &g).abs()).max().unwrap();
        return Ok(Interval::log_int(&m, prec));
    }
    let mut sum = Interval::zero();
    for x in nz {
        sum = sum.add(&exact_height(x, prec)?, prec);
    }
    Ok(sum)
}

/// Partner values at which every coefficient of the target vanishes (so the
/// bound says nothing about the target there).
fn exceptional_partners(slices: &std::collections::BTreeMap<u32, std::collections::BTreeMap<u32, Exact>>) -> Vec<String> {
    let mut polys = Vec::new();
    for s in slices.values() {
        let deg = s.keys().max().copied().unwrap_or(0) as usize;
        let mut c = vec![BigRational::zero(); deg + 1];
        for (j, v) in s {
            match v.as_rational() {
                Some(q) => c[*j as usize] = q.clone(),
                None => return vec!["exceptional partner values not checked (algebraic coefficients)".into()],
            }
        }
        polys.push(IntPolynomial::from_rationals(&c));
    }
    let g = polys
        .iter()
        .fold(IntPolynomial::zero(), |acc, p| acc.gcd(p));
    if g.degree() >= 1 {
        vec![format!("bound void when the partner is a root of {g}")]
    } else {
        vec![]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{ComplexBox, Dyadic};

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[test]
    fn integer_heights() {
        let h = weil_height(&AlgebraicNumber::from_int(2), 64).unwrap();
        assert!((h.to_f64() - ln(2.0)).abs() < 1e-15);
        assert_eq!(
            weil_height(&AlgebraicNumber::one(), 64).unwrap().upper,
            Dyadic::zero()
        );
        let third = AlgebraicNumber::from_rational(&BigRational::new(1.into(), 3.into()));
        assert!((weil_height(&third, 64).unwrap().to_f64() - ln(3.0)).abs() < 1e-15);
    }

    #[test]
    fn golden_height() {
        let phi = AlgebraicNumber::from_poly_and_approx(
            &IntPolynomial::from_i64(&[-1, -1, 1]),
            &ComplexBox::new(Dyadic::from_f64(1.6), Dyadic::zero(), Dyadic::pow2(-3)),
        )
        .unwrap();
        let h = weil_height(&phi, 80).unwrap();
        assert!((h.to_f64() - 0.5 * ln(1.618033988749895)).abs() < 1e-12);
        assert!(h.width().to_f64() < 1e-15);
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_measure(&IntPolynomial::from_i64(&[-2, 1]), 64).unwrap();
        assert!(m.contains(&Dyadic::from_int(2)));
        let lehmer = IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let m = mahler_measure(&lehmer, 64).unwrap();
        assert!((m.to_f64() - 1.176280818).abs() < 1e-8);
        // repeated roots count with multiplicity
        let sq = IntPolynomial::from_i64(&[-2, 1]).pow(2);
        let m = mahler_measure(&sq, 64).unwrap();
        assert!(m.contains(&Dyadic::from_int(4)));
    }

    #[test]
    fn a1_examples() {
        let b = a1_constant(&[Exact::int(1)], 64).unwrap();
        assert_eq!(b.slope, Dyadic::one());
        assert!(b.offset.is_zero());
        let b = a1_constant(&[Exact::int(1), Exact::int(2)], 64).unwrap();
        assert_eq!(b.slope, Dyadic::from_int(2));
        assert!((b.offset.to_f64() - 2.0 * ln(2.0)).abs() < 1e-15);
    }

    #[test]
    fn a2_examples() {
        let b = a2_constant(&[Exact::int(2), Exact::int(3)], 64).unwrap();
        assert!((b.slope.to_f64() - ln(3.0)).abs() < 1e-15);
        assert!(a2_constant(&[Exact::int(1)], 64).unwrap().slope.is_zero());
    }

    #[test]
    fn a4_examples() {
        let f = BivariatePolynomial::from_terms([((1, 0), Exact::int(1)), ((0, 1), Exact::int(-2))])
            .unwrap();
        let b = a4_bound(&f, Direction::XFromY, 64).unwrap();
        assert_eq!(b.slope, Dyadic::one());
        assert!((b.offset.to_f64() - ln(2.0)).abs() < 1e-15);
        let g = BivariatePolynomial::from_terms([((2, 0), Exact::int(1)), ((0, 1), Exact::int(-1))])
            .unwrap();
        let b = a4_bound(&g, Direction::YFromX, 64).unwrap();
        assert!(b.slope >= Dyadic::from_int(2));
        let h = BivariatePolynomial::from_terms([((0, 2), Exact::int(1)), ((0, 0), Exact::int(-3))])
            .unwrap();
        assert!(matches!(
            a4_bound(&h, Direction::XFromY, 64),
            Err(Error::DirectionDegenerate(_))
        ));
    }

    #[test]
    fn exceptional_partner_noted() {
        // x·y − y = y(x − 1): x is unconstrained when y = 0
        let f = BivariatePolynomial::from_terms([((1, 1), Exact::int(1)), ((0, 1), Exact::int(-1))])
            .unwrap();
        let b = a4_bound(&f, Direction::XFromY, 64).unwrap();
        assert_eq!(b.notes.len(), 1);
    }
}
