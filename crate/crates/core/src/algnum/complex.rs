//! Complex enclosures.
//!
//! [`CInterval`] is a rectangle `re × im` and carries all the arithmetic.
//! [`ComplexBox`] is the midpoint–radius disk used in file formats and for
//! isolating roots; conversions in both directions are outward.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use super::interval::Interval;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl fmt::Debug for CInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        CInterval {
            re,
            im: Interval::zero(),
        }
    }

    pub fn zero() -> Self {
        CInterval::real(Interval::zero())
    }

    pub fn one() -> Self {
        CInterval::real(Interval::one())
    }

    pub fn i() -> Self {
        CInterval::new(Interval::zero(), Interval::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        CInterval::real(Interval::from_int(n))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        CInterval::real(Interval::from_rational(q, prec))
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        CInterval::new(Interval::point(re), Interval::point(im))
    }

    /// Enclosure of `2πi`.
    pub fn two_pi_i(prec: u32) -> Self {
        CInterval::new(Interval::zero(), Interval::pi(prec).shl(1))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn intersects(&self, o: &CInterval) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn contains_box(&self, o: &CInterval) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    pub fn hull(&self, o: &CInterval) -> CInterval {
        CInterval::new(self.re.hull(&o.re), self.im.hull(&o.im))
    }

    pub fn round(&self, prec: u32) -> CInterval {
        CInterval::new(self.re.round(prec), self.im.round(prec))
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn mid_point(&self) -> CInterval {
        let (a, b) = self.mid();
        CInterval::point(a, b)
    }

    pub fn neg(&self) -> CInterval {
        CInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CInterval {
        CInterval::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &CInterval, prec: u32) -> CInterval {
        CInterval::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &CInterval, prec: u32) -> CInterval {
        CInterval::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn mul(&self, o: &CInterval, prec: u32) -> CInterval {
        if self.im.is_zero_point() {
            return CInterval::new(self.re.mul(&o.re, prec), self.re.mul(&o.im, prec));
        }
        if o.im.is_zero_point() {
            return CInterval::new(self.re.mul(&o.re, prec), self.im.mul(&o.re, prec));
        }
        let wp = prec + 4;
        let re = self
            .re
            .mul(&o.re, wp)
            .sub(&self.im.mul(&o.im, wp), prec);
        let im = self
            .re
            .mul(&o.im, wp)
            .add(&self.im.mul(&o.re, wp), prec);
        CInterval::new(re, im)
    }

    pub fn mul_real(&self, r: &Interval, prec: u32) -> CInterval {
        CInterval::new(self.re.mul(r, prec), self.im.mul(r, prec))
    }

    pub fn sqr(&self, prec: u32) -> CInterval {
        let wp = prec + 4;
        let re = self.re.sqr(wp).sub(&self.im.sqr(wp), prec);
        let im = self.re.mul(&self.im, wp).shl(1).round(prec);
        CInterval::new(re, im)
    }

    pub fn shl(&self, k: i64) -> CInterval {
        CInterval::new(self.re.shl(k), self.im.shl(k))
    }

    /// `|z|²`
    pub fn norm_sqr(&self, prec: u32) -> Interval {
        self.re.sqr(prec + 2).add(&self.im.sqr(prec + 2), prec)
    }

    pub fn abs(&self, prec: u32) -> Interval {
        self.norm_sqr(prec + 4).sqrt(prec).expect("nonnegative")
    }

    /// Reciprocal; `None` when the box meets zero.
    pub fn inv(&self, prec: u32) -> Option<CInterval> {
        if self.im.is_zero_point() {
            return Interval::one()
                .div(&self.re, prec)
                .map(CInterval::real);
        }
        let wp = prec + 8;
        let n = self.norm_sqr(wp);
        if n.contains_zero() {
            return None;
        }
        // centered form: 1/z over a box is overestimated by the conj/|z|²
        // formula when the box is wide; that is acceptable here
        let c = self.conj();
        Some(CInterval::new(
            c.re.div(&n, prec)?,
            c.im.div(&n, prec)?,
        ))
    }

    pub fn div(&self, o: &CInterval, prec: u32) -> Option<CInterval> {
        Some(self.mul(&o.inv(prec + 4)?, prec))
    }

    pub fn pow(&self, k: u32, prec: u32) -> CInterval {
        let mut acc = CInterval::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    pub fn powi(&self, k: i64, prec: u32) -> Option<CInterval> {
        if k >= 0 {
            Some(self.pow(k as u32, prec))
        } else {
            self.pow((-k) as u32, prec + 8).inv(prec)
        }
    }

    /// Enclosure of `exp(z)` over the whole box.
    pub fn exp(&self, prec: u32) -> CInterval {
        let modulus = self.re.exp(prec + 4);
        if self.im.is_zero_point() {
            return CInterval::real(modulus);
        }
        let phase = exp_i(&self.im, prec + 4);
        phase.mul_real(&modulus, prec)
    }

    /// Principal argument in `(-π, π]`; `None` when the box meets zero or
    /// straddles the negative real axis.
    pub fn arg(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let wp = prec + 8;
        let pi = Interval::pi(wp);
        let half_pi = pi.shl(-1);
        if self.re.is_positive() {
            return Some(self.im.div(&self.re, wp)?.atan(wp).round(prec));
        }
        if self.im.is_positive() {
            let t = self.re.div(&self.im, wp)?.atan(wp);
            return Some(half_pi.sub(&t, prec));
        }
        if self.im.is_negative() {
            let t = self.re.div(&self.im, wp)?.atan(wp);
            return Some(half_pi.neg().sub(&t, prec));
        }
        // re < 0 and im touches zero
        if !self.im.lo().is_negative() {
            let t = self.im.div(&self.re.neg(), wp)?.atan(wp);
            return Some(pi.sub(&t, prec));
        }
        None
    }

    /// Principal logarithm `log|z| + i·Arg z`.
    pub fn log(&self, prec: u32) -> Option<CInterval> {
        let arg = self.arg(prec)?;
        let m = self.norm_sqr(prec + 8).log(prec + 4)?.shl(-1).round(prec);
        Some(CInterval::new(m, arg))
    }

    /// Upper bound on the distance from the midpoint to any point of the box.
    pub fn radius_upper(&self) -> Dyadic {
        let a = self.re.rad();
        let b = self.im.rad();
        let s = &(&a * &a) + &(&b * &b);
        s.sqrt(64, Round::Up)
    }

    pub fn max_width(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width())
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `exp(iθ)` for a real interval θ: Taylor series on `θ/2^s` followed by
/// `s` squarings.
fn exp_i(theta: &Interval, prec: u32) -> CInterval {
    let mag = theta.mag();
    let s = match mag.magnitude() {
        None => return CInterval::one(),
        Some(m) => (m + 10).max(0),
    };
    let wp = prec + 24 + s as u32;
    let r = theta.shl(-s);
    let rmag = r.mag();
    let w = CInterval::new(Interval::zero(), r);
    let eps = Dyadic::pow2(-(wp as i64) - 4);
    let mut term = CInterval::one();
    let mut sum = CInterval::one();
    let mut k: i64 = 1;
    loop {
        let t = term.mul(&w, wp);
        term = CInterval::new(t.re.div_int(k, wp), t.im.div_int(k, wp));
        sum = sum.add(&term, wp);
        k += 1;
        let tmag = Dyadic::max(&term.re.mag(), &term.im.mag()).shl(1);
        let tail = (&tmag * &rmag).shl(1).div(&Dyadic::from_int(k), 32, Round::Up);
        if tail <= eps {
            sum = CInterval::new(sum.re.inflate(&tail), sum.im.inflate(&tail));
            break;
        }
    }
    for _ in 0..s {
        sum = sum.sqr(wp);
    }
    // |exp(iθ)| = 1 exactly; clip components to [-1, 1]
    let unit = Interval::new(Dyadic::from_int(-1), Dyadic::one());
    let clip = |x: &Interval| -> Interval {
        let lo = Dyadic::max(x.lo(), unit.lo());
        let hi = Dyadic::min(x.hi(), unit.hi());
        if lo <= hi {
            Interval::new(lo, hi)
        } else {
            x.clone()
        }
    };
    CInterval::new(clip(&sum.re), clip(&sum.im)).round(prec)
}

/// A closed disk `center ± radius` in ℂ with dyadic data.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub center_re: Dyadic,
    pub center_im: Dyadic,
    pub radius: Dyadic,
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.10} {:+.10}i ± {:.2e})",
            self.center_re.to_f64(),
            self.center_im.to_f64(),
            self.radius.to_f64()
        )
    }
}

impl fmt::Display for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ComplexBox {
    pub fn new(center_re: Dyadic, center_im: Dyadic, radius: Dyadic) -> Self {
        assert!(!radius.is_negative());
        ComplexBox {
            center_re,
            center_im,
            radius,
        }
    }

    pub fn exact(re: Dyadic, im: Dyadic) -> Self {
        ComplexBox::new(re, im, Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ComplexBox::exact(Dyadic::from_int(n), Dyadic::zero())
    }

    /// Smallest-effort disk around a rectangle (radius rounded up).
    pub fn from_cinterval(c: &CInterval) -> Self {
        let (re, im) = c.mid();
        ComplexBox::new(re, im, c.radius_upper())
    }

    pub fn to_cinterval(&self) -> CInterval {
        CInterval::new(
            Interval::ball(&self.center_re, &self.radius),
            Interval::ball(&self.center_im, &self.radius),
        )
    }

    pub fn center(&self) -> CInterval {
        CInterval::point(self.center_re.clone(), self.center_im.clone())
    }

    /// Lower bound on the distance between the centres minus both radii;
    /// positive means the disks are certainly disjoint.
    pub fn disjoint(&self, o: &ComplexBox) -> bool {
        let dx = &self.center_re - &o.center_re;
        let dy = &self.center_im - &o.center_im;
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        let r = &self.radius + &o.radius;
        d2 > &r * &r
    }

    pub fn intersects(&self, o: &ComplexBox) -> bool {
        !self.disjoint(o)
    }

    /// True when `o` lies inside `self`.
    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        if o.radius > self.radius {
            return false;
        }
        let dx = &self.center_re - &o.center_re;
        let dy = &self.center_im - &o.center_im;
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        let slack = &self.radius - &o.radius;
        d2 <= &slack * &slack
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        let dx = &self.center_re - re;
        let dy = &self.center_im - im;
        &(&dx * &dx) + &(&dy * &dy) <= &self.radius * &self.radius
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.center_re.to_f64(), self.center_im.to_f64())
    }

    pub fn is_real(&self) -> bool {
        self.center_im.is_zero()
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox::new(
            self.center_re.clone(),
            -&self.center_im,
            self.radius.clone(),
        )
    }

    pub fn to_record(&self) -> BoxRecord {
        BoxRecord {
            re: self.center_re.to_decimal_string(),
            im: self.center_im.to_decimal_string(),
            rad: self.radius.to_decimal_string(),
        }
    }

    /// Parse a decimal record; non-dyadic decimals are enclosed by rounding
    /// the centre at `prec` bits and widening the radius accordingly.
    pub fn from_record(r: &BoxRecord, prec: u32) -> Result<Self> {
        let re = parse_decimal(&r.re)?;
        let im = parse_decimal(&r.im)?;
        let rad = parse_decimal(&r.rad)?;
        if rad < BigRational::zero() {
            return Err(Error::invalid(format!("negative radius {}", r.rad)));
        }
        Ok(ComplexBox::from_rational_parts(&re, &im, &rad, prec))
    }

    pub fn from_rational_parts(
        re: &BigRational,
        im: &BigRational,
        rad: &BigRational,
        prec: u32,
    ) -> Self {
        let cre = Dyadic::from_rational(re, prec, Round::Nearest);
        let cim = Dyadic::from_rational(im, prec, Round::Nearest);
        let err_re = (&cre.to_rational() - re).abs_val();
        let err_im = (&cim.to_rational() - im).abs_val();
        let total = rad + err_re + err_im;
        let r = Dyadic::from_rational(&total, 64, Round::Up);
        ComplexBox::new(cre, cim, r)
    }
}

trait AbsVal {
    fn abs_val(self) -> Self;
}

impl AbsVal for BigRational {
    fn abs_val(self) -> Self {
        if self < BigRational::zero() {
            -self
        } else {
            self
        }
    }
}

/// Serialized form of a [`ComplexBox`]: decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
    #[serde(default = "zero_string")]
    pub rad: String,
}

fn zero_string() -> String {
    "0".to_string()
}

/// Parse an exact decimal (`-12.5`, `3e-4`) or fraction (`3/8`) string.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not an exact decimal or fraction: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigRational = parse_decimal(n)?;
        let d: BigRational = parse_decimal(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(n / d);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> CInterval {
        CInterval::point(Dyadic::from_f64(re), Dyadic::from_f64(im))
    }

    #[test]
    fn exp_of_two_pi_i_contains_one() {
        let e = CInterval::two_pi_i(128).exp(128);
        assert!(e.re.contains(&Dyadic::one()));
        assert!(e.im.contains_zero());
        assert!(e.max_width().to_f64() < 1e-30);
    }

    #[test]
    fn exp_matches_f64() {
        for (a, b) in [(0.5, 1.0), (-3.0, 7.5), (13.0, -13.0), (0.0, 100.0)] {
            let e = c(a, b).exp(96);
            let (x, y) = e.to_c64();
            let m = a.exp();
            assert!((x - m * b.cos()).abs() < 1e-12 * m.max(1.0), "{a} {b}");
            assert!((y - m * b.sin()).abs() < 1e-12 * m.max(1.0));
        }
    }

    #[test]
    fn arg_quadrants() {
        for (a, b) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -2.0), (-3.0, 0.0), (0.0, 2.0)] {
            let arg = c(a, b).arg(80).unwrap();
            assert!((arg.to_f64() - f64::atan2(b, a)).abs() < 1e-15, "{a} {b}");
        }
        let straddle = CInterval::new(
            Interval::point(Dyadic::from_int(-1)),
            Interval::new(Dyadic::from_f64(-0.1), Dyadic::from_f64(0.1)),
        );
        assert!(straddle.arg(64).is_none());
    }

    #[test]
    fn box_conversions_enclose() {
        let r = CInterval::new(
            Interval::new(Dyadic::from_int(1), Dyadic::from_int(2)),
            Interval::new(Dyadic::from_int(-1), Dyadic::from_int(0)),
        );
        let b = ComplexBox::from_cinterval(&r);
        for (x, y) in [(1, -1), (2, 0), (1, 0), (2, -1)] {
            assert!(b.contains_point(&Dyadic::from_int(x), &Dyadic::from_int(y)));
        }
        assert!(b.to_cinterval().contains_box(&r));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("3/8").unwrap(), BigRational::new(3.into(), 8.into()));
        assert_eq!(parse_decimal("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_decimal("1.5e2").unwrap(), BigRational::from_integer(150.into()));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("1/0").is_err());
    }

    #[test]
    fn record_encloses_decimal() {
        let rec = BoxRecord {
            re: "0.1".into(),
            im: "0".into(),
            rad: "0".into(),
        };
        let b = ComplexBox::from_record(&rec, 64).unwrap();
        assert!(b.to_cinterval().re.contains_rational(&parse_decimal("0.1").unwrap()));
    }
}
