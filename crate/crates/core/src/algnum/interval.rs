//! Real intervals with dyadic endpoints and outward rounding, plus certified
//! enclosures of `exp`, `log`, `atan`, `sqrt` and the constants π and log 2.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::{Dyadic, Round};

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Interval::point(Dyadic::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        match Dyadic::try_from_rational_exact(q) {
            Some(d) => Interval::point(d),
            None => Interval {
                lo: Dyadic::from_rational(q, prec, Round::Down),
                hi: Dyadic::from_rational(q, prec, Round::Up),
            },
        }
    }

    /// `mid ± rad`
    pub fn ball(mid: &Dyadic, rad: &Dyadic) -> Self {
        let r = rad.abs();
        Interval {
            lo: mid - &r,
            hi: mid + &r,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Exact midpoint.
    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    /// Half-width (exact).
    pub fn rad(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
        }
    }

    /// Round endpoints outward to `prec` bits.
    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: (&self.lo + &o.lo).round(prec, Round::Down),
            hi: (&self.hi + &o.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: (&self.lo - &o.hi).round(prec, Round::Down),
            hi: (&self.hi - &o.lo).round(prec, Round::Up),
        }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let (lo, hi) = if !self.lo.is_negative() && !o.lo.is_negative() {
            (&self.lo * &o.lo, &self.hi * &o.hi)
        } else {
            let c = [
                &self.lo * &o.lo,
                &self.lo * &o.hi,
                &self.hi * &o.lo,
                &self.hi * &o.hi,
            ];
            let lo = c.iter().min().unwrap().clone();
            let hi = c.iter().max().unwrap().clone();
            (lo, hi)
        };
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let a = self.abs();
        a.mul(&a, prec)
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
        }
    }

    pub fn mul_int(&self, k: i64, prec: u32) -> Interval {
        self.mul(&Interval::from_int(k), prec)
    }

    /// Division; `None` when the divisor contains zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval {
            lo: Dyadic::one().div(&o.hi, prec + 4, Round::Down),
            hi: Dyadic::one().div(&o.lo, prec + 4, Round::Up),
        };
        Some(self.mul(&inv, prec))
    }

    pub fn div_int(&self, k: i64, prec: u32) -> Interval {
        assert!(k != 0);
        let d = Dyadic::from_int(k);
        let (a, b) = (
            self.lo.div(&d, prec, Round::Down),
            self.hi.div(&d, prec, Round::Up),
        );
        if k > 0 {
            Interval { lo: a, hi: b }
        } else {
            Interval {
                lo: self.hi.div(&d, prec, Round::Down),
                hi: self.lo.div(&d, prec, Round::Up),
            }
        }
    }

    /// `{|x| : x ∈ self}`
    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&self.lo.abs(), &self.hi),
            }
        }
    }

    /// Upper bound on `|x|`.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: Dyadic::max(&self.lo, &o.lo),
            hi: Dyadic::max(&self.hi, &o.hi),
        }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &o.lo),
            hi: Dyadic::min(&self.hi, &o.hi),
        }
    }

    /// Widen by `eps` on both sides.
    pub fn inflate(&self, eps: &Dyadic) -> Interval {
        let e = eps.abs();
        Interval {
            lo: &self.lo - &e,
            hi: &self.hi + &e,
        }
    }

    pub fn sqrt(&self, prec: u32) -> Option<Interval> {
        if self.lo.is_negative() {
            return None;
        }
        Some(Interval {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        })
    }

    pub fn pow(&self, k: u32, prec: u32) -> Interval {
        let mut acc = Interval::one();
        let mut base = self.clone();
        let mut e = k;
        // even powers are nonnegative; square-and-multiply with abs handles it
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        if k % 2 == 0 && acc.lo.is_negative() {
            acc.lo = Dyadic::zero();
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn exp(&self, prec: u32) -> Interval {
        let lo = exp_point(&self.lo, prec);
        if self.is_point() {
            return lo;
        }
        let hi = exp_point(&self.hi, prec);
        Interval {
            lo: lo.lo,
            hi: hi.hi,
        }
    }

    /// Natural logarithm of a positive interval.
    pub fn log(&self, prec: u32) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let lo = log_point(&self.lo, prec);
        if self.is_point() {
            return Some(lo);
        }
        let hi = log_point(&self.hi, prec);
        Some(Interval {
            lo: lo.lo,
            hi: hi.hi,
        })
    }

    pub fn atan(&self, prec: u32) -> Interval {
        let lo = atan_point(&self.lo, prec);
        if self.is_point() {
            return lo;
        }
        let hi = atan_point(&self.hi, prec);
        Interval {
            lo: lo.lo,
            hi: hi.hi,
        }
    }

    pub fn pi(prec: u32) -> Interval {
        cached(&PI_CACHE, prec, compute_pi)
    }

    pub fn ln2(prec: u32) -> Interval {
        cached(&LN2_CACHE, prec, compute_ln2)
    }

    /// Enclosure of `log max(1, x)` for `x ≥ 0`.
    pub fn log_plus(&self, prec: u32) -> Interval {
        let one = Interval::one();
        let m = self.max(&one);
        m.log(prec).expect("positive")
    }
}

thread_local! {
    static PI_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
}

fn cached(
    cache: &'static std::thread::LocalKey<RefCell<HashMap<u32, Interval>>>,
    prec: u32,
    f: fn(u32) -> Interval,
) -> Interval {
    if let Some(v) = cache.with(|c| c.borrow().get(&prec).cloned()) {
        return v;
    }
    let v = f(prec);
    cache.with(|c| c.borrow_mut().insert(prec, v.clone()));
    v
}

/// `Σ_{k≥0} (-1)^k x^(2k+1)/(2k+1)` (alternating) or the plain odd series,
/// for `|x| ≤ 1/2`, with truncation error folded in.
fn odd_series(x: &Interval, prec: u32, alternating: bool) -> Interval {
    let wp = prec + 16;
    let x2 = x.sqr(wp);
    let mag = x.mag();
    debug_assert!(mag <= Dyadic::pow2(-1));
    let eps = Dyadic::pow2(-(wp as i64) - 4);
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut k: i64 = 1;
    let mut pmag = mag.clone();
    loop {
        power = power.mul(&x2, wp);
        pmag = (&pmag * &(&mag * &mag)).round(32, Round::Up);
        let term = power.div_int(2 * k + 1, wp);
        if alternating && k % 2 == 1 {
            sum = sum.sub(&term, wp);
        } else {
            sum = sum.add(&term, wp);
        }
        k += 1;
        // next term magnitude ≤ pmag·mag²/(2k+1); with |x| ≤ 1/2 the tail is
        // bounded by twice that
        let next = (&pmag * &(&mag * &mag)).round(32, Round::Up);
        if next <= eps {
            let tail = next.shl(1);
            return sum.inflate(&tail).round(prec + 8);
        }
    }
}

fn atanh_series(x: &Interval, prec: u32) -> Interval {
    odd_series(x, prec, false)
}

fn atan_small(x: &Interval, prec: u32) -> Interval {
    odd_series(x, prec, true)
}

fn compute_pi(prec: u32) -> Interval {
    let wp = prec + 16;
    let a = atan_small(&Interval::from_rational(&BigRational::new(1.into(), 5.into()), wp), wp);
    let b = atan_small(
        &Interval::from_rational(&BigRational::new(1.into(), 239.into()), wp),
        wp,
    );
    a.shl(4).sub(&b.shl(2), wp).round(prec + 4)
}

fn compute_ln2(prec: u32) -> Interval {
    let wp = prec + 16;
    let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), wp);
    atanh_series(&third, wp).shl(1).round(prec + 4)
}

fn exp_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let m = x.magnitude().unwrap();
    let s = (m + 10).max(0);
    let wp = prec + 24 + s as u32;
    let r = Interval::point(x.shl(-s));
    let rmag = r.mag();
    let eps = Dyadic::pow2(-(wp as i64) - 4);
    let mut term = Interval::one();
    let mut sum = Interval::one();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r, wp).div_int(k, wp);
        sum = sum.add(&term, wp);
        let tmag = term.mag();
        k += 1;
        // tail ≤ |term|·|r|/k · 1/(1-|r|) ≤ 2|term||r|/k
        let tail = (&tmag * &rmag).shl(1).div(&Dyadic::from_int(k), 32, Round::Up);
        if tail <= eps {
            sum = sum.inflate(&tail);
            break;
        }
    }
    for _ in 0..s {
        sum = sum.sqr(wp);
    }
    sum.round(prec + 4)
}

fn log_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.is_positive());
    if *x == Dyadic::one() {
        return Interval::zero();
    }
    let wp = prec + 16;
    // x = m·2^k with m ∈ [2/3, 4/3)
    let mut k = x.magnitude().unwrap() - 1; // x ∈ [2^k, 2^(k+1))
    let mut m = x.shl(-k);
    let four_thirds = BigRational::new(4.into(), 3.into());
    if m.to_rational() >= four_thirds {
        m = m.shl(-1);
        k += 1;
    }
    let mi = Interval::point(m);
    let one = Interval::one();
    let t = mi
        .sub(&one, wp)
        .div(&mi.add(&one, wp), wp)
        .expect("m+1 > 0");
    let mut res = atanh_series(&t, wp).shl(1);
    if k != 0 {
        let l2 = Interval::ln2(wp + 64);
        res = res.add(&l2.mul_int(k, wp), wp);
    }
    res.round(prec + 4)
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::zero();
    }
    let wp = prec + 16;
    if x.abs() > Dyadic::one() {
        // atan x = sign(x)·π/2 − atan(1/x)
        let xi = Interval::point(x.clone());
        let inv = Interval::one().div(&xi, wp).unwrap();
        let half_pi = Interval::pi(wp).shl(-1);
        let inner = atan_interval_small(&inv, wp);
        let r = if x.is_positive() {
            half_pi.sub(&inner, wp)
        } else {
            half_pi.neg().sub(&inner, wp)
        };
        return r.round(prec + 4);
    }
    atan_interval_small(&Interval::point(x.clone()), wp).round(prec + 4)
}

/// atan on an interval inside `[-1, 1]` via two half-angle reductions.
fn atan_interval_small(x: &Interval, wp: u32) -> Interval {
    let mut y = x.clone();
    let one = Interval::one();
    for _ in 0..3 {
        // y/(1 + sqrt(1 + y²))
        let s = one.add(&y.sqr(wp), wp).sqrt(wp).unwrap();
        y = y.div(&one.add(&s, wp), wp).unwrap();
    }
    atan_small(&y, wp).shl(3)
}

impl From<i64> for Interval {
    fn from(n: i64) -> Self {
        Interval::from_int(n)
    }
}

impl Interval {
    pub fn from_dyadics(lo: Dyadic, hi: Dyadic) -> Self {
        Interval::new(lo, hi)
    }

    pub fn is_zero_point(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// Certified `log|n|` style helper for integers.
    pub fn log_int(n: &BigInt, prec: u32) -> Interval {
        assert!(!n.is_zero());
        let a = if n < &BigInt::zero() { -n.clone() } else { n.clone() };
        if a.is_one() {
            return Interval::zero();
        }
        Interval::point(Dyadic::from_int(a)).log(prec).unwrap()
    }
}
