//! Dense univariate polynomials over ℤ and ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::CInterval;
use super::interval::Interval;

/// Integer polynomial, coefficients constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        IntPolynomial::from_i64(&[0, 1])
    }

    /// `den·x − num`, the minimal polynomial of a rational.
    pub fn linear_for(q: &BigRational) -> Self {
        IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 (check `is_zero` first).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = IntPolynomial::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^deg · p(1/x)`
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// Exact division over ℤ; `None` if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        assert!(!o.is_zero());
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        if self.degree() < o.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let lc = o.leading();
        let dq = self.degree() - o.degree();
        let mut q = vec![BigInt::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let top = &rem[k + o.degree()];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            q[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPolynomial::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder `lc(o)^(deg self − deg o + 1) · self mod o`.
    pub fn pseudo_rem(&self, o: &Self) -> Self {
        assert!(!o.is_zero());
        if self.degree() < o.degree() || self.is_zero() {
            return self.clone();
        }
        let mut r = self.coeffs.clone();
        let lc = o.leading();
        let d = o.degree();
        let mut deg = self.degree();
        loop {
            if r.len() <= deg || deg < d {
                break;
            }
            let top = r[deg].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[deg - d + j] -= &top * b;
            }
            r.truncate(deg);
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
            deg = r.len() - 1;
        }
        IntPolynomial::new(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        let c = self.content().gcd(&o.content());
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&c)
    }

    /// `p / gcd(p, p')`, primitive.
    pub fn square_free_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive()
            .div_exact(&g.primitive())
            .expect("gcd divides")
            .primitive()
    }

    pub fn is_square_free(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Yun's square-free decomposition: `[(factor, multiplicity)]`.
    pub fn square_free_decomposition(&self) -> Vec<(IntPolynomial, u32)> {
        let f = self.primitive();
        if f.is_zero() || f.degree() == 0 {
            return vec![];
        }
        let f = RatPoly::from_int(&f);
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((IntPolynomial::from_rationals(&a.coeffs), i));
            }
            b = b.div_rem(&a).0;
            let c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_interval(&self, x: &CInterval, prec: u32) -> CInterval {
        let mut acc = CInterval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&CInterval::from_int(c.clone()), prec);
        }
        acc
    }

    pub fn eval_real_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&Interval::from_int(c.clone()), prec);
        }
        acc
    }

    /// Euclidean norm squared of the coefficient vector.
    pub fn norm2_sqr(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Upper bound on the absolute value of every coefficient of every integer
    /// factor of `self`: `2^deg · ⌈‖p‖₂⌉ · |lc|`.
    pub fn factor_coefficient_bound(&self) -> BigInt {
        let n2 = self.norm2_sqr().sqrt() + 1;
        (BigInt::one() << self.degree()) * n2 * self.leading().abs()
    }

    /// Clear denominators and take the primitive part.
    pub fn from_rationals(c: &[BigRational]) -> Self {
        let l = c
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        IntPolynomial::new(
            c.iter()
                .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// `x^n − 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPolynomial::new(c)
    }

    /// The cyclotomic polynomial Φ_n.
    pub fn cyclotomic(n: usize) -> Self {
        assert!(n >= 1);
        let mut p = IntPolynomial::x_pow_minus_one(n);
        for d in 1..n {
            if n % d == 0 {
                p = p.div_exact(&IntPolynomial::cyclotomic(d)).unwrap();
            }
        }
        p
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "·" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "·" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial over ℚ; used for interpolation and exact division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        RatPoly::new(p.to_rationals())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn div_rem(&self, o: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!o.is_zero());
        let mut r = self.coeffs.clone();
        if r.len() < o.coeffs.len() {
            return (RatPoly::new(vec![]), self.clone());
        }
        let d = o.degree();
        let lc = o.coeffs[d].clone();
        let mut q = vec![BigRational::zero(); r.len() - d];
        for k in (0..q.len()).rev() {
            let c = &r[k + d] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            q[k] = c;
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        match self.coeffs.last() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate(xs: &[BigInt], ys: &[BigRational]) -> RatPoly {
        assert_eq!(xs.len(), ys.len());
        // Newton divided differences
        let n = xs.len();
        let xr: Vec<BigRational> = xs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xr[i] - &xr[i - j]);
            }
        }
        let mut p = RatPoly::new(vec![dd[n - 1].clone()]);
        for i in (0..n - 1).rev() {
            // p = p·(x − x_i) + dd[i]
            let lin = RatPoly::new(vec![-xr[i].clone(), BigRational::one()]);
            p = p.mul(&lin).add(&RatPoly::new(vec![dd[i].clone()]));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn gcd_and_square_free() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.square_free_part(), p(&[-1, 1]).mul(&p(&[2, 1])));
        assert!(!f.is_square_free());
        let dec = f.square_free_decomposition();
        assert_eq!(dec, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 2, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 2])), Some(p(&[2])));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(IntPolynomial::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(IntPolynomial::cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(IntPolynomial::cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(IntPolynomial::cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn interpolation_recovers() {
        let f = RatPoly::from_int(&p(&[3, 0, -2, 5]));
        let xs: Vec<BigInt> = (0..4).map(BigInt::from).collect();
        let ys: Vec<BigRational> = xs
            .iter()
            .map(|x| p(&[3, 0, -2, 5]).eval_rational(&BigRational::from_integer(x.clone())))
            .collect();
        assert_eq!(RatPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(p(&[3, -2]).to_string(), "-2·x + 3");
    }
}
