//! Exact algebraic numbers: an irreducible minimal polynomial together with a
//! disk isolating the designated root.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::{CInterval, ComplexBox};
use super::dyadic::{Dyadic, Round};
use super::factor::factor;
use super::interval::Interval;
use super::poly::{IntPolynomial, RatPoly};
use super::roots::{isolate_roots, DEFAULT_PRECISION_CAP};
use crate::{Error, Result};

/// Default cap on the degree of a resultant built by [`alg_arith`].
pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    isolating_box: ComplexBox,
}

impl AlgebraicNumber {
    pub fn from_rational(q: &BigRational) -> Self {
        let minpoly = IntPolynomial::linear_for(q);
        let isolating_box = match Dyadic::try_from_rational_exact(q) {
            Some(d) => ComplexBox::exact(d, Dyadic::zero()),
            None => {
                let lo = Dyadic::from_rational(q, 128, Round::Down);
                let hi = Dyadic::from_rational(q, 128, Round::Up);
                let rad = (&hi - &lo).round(32, Round::Up);
                ComplexBox::new(lo, Dyadic::zero(), rad)
            }
        };
        AlgebraicNumber {
            minpoly,
            isolating_box,
        }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_int(0)
    }

    pub fn one() -> Self {
        AlgebraicNumber::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        AlgebraicNumber {
            minpoly: IntPolynomial::from_i64(&[1, 0, 1]),
            isolating_box: ComplexBox::new(Dyadic::zero(), Dyadic::one(), Dyadic::pow2(-2)),
        }
    }

    /// Trusted constructor: `minpoly` must be irreducible, primitive with
    /// positive leading coefficient, and `isolating_box` must contain exactly
    /// one of its roots.
    pub fn new_unchecked(minpoly: IntPolynomial, isolating_box: ComplexBox) -> Self {
        AlgebraicNumber {
            minpoly,
            isolating_box,
        }
    }

    /// The root of `poly` lying in (or nearest to) `approx`. Fails when the
    /// approximation cannot single out one root.
    pub fn from_poly_and_approx(poly: &IntPolynomial, approx: &ComplexBox) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if poly.degree() == 0 {
            return Err(Error::invalid("constant polynomial has no roots"));
        }
        let (_, factors) = factor(poly);
        let mut target = Dyadic::max(&approx.radius, &Dyadic::pow2(-16)).round(8, Round::Down);
        for _ in 0..64 {
            let mut hits = Vec::new();
            let mut inside = 0;
            for (g, _) in &factors {
                for b in isolate_roots(g, &target)? {
                    if b.intersects(approx) {
                        if approx.contains_box(&b) {
                            inside += 1;
                        }
                        hits.push((g.clone(), b));
                    }
                }
            }
            match hits.len() {
                0 => {
                    return Err(Error::invalid(format!(
                        "no root of {poly} near {}",
                        approx
                    )))
                }
                1 => {
                    let (g, b) = hits.pop().unwrap();
                    return Ok(AlgebraicNumber::new_unchecked(g, b));
                }
                n if inside == n => {
                    return Err(Error::invalid(format!(
                        "approximation {approx} holds {n} roots of {poly}"
                    )))
                }
                _ => target = target.shl(-8),
            }
        }
        Err(Error::precision(DEFAULT_PRECISION_CAP, "separating roots"))
    }

    /// All distinct roots of `poly`.
    pub fn roots_of(poly: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
        let (_, factors) = factor(poly);
        let mut out = Vec::new();
        for (g, _) in factors {
            for b in isolate_roots(&g, &Dyadic::pow2(-32))? {
                out.push(AlgebraicNumber::new_unchecked(g.clone(), b));
            }
        }
        Ok(out)
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn isolating_box(&self) -> &ComplexBox {
        &self.isolating_box
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.minpoly.degree() == 1 && self.minpoly.coeff(0).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.minpoly.degree() == 1 && self.minpoly.coeff(0) == -self.minpoly.coeff(1)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.minpoly.degree() == 1)
            .then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    /// Certified enclosure as a rectangle.
    pub fn enclosure(&self) -> CInterval {
        self.isolating_box.to_cinterval()
    }

    /// Enclosure with a width below `2^-bits`.
    pub fn enclosure_bits(&self, bits: u32) -> Result<CInterval> {
        if let Some(q) = self.as_rational() {
            let prec = bits + 64 + q.numer().bits().max(q.denom().bits()) as u32;
            return Ok(CInterval::from_rational(&q, prec));
        }
        Ok(self.refine(&Dyadic::pow2(-(bits as i64) - 1))?.enclosure())
    }

    /// Boxes at radius `target` and the index of the one designated by `self`,
    /// if exactly one of them lies inside the current isolating box.
    fn locate(&self, target: &Dyadic) -> Result<Option<(Vec<ComplexBox>, usize)>> {
        let boxes = isolate_roots(&self.minpoly, target)?;
        let inside: Vec<usize> = (0..boxes.len())
            .filter(|&k| self.isolating_box.contains_box(&boxes[k]))
            .collect();
        Ok(match inside.as_slice() {
            [k] => Some((boxes, *k)),
            _ => None,
        })
    }

    /// The same number with an isolating box of radius at most `target`.
    pub fn refine(&self, target: &Dyadic) -> Result<AlgebraicNumber> {
        if self.isolating_box.radius <= *target {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            let mut prec = 64;
            loop {
                let lo = Dyadic::from_rational(&q, prec, Round::Down);
                let hi = Dyadic::from_rational(&q, prec, Round::Up);
                let rad = (&hi - &lo).round(32, Round::Up);
                if rad <= *target {
                    return Ok(AlgebraicNumber::new_unchecked(
                        self.minpoly.clone(),
                        ComplexBox::new(lo, Dyadic::zero(), rad),
                    ));
                }
                prec *= 2;
            }
        }
        let mut t = target.clone();
        for _ in 0..64 {
            if let Some((boxes, k)) = self.locate(&t)? {
                return Ok(AlgebraicNumber::new_unchecked(
                    self.minpoly.clone(),
                    boxes[k].clone(),
                ));
            }
            t = t.shl(-4);
        }
        Err(Error::precision(DEFAULT_PRECISION_CAP, "refining algebraic number"))
    }

    /// Exact equality: same minimal polynomial and the same designated root.
    pub fn try_eq(&self, o: &AlgebraicNumber) -> Result<bool> {
        if self.minpoly != o.minpoly {
            return Ok(false);
        }
        if self.degree() == 1 {
            return Ok(true);
        }
        if self.isolating_box.disjoint(&o.isolating_box) {
            return Ok(false);
        }
        let mut t = Dyadic::min(&self.isolating_box.radius, &o.isolating_box.radius).shl(-1);
        for _ in 0..64 {
            if let (Some((_, a)), Some((_, b))) = (self.locate(&t)?, o.locate(&t)?) {
                return Ok(a == b);
            }
            t = t.shl(-4);
        }
        Err(Error::precision(DEFAULT_PRECISION_CAP, "comparing algebraic numbers"))
    }

    pub fn neg(&self) -> AlgebraicNumber {
        let b = &self.isolating_box;
        AlgebraicNumber::new_unchecked(
            self.minpoly.reflect().primitive(),
            ComplexBox::new(-&b.center_re, -&b.center_im, b.radius.clone()),
        )
    }

    pub fn conj(&self) -> AlgebraicNumber {
        AlgebraicNumber::new_unchecked(self.minpoly.clone(), self.isolating_box.conj())
    }

    pub fn add(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        alg_arith(self, o, ArithOp::Add)
    }

    pub fn sub(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        alg_arith(self, o, ArithOp::Sub)
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        alg_arith(self, o, ArithOp::Mul)
    }

    pub fn div(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        alg_arith(self, o, ArithOp::Div)
    }

    pub fn inv(&self) -> Result<AlgebraicNumber> {
        alg_arith(&AlgebraicNumber::one(), self, ArithOp::Div)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<AlgebraicNumber> {
        if k < 0 {
            return self.pow(-k)?.inv();
        }
        if k == 0 {
            return Ok(AlgebraicNumber::one());
        }
        if let Some(q) = self.as_rational() {
            return Ok(AlgebraicNumber::from_rational(&num_traits::pow(q, k as usize)));
        }
        let kk = k as usize;
        let a = self.clone();
        image_root(
            |x0| {
                // x0 − y^k
                let mut c = vec![BigInt::zero(); kk + 1];
                c[0] = x0.clone();
                c[kk] = BigInt::from(-1);
                IntPolynomial::new(c)
            },
            1,
            &self.minpoly,
            |t, prec| {
                let a = a.refine(t)?;
                Ok(a.enclosure().pow(kk as u32, prec))
            },
            DEFAULT_DEGREE_CAP.max(self.degree()),
        )
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.try_eq(o).unwrap_or(false)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} in {}", self.minpoly, self.isolating_box),
        }
    }
}

/// Field operation on algebraic numbers via resultants.
pub fn alg_arith(a: &AlgebraicNumber, b: &AlgebraicNumber, op: ArithOp) -> Result<AlgebraicNumber> {
    alg_arith_capped(a, b, op, DEFAULT_DEGREE_CAP)
}

pub fn alg_arith_capped(
    a: &AlgebraicNumber,
    b: &AlgebraicNumber,
    op: ArithOp,
    cap: usize,
) -> Result<AlgebraicNumber> {
    if op == ArithOp::Div && b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        let r = match op {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
            ArithOp::Div => x / y,
        };
        return Ok(AlgebraicNumber::from_rational(&r));
    }
    match op {
        ArithOp::Mul | ArithOp::Div if a.is_zero() => return Ok(AlgebraicNumber::zero()),
        ArithOp::Mul if b.is_zero() => return Ok(AlgebraicNumber::zero()),
        ArithOp::Add | ArithOp::Sub if b.is_zero() => return Ok(a.clone()),
        ArithOp::Add if a.is_zero() => return Ok(b.clone()),
        ArithOp::Sub if a.is_zero() => return Ok(b.neg()),
        ArithOp::Mul if b.is_one() => return Ok(a.clone()),
        ArithOp::Div if b.is_one() => return Ok(a.clone()),
        ArithOp::Mul if a.is_one() => return Ok(b.clone()),
        _ => {}
    }
    let pa = a.minpoly.clone();
    let da = pa.degree();
    let (a2, b2) = (a.clone(), b.clone());
    let enclose = move |t: &Dyadic, prec: u32| -> Result<CInterval> {
        let x = a2.refine(t)?.enclosure();
        let y = b2.refine(t)?.enclosure();
        Ok(match op {
            ArithOp::Add => x.add(&y, prec),
            ArithOp::Sub => x.sub(&y, prec),
            ArithOp::Mul => x.mul(&y, prec),
            ArithOp::Div => match x.div(&y, prec) {
                Some(v) => v,
                None => {
                    let huge = Interval::new(-&Dyadic::pow2(4000), Dyadic::pow2(4000));
                    CInterval::new(huge.clone(), huge)
                }
            },
        })
    };
    image_root(
        move |x0| a_specialized(&pa, op, x0),
        da,
        &b.minpoly,
        enclose,
        cap,
    )
}

/// `A(x0, y)` for the bivariate polynomial whose resultant with `P_b(y)`
/// vanishes at `a op b`.
fn a_specialized(pa: &IntPolynomial, op: ArithOp, x0: &BigInt) -> IntPolynomial {
    let d = pa.degree();
    match op {
        // P_a(x0 − y), P_a(x0 + y)
        ArithOp::Add | ArithOp::Sub => {
            let sign = if op == ArithOp::Add { -1 } else { 1 };
            let lin = IntPolynomial::new(vec![x0.clone(), BigInt::from(sign)]);
            let mut acc = IntPolynomial::zero();
            for c in pa.coeffs().iter().rev() {
                acc = acc.mul(&lin).add(&IntPolynomial::constant(c.clone()));
            }
            acc
        }
        // y^d · P_a(x0 / y) = Σ a_k x0^k y^(d−k)
        ArithOp::Mul => {
            let mut c = vec![BigInt::zero(); d + 1];
            let mut xp = BigInt::one();
            for (k, a) in pa.coeffs().iter().enumerate() {
                c[d - k] = a * &xp;
                xp *= x0;
            }
            IntPolynomial::new(c)
        }
        // P_a(x0 · y)
        ArithOp::Div => {
            let mut xp = BigInt::one();
            let mut c = Vec::with_capacity(d + 1);
            for a in pa.coeffs() {
                c.push(a * &xp);
                xp *= x0;
            }
            IntPolynomial::new(c)
        }
    }
}

/// Build `R(x) = Res_y(A(x, y), P_b(y))` by evaluation/interpolation, factor
/// it, and pick the root lying in the enclosure of the true value.
/// `x_degree` is the degree of `A` in `x`.
fn image_root<F, E>(
    a_at: F,
    x_degree: usize,
    pb: &IntPolynomial,
    enclose: E,
    cap: usize,
) -> Result<AlgebraicNumber>
where
    F: Fn(&BigInt) -> IntPolynomial,
    E: Fn(&Dyadic, u32) -> Result<CInterval>,
{
    let deg = x_degree * pb.degree();
    if deg > cap {
        return Err(Error::DegreeGuardExceeded { degree: deg, cap });
    }
    let xs: Vec<BigInt> = (1..=deg as i64 + 1).map(BigInt::from).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x0| BigRational::from_integer(resultant(&a_at(x0), pb)))
        .collect();
    let r = RatPoly::interpolate(&xs, &ys);
    if r.is_zero() {
        return Err(Error::invalid("vanishing resultant"));
    }
    let r = IntPolynomial::from_rationals(&r.coeffs);
    let (_, factors) = factor(&r);
    pick_root(&factors.into_iter().map(|(g, _)| g).collect::<Vec<_>>(), enclose)
}

fn pick_root<E>(factors: &[IntPolynomial], enclose: E) -> Result<AlgebraicNumber>
where
    E: Fn(&Dyadic, u32) -> Result<CInterval>,
{
    let mut t = Dyadic::pow2(-24);
    let mut prec = 96;
    while prec <= DEFAULT_PRECISION_CAP {
        let image = enclose(&t, prec)?;
        let image_disk = ComplexBox::from_cinterval(&image);
        let mut hits = Vec::new();
        for g in factors {
            let boxes = isolate_roots(g, &t)?;
            for (k, bx) in boxes.iter().enumerate() {
                if bx.intersects(&image_disk) {
                    hits.push((g, boxes.clone(), k));
                }
            }
        }
        if hits.len() == 1 {
            let (g, boxes, k) = hits.pop().unwrap();
            let merged = enclosing_disk(&boxes[k], &image_disk);
            let clean = boxes
                .iter()
                .enumerate()
                .all(|(j, o)| j == k || merged.disjoint(o));
            let chosen = if clean { merged } else { boxes[k].clone() };
            return Ok(AlgebraicNumber::new_unchecked(g.clone(), chosen));
        }
        if hits.is_empty() {
            return Err(Error::invalid("enclosure misses every resultant root"));
        }
        t = t.shl(-16);
        prec *= 2;
    }
    Err(Error::precision(DEFAULT_PRECISION_CAP, "selecting resultant root"))
}

/// A disk containing both `a` and `b` (centre of `b`, radius grown to cover `a`).
fn enclosing_disk(a: &ComplexBox, b: &ComplexBox) -> ComplexBox {
    let dx = (&a.center_re - &b.center_re).abs();
    let dy = (&a.center_im - &b.center_im).abs();
    let dist = (&(&dx * &dx) + &(&dy * &dy)).sqrt(64, Round::Up);
    let r = Dyadic::max(&(&dist + &a.radius), &b.radius).round(32, Round::Up);
    ComplexBox::new(b.center_re.clone(), b.center_im.clone(), r)
}

/// Resultant of two integer polynomials (Sylvester determinant, Bareiss).
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (f.degree(), g.degree());
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::from_poly_and_approx(
            &p(&[-2, 0, 1]),
            &ComplexBox::new(Dyadic::from_f64(1.4), Dyadic::zero(), Dyadic::pow2(-3)),
        )
        .unwrap()
    }

    fn phi() -> AlgebraicNumber {
        AlgebraicNumber::from_poly_and_approx(
            &p(&[-1, -1, 1]),
            &ComplexBox::new(Dyadic::from_f64(1.6), Dyadic::zero(), Dyadic::pow2(-3)),
        )
        .unwrap()
    }

    #[test]
    fn resultant_small() {
        // Res(x^2 - 2, x - 1) = -1 ... up to sign convention: (1)^2 - 2
        use num_traits::Signed;
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-2, 0, 1])).abs(), BigInt::from(1));
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), BigInt::from(1));
        assert_eq!(resultant(&p(&[0, 1]), &p(&[0, 0, 1])), BigInt::zero());
    }

    #[test]
    fn sqrt2_plus_sqrt2() {
        let s = sqrt2();
        let r = s.add(&s).unwrap();
        assert_eq!(r.minpoly(), &p(&[-8, 0, 1]));
        assert!(r.isolating_box().to_c64().0 > 2.8);
        let d = s.sub(&s).unwrap();
        assert!(d.is_zero());
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.as_rational(), Some(BigRational::from_integer(2.into())));
    }

    #[test]
    fn reciprocal_of_phi() {
        let r = phi().inv().unwrap();
        assert_eq!(r.minpoly(), &p(&[-1, 1, 1]));
        assert!((r.isolating_box().to_c64().0 - 0.618034).abs() < 1e-4);
    }

    #[test]
    fn mul_by_zero() {
        assert!(phi().mul(&AlgebraicNumber::zero()).unwrap().is_zero());
        assert!(matches!(phi().div(&AlgebraicNumber::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn equality_distinguishes_conjugates() {
        let a = phi();
        let b = AlgebraicNumber::roots_of(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(b.len(), 2);
        assert!(a != b[0] && a == b[1]);
        let i = AlgebraicNumber::i();
        assert!(i != i.conj());
        assert_eq!(i.pow(2).unwrap(), AlgebraicNumber::from_int(-1));
    }

    #[test]
    fn degree_guard() {
        let a = AlgebraicNumber::roots_of(&p(&[-2, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let b = AlgebraicNumber::roots_of(&p(&[-3, 0, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let e = alg_arith(&a[0], &b[0], ArithOp::Add);
        assert!(matches!(e, Err(Error::DegreeGuardExceeded { degree: 72, cap: 64 })));
    }
}
