//! Certified isolation of the complex roots of an integer polynomial.
//!
//! Approximations come from Aberth's simultaneous iteration carried out in
//! dyadic floating point. They are certified with Smith's inclusion theorem:
//! for distinct approximations zᵢ of the roots of f (degree n) put
//! Wᵢ = f(zᵢ) / (lc·∏_{j≠i}(zᵢ − zⱼ)); the disks D(zᵢ, n·|Wᵢ|) cover all roots
//! and each connected component holding k disks holds exactly k roots.
//! Pairwise disjoint disks therefore isolate one root each.

use num_traits::{Signed, Zero};

use super::complex::{CInterval, ComplexBox};
use super::dyadic::{Dyadic, Round};
use super::poly::IntPolynomial;
use crate::{Error, Result};

/// Default working-precision cap in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

const START_BITS: u32 = 64;

/// Isolate the distinct complex roots of `poly`, each in a disk of radius at
/// most `target`. Boxes are sorted by (real part, imaginary part) of their
/// centres and are conjugate-symmetric.
pub fn isolate_roots(poly: &IntPolynomial, target: &Dyadic) -> Result<Vec<ComplexBox>> {
    isolate_roots_capped(poly, target, DEFAULT_PRECISION_CAP)
}

pub fn isolate_roots_capped(
    poly: &IntPolynomial,
    target: &Dyadic,
    cap: u32,
) -> Result<Vec<ComplexBox>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if poly.degree() == 0 {
        return Err(Error::invalid("root isolation needs degree ≥ 1"));
    }
    let f = poly.square_free_part();
    if f.degree() == 1 {
        return Ok(vec![linear_root(&f, target)]);
    }
    let df = f.derivative();
    let mut z = initial_points(&f);
    let mut prec = START_BITS;
    let mut first = true;
    loop {
        aberth(&f, &df, &mut z, prec, if first { 4000 } else { 200 });
        first = false;
        symmetrize(&mut z);
        if let Some(boxes) = certify(&f, &z, prec) {
            if boxes.iter().all(|b| &b.radius <= target) {
                let mut boxes = boxes;
                boxes.sort_by(|a, b| {
                    a.center_re
                        .cmp(&b.center_re)
                        .then_with(|| a.center_im.cmp(&b.center_im))
                });
                return Ok(boxes);
            }
        }
        if prec >= cap {
            return Err(Error::precision(prec, format!("isolating roots of {f}")));
        }
        prec = (prec * 2).min(cap);
    }
}

/// Root of `a·x + b`, exact when it is dyadic.
fn linear_root(f: &IntPolynomial, target: &Dyadic) -> ComplexBox {
    let q = num_rational::BigRational::new(-f.coeff(0), f.coeff(1));
    if let Some(d) = Dyadic::try_from_rational_exact(&q) {
        return ComplexBox::exact(d, Dyadic::zero());
    }
    let mut prec = START_BITS;
    loop {
        let lo = Dyadic::from_rational(&q, prec, Round::Down);
        let hi = Dyadic::from_rational(&q, prec, Round::Up);
        let rad = (&hi - &lo).round(32, Round::Up);
        if &rad <= target {
            return ComplexBox::new(lo, Dyadic::zero(), rad);
        }
        prec *= 2;
    }
}

#[derive(Clone, Debug)]
struct Cf {
    re: Dyadic,
    im: Dyadic,
}

impl Cf {
    fn zero() -> Self {
        Cf {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Cf, prec: u32) -> Cf {
        Cf {
            re: (&self.re + &o.re).round(prec, Round::Nearest),
            im: (&self.im + &o.im).round(prec, Round::Nearest),
        }
    }

    fn sub(&self, o: &Cf, prec: u32) -> Cf {
        Cf {
            re: (&self.re - &o.re).round(prec, Round::Nearest),
            im: (&self.im - &o.im).round(prec, Round::Nearest),
        }
    }

    fn mul(&self, o: &Cf, prec: u32) -> Cf {
        Cf {
            re: (&(&self.re * &o.re) - &(&self.im * &o.im)).round(prec, Round::Nearest),
            im: (&(&self.re * &o.im) + &(&self.im * &o.re)).round(prec, Round::Nearest),
        }
    }

    fn div(&self, o: &Cf, prec: u32) -> Option<Cf> {
        let d = &(&o.re * &o.re) + &(&o.im * &o.im);
        if d.is_zero() {
            return None;
        }
        let nr = &(&self.re * &o.re) + &(&self.im * &o.im);
        let ni = &(&self.im * &o.re) - &(&self.re * &o.im);
        Some(Cf {
            re: nr.div(&d, prec, Round::Nearest),
            im: ni.div(&d, prec, Round::Nearest),
        })
    }

    /// Approximate log2 of the modulus (max of component magnitudes).
    fn mag(&self) -> Option<i64> {
        match (self.re.magnitude(), self.im.magnitude()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    fn conj(&self) -> Cf {
        Cf {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn dist2(&self, o: &Cf) -> Dyadic {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        &(&dr * &dr) + &(&di * &di)
    }
}

fn horner(f: &IntPolynomial, z: &Cf, prec: u32) -> Cf {
    let mut acc = Cf::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z, prec).add(
            &Cf {
                re: Dyadic::from_int(c.clone()),
                im: Dyadic::zero(),
            },
            prec,
        );
    }
    acc
}

/// Points on a circle whose radius estimates the largest root modulus.
fn initial_points(f: &IntPolynomial) -> Vec<Cf> {
    let n = f.degree();
    let lc_bits = f.leading().abs().bits() as f64;
    let mut r_log2 = f64::NEG_INFINITY;
    for (i, c) in f.coeffs().iter().enumerate().take(n) {
        if c.is_zero() {
            continue;
        }
        let est = (c.abs().bits() as f64 - lc_bits + 1.0) / (n - i) as f64;
        r_log2 = r_log2.max(est);
    }
    if !r_log2.is_finite() {
        r_log2 = 0.0;
    }
    let r = 2f64.powf(r_log2.clamp(-1000.0, 1000.0).fract());
    let shift = r_log2.clamp(-1000.0, 1000.0).trunc() as i64;
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Cf {
                re: Dyadic::from_f64(r * t.cos()).shl(shift),
                im: Dyadic::from_f64(r * t.sin()).shl(shift),
            }
        })
        .collect()
}

fn aberth(f: &IntPolynomial, df: &IntPolynomial, z: &mut [Cf], prec: u32, max_iter: usize) {
    let n = z.len();
    let one = Cf {
        re: Dyadic::one(),
        im: Dyadic::zero(),
    };
    for _ in 0..max_iter {
        let mut converged = true;
        for i in 0..n {
            let fz = horner(f, &z[i], prec);
            if fz.is_zero() {
                continue;
            }
            let dfz = horner(df, &z[i], prec);
            let Some(ratio) = fz.div(&dfz, prec) else {
                z[i] = z[i].add(&nudge(&z[i], prec), prec);
                converged = false;
                continue;
            };
            let mut s = Cf::zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = z[i].sub(&z[j], prec);
                if let Some(inv) = one.div(&d, prec) {
                    s = s.add(&inv, prec);
                }
            }
            let denom = one.sub(&ratio.mul(&s, prec), prec);
            let w = ratio.div(&denom, prec).unwrap_or(ratio);
            z[i] = z[i].sub(&w, prec);
            let small = match (w.mag(), z[i].mag()) {
                (None, _) => true,
                (Some(wm), Some(zm)) => wm < zm.max(-(prec as i64) / 2) - prec as i64 + 12,
                (Some(wm), None) => wm < -(prec as i64) + 12,
            };
            if !small {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
}

fn nudge(z: &Cf, prec: u32) -> Cf {
    let m = z.mag().unwrap_or(0);
    let e = m - (prec as i64) / 4;
    Cf {
        re: Dyadic::pow2(e),
        im: Dyadic::pow2(e - 1),
    }
}

/// Make the approximation set closed under conjugation, so certified disks
/// come in conjugate pairs and a disk centred on the axis holds a real root.
fn symmetrize(z: &mut [Cf]) {
    let n = z.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        done[i] = true;
        let self_d = z[i].dist2(&z[i].conj());
        let mut best: Option<(usize, Dyadic)> = None;
        for j in 0..n {
            if done[j] {
                continue;
            }
            let d = z[i].dist2(&z[j].conj());
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d < self_d => {
                done[j] = true;
                let re = (&z[i].re + &z[j].re).shl(-1);
                let mut im = (&z[i].im - &z[j].im).shl(-1);
                if im.is_negative() {
                    im = -&im;
                }
                z[i] = Cf {
                    re: re.clone(),
                    im: im.clone(),
                };
                z[j] = Cf { re, im: -&im };
            }
            _ => z[i].im = Dyadic::zero(),
        }
    }
}

fn certify(f: &IntPolynomial, z: &[Cf], prec: u32) -> Option<Vec<ComplexBox>> {
    let n = z.len();
    let lc = CInterval::from_int(f.leading());
    let pts: Vec<CInterval> = z
        .iter()
        .map(|c| CInterval::point(c.re.clone(), c.im.clone()))
        .collect();
    let mut boxes = Vec::with_capacity(n);
    for i in 0..n {
        let num = f.eval_interval(&pts[i], prec);
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&pts[i].sub(&pts[j], prec), prec);
            }
        }
        let w = num.div(&den, prec)?;
        let r = w.abs(prec).hi().clone() * Dyadic::from_int(n as i64);
        boxes.push(ComplexBox::new(
            z[i].re.clone(),
            z[i].im.clone(),
            r.round(32, Round::Up),
        ));
    }
    // conjugate partners get the larger of their two radii
    for i in 0..n {
        if boxes[i].center_im.is_zero() {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| {
            j != i && boxes[j].center_re == boxes[i].center_re && boxes[j].center_im == -&boxes[i].center_im
        }) {
            let r = Dyadic::max(&boxes[i].radius, &boxes[j].radius);
            boxes[i].radius = r.clone();
            boxes[j].radius = r;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !boxes[i].disjoint(&boxes[j]) {
                return None;
            }
        }
    }
    Some(boxes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn tiny() -> Dyadic {
        Dyadic::pow2(-40)
    }

    fn close(b: &ComplexBox, re: f64, im: f64) -> bool {
        let (x, y) = b.to_c64();
        (x - re).abs() < 1e-9 && (y - im).abs() < 1e-9
    }

    #[test]
    fn plus_minus_i() {
        let r = isolate_roots(&p(&[1, 0, 1]), &tiny()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(close(&r[0], 0.0, -1.0) && close(&r[1], 0.0, 1.0));
        assert!(r[0].contains_point(&Dyadic::zero(), &Dyadic::from_int(-1)));
    }

    #[test]
    fn golden_ratio() {
        let r = isolate_roots(&p(&[-1, -1, 1]), &tiny()).unwrap();
        let s5 = 5f64.sqrt();
        assert!(close(&r[0], (1.0 - s5) / 2.0, 0.0));
        assert!(close(&r[1], (1.0 + s5) / 2.0, 0.0));
        assert!(r.iter().all(|b| b.is_real()));
    }

    #[test]
    fn cube_roots_of_two() {
        let r = isolate_roots(&p(&[-2, 0, 0, 1]), &tiny()).unwrap();
        assert_eq!(r.len(), 3);
        let m = 2f64.cbrt();
        let a = 2.0 * std::f64::consts::PI / 3.0;
        assert!(close(&r[0], m * a.cos(), -m * a.sin()));
        assert!(close(&r[1], m * a.cos(), m * a.sin()));
        assert!(close(&r[2], m, 0.0));
    }

    #[test]
    fn multiplicity_collapsed() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 0, 1]));
        let r = isolate_roots(&f, &tiny()).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn tight_radius_escalates_precision() {
        let r = isolate_roots(&p(&[-2, 0, 1]), &Dyadic::pow2(-300)).unwrap();
        assert!(r.iter().all(|b| b.radius <= Dyadic::pow2(-300)));
    }

    #[test]
    fn clustered_roots() {
        // (x - 1/1024)(x + 1/1024)(x - 1) scaled to integers
        let f = p(&[-1, 1024]).mul(&p(&[1, 1024])).mul(&p(&[-1, 1]));
        let r = isolate_roots(&f, &tiny()).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn precision_cap_reported() {
        let e = isolate_roots_capped(&p(&[-2, 0, 1]), &Dyadic::pow2(-300), 128);
        assert!(matches!(e, Err(Error::PrecisionExhausted { .. })));
    }
}
