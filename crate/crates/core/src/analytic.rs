//! Certified counting and location of the zeros of `F(z) = p(z, eᶻ)` in
//! axis-aligned rectangles.
//!
//! Counting uses the argument principle. The boundary is cut into segments
//! on which the enclosure of `F` lies in an open half-plane avoiding zero,
//! so the change of argument along each segment is less than `π` and is
//! fixed by the endpoint values. Location quadrisects until every cell
//! holds one zero, then certifies it with the Krawczyk operator.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algnum::{BivariatePolynomial, BoxRecord, CInterval, ComplexBox, Dyadic, Exact, Interval};
use crate::{Error, Result};

/// Deepest bisection of a boundary segment.
const MAX_SEGMENT_DEPTH: u32 = 48;
/// Cells narrower than `2^-MIN_CELL_EXP` are reported without refinement.
const MIN_CELL_EXP: i64 = 40;

/// Closed rectangle `[re0, re1] × [im0, im1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub re0: Dyadic,
    pub im0: Dyadic,
    pub re1: Dyadic,
    pub im1: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub re0: String,
    pub im0: String,
    pub re1: String,
    pub im1: String,
}

impl Region {
    pub fn new(re0: Dyadic, im0: Dyadic, re1: Dyadic, im1: Dyadic) -> Result<Self> {
        if re0 >= re1 || im0 >= im1 {
            return Err(Error::invalid("region must have nonempty interior"));
        }
        Ok(Region { re0, im0, re1, im1 })
    }

    /// The square `[-r, r]²`.
    pub fn square(r: &Dyadic) -> Result<Self> {
        Region::new(-r, -r, r.clone(), r.clone())
    }

    pub fn from_f64(re0: f64, im0: f64, re1: f64, im1: f64) -> Result<Self> {
        Region::new(
            Dyadic::from_f64(re0),
            Dyadic::from_f64(im0),
            Dyadic::from_f64(re1),
            Dyadic::from_f64(im1),
        )
    }

    pub fn to_record(&self) -> RegionRecord {
        RegionRecord {
            re0: self.re0.to_decimal_string(),
            im0: self.im0.to_decimal_string(),
            re1: self.re1.to_decimal_string(),
            im1: self.im1.to_decimal_string(),
        }
    }

    pub fn as_cinterval(&self) -> CInterval {
        CInterval::new(
            Interval::new(self.re0.clone(), self.re1.clone()),
            Interval::new(self.im0.clone(), self.im1.clone()),
        )
    }

    fn width(&self) -> Dyadic {
        Dyadic::max(&(&self.re1 - &self.re0), &(&self.im1 - &self.im0))
    }

    /// Four cells cut at fraction `t` of each side.
    fn quadrisect(&self, t: &Dyadic) -> [Region; 4] {
        let rm = &self.re0 + &(t * &(&self.re1 - &self.re0));
        let im = &self.im0 + &(t * &(&self.im1 - &self.im0));
        let cell = |a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic| Region {
            re0: a.clone(),
            im0: b.clone(),
            re1: c.clone(),
            im1: d.clone(),
        };
        [
            cell(&self.re0, &self.im0, &rm, &im),
            cell(&rm, &self.im0, &self.re1, &im),
            cell(&self.re0, &im, &rm, &self.im1),
            cell(&rm, &im, &self.re1, &self.im1),
        ]
    }
}

/// `F(z) = p(z, eᶻ)` and `F′(z) = p_x(z, eᶻ) + eᶻ·p_y(z, eᶻ)`.
struct ExpPolyFunction {
    p: BivariatePolynomial<Exact>,
    px: BivariatePolynomial<Exact>,
    py: BivariatePolynomial<Exact>,
    prec: u32,
}

impl ExpPolyFunction {
    fn new(p: &BivariatePolynomial<Exact>, prec: u32) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(ExpPolyFunction {
            p: p.clone(),
            px: p.partial_x()?,
            py: p.partial_y()?,
            prec,
        })
    }

    fn eval(&self, z: &CInterval) -> Result<CInterval> {
        let e = z.exp(self.prec);
        self.p.eval_cinterval(z, &e, self.prec)
    }

    fn derivative(&self, z: &CInterval) -> Result<CInterval> {
        let e = z.exp(self.prec);
        let a = self.px.eval_cinterval(z, &e, self.prec)?;
        let b = self.py.eval_cinterval(z, &e, self.prec)?;
        Ok(a.add(&e.mul(&b, self.prec), self.prec))
    }

    /// Change of argument of `F` from `a` to `b` along the segment.
    fn increment(&self, a: &(Dyadic, Dyadic), b: &(Dyadic, Dyadic), depth: u32) -> Result<Interval> {
        let seg = CInterval::new(
            Interval::new(Dyadic::min(&a.0, &b.0), Dyadic::max(&a.0, &b.0)),
            Interval::new(Dyadic::min(&a.1, &b.1), Dyadic::max(&a.1, &b.1)),
        );
        let enc = self.eval(&seg)?;
        let plane = if enc.re.is_positive() || enc.im.is_positive() || enc.im.is_negative() {
            Some(false)
        } else if enc.re.is_negative() {
            Some(true)
        } else {
            None
        };
        match plane {
            Some(flip) => {
                let fa = self.eval(&CInterval::point(a.0.clone(), a.1.clone()))?;
                let fb = self.eval(&CInterval::point(b.0.clone(), b.1.clone()))?;
                let arg = |v: &CInterval| {
                    let v = if flip { v.neg() } else { v.clone() };
                    v.arg(self.prec)
                        .ok_or_else(|| Error::precision(self.prec, "argument of a boundary value"))
                };
                Ok(arg(&fb)?.sub(&arg(&fa)?, self.prec))
            }
            None if depth >= MAX_SEGMENT_DEPTH => {
                let (re, im) = seg.mid();
                Err(Error::BoundaryZeroSuspected(format!(
                    "{} + {}i",
                    re.to_decimal_string(),
                    im.to_decimal_string()
                )))
            }
            None => {
                let m = (
                    (&a.0 + &b.0).shl(-1),
                    (&a.1 + &b.1).shl(-1),
                );
                let l = self.increment(a, &m, depth + 1)?;
                let r = self.increment(&m, b, depth + 1)?;
                Ok(l.add(&r, self.prec))
            }
        }
    }

    fn winding(&self, region: &Region) -> Result<u64> {
        let corners = [
            (region.re0.clone(), region.im0.clone()),
            (region.re1.clone(), region.im0.clone()),
            (region.re1.clone(), region.im1.clone()),
            (region.re0.clone(), region.im1.clone()),
        ];
        let sides = (0..4)
            .into_par_iter()
            .map(|k| self.increment(&corners[k], &corners[(k + 1) % 4], 0))
            .collect::<Result<Vec<_>>>()?;
        let total = sides
            .iter()
            .fold(Interval::zero(), |acc, s| acc.add(s, self.prec));
        let two_pi = Interval::pi(self.prec).shl(1);
        let turns = total
            .div(&two_pi, self.prec)
            .expect("2π is nonzero");
        let n = turns.mid().round_to_exp(0, crate::algnum::Round::Nearest).floor();
        let half = Dyadic::pow2(-1);
        if turns.rad() >= half || !turns.contains(&Dyadic::from_int(n.clone())) {
            return Err(Error::precision(self.prec, "winding number not isolated"));
        }
        u64::try_from(n).map_err(|_| Error::precision(self.prec, "negative winding number"))
    }

    /// Krawczyk operator `m − Y·F(m) + (1 − Y·F′(X))·(X − m)`.
    fn krawczyk(&self, x: &CInterval) -> Result<Option<CInterval>> {
        let prec = self.prec;
        let m = x.mid_point();
        let dm = self.derivative(&m)?;
        let Some(y) = dm.inv(prec).map(|v| v.mid_point()) else {
            return Ok(None);
        };
        let fm = self.eval(&m)?;
        let dx = self.derivative(x)?;
        let k = m
            .sub(&y.mul(&fm, prec), prec)
            .add(
                &CInterval::one()
                    .sub(&y.mul(&dx, prec), prec)
                    .mul(&x.sub(&m, prec), prec),
                prec,
            );
        Ok(strictly_inside(&k, x).then_some(k))
    }

    /// Newton iteration on midpoints, kept only if it stays in `cell`.
    fn newton_guess(&self, cell: &Region) -> Result<Option<CInterval>> {
        let b = cell.as_cinterval();
        let mut z = b.mid_point();
        for _ in 0..60 {
            let f = self.eval(&z)?.mid_point();
            let d = self.derivative(&z)?.mid_point();
            let Some(step) = f.div(&d, self.prec) else {
                return Ok(None);
            };
            let next = z.sub(&step.mid_point(), self.prec).mid_point().round(self.prec);
            if !b.contains_box(&next) {
                return Ok(None);
            }
            z = next;
        }
        Ok(Some(z))
    }

    /// A certified box inside `cell` holding a simple zero.
    fn certify(&self, cell: &Region) -> Result<Option<CInterval>> {
        let Some(z) = self.newton_guess(cell)? else {
            return Ok(None);
        };
        let b = cell.as_cinterval();
        let w = cell.width();
        for k in [30i64, 20, 12, 6] {
            let r = w.shl(-k);
            let x = CInterval::new(
                Interval::ball(&z.re.mid(), &r),
                Interval::ball(&z.im.mid(), &r),
            );
            if !b.contains_box(&x) {
                continue;
            }
            if let Some(mut k) = self.krawczyk(&x)? {
                for _ in 0..6 {
                    match self.krawczyk(&k)? {
                        Some(next) if next.max_width() < k.max_width() => k = next,
                        _ => break,
                    }
                }
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

fn strictly_inside(k: &CInterval, x: &CInterval) -> bool {
    k.re.lo() > x.re.lo() && k.re.hi() < x.re.hi() && k.im.lo() > x.im.lo() && k.im.hi() < x.im.hi()
}

/// Number of zeros of `p(z, eᶻ)` inside `region`, with multiplicity.
pub fn count_zeros(p: &BivariatePolynomial<Exact>, region: &Region, prec: u32) -> Result<u64> {
    ExpPolyFunction::new(p, prec)?.winding(region)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocatedZero {
    #[serde(rename = "box")]
    pub enclosure: BoxRecord,
    pub newton_certified: bool,
    /// Zeros in the box; above 1 only for unrefined cells.
    pub multiplicity: u64,
    #[serde(skip)]
    pub cinterval: Option<CInterval>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroReport {
    pub region: RegionRecord,
    pub winding_count: u64,
    pub zeros: Vec<LocatedZero>,
}

impl ZeroReport {
    pub fn certified_count(&self) -> usize {
        self.zeros.iter().filter(|z| z.newton_certified).count()
    }
}

/// Split fractions tried in turn when a cut passes too close to a zero.
fn cut_fractions() -> Vec<Dyadic> {
    [(1, 1), (7, 4), (9, 4), (3, 3), (5, 3), (13, 5), (19, 5)]
        .iter()
        .map(|&(m, e)| Dyadic::new(m.into(), -e))
        .collect()
}

fn subdivide(f: &ExpPolyFunction, cell: &Region, k: u64) -> Result<Vec<(Region, u64)>> {
    let mut last = None;
    for t in cut_fractions() {
        let parts = cell.quadrisect(&t);
        let counts: Result<Vec<u64>> = parts.par_iter().map(|c| f.winding(c)).collect();
        match counts {
            Ok(cs) if cs.iter().sum::<u64>() == k => {
                return Ok(parts.into_iter().zip(cs).filter(|(_, c)| *c > 0).collect())
            }
            Ok(_) => {
                last = Some(Error::precision(f.prec, "subcell counts do not add up"));
            }
            Err(e @ Error::BoundaryZeroSuspected(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one fraction"))
}

fn locate_cell(f: &ExpPolyFunction, cell: Region, k: u64) -> Result<Vec<LocatedZero>> {
    let unrefined = |cell: &Region, k| {
        let b = cell.as_cinterval();
        LocatedZero {
            enclosure: ComplexBox::from_cinterval(&b).to_record(),
            newton_certified: false,
            multiplicity: k,
            cinterval: Some(b),
        }
    };
    if k == 1 {
        if let Some(b) = f.certify(&cell)? {
            return Ok(vec![LocatedZero {
                enclosure: ComplexBox::from_cinterval(&b).to_record(),
                newton_certified: true,
                multiplicity: 1,
                cinterval: Some(b),
            }]);
        }
    }
    if cell.width() < Dyadic::pow2(-MIN_CELL_EXP) {
        return Ok(vec![unrefined(&cell, k)]);
    }
    let parts = match subdivide(f, &cell, k) {
        Ok(p) => p,
        Err(Error::BoundaryZeroSuspected(_)) => return Ok(vec![unrefined(&cell, k)]),
        Err(e) => return Err(e),
    };
    let nested = parts
        .into_par_iter()
        .map(|(c, n)| locate_cell(f, c, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Count the zeros in `region`, then isolate and certify each.
pub fn locate_zeros(p: &BivariatePolynomial<Exact>, region: &Region, prec: u32) -> Result<ZeroReport> {
    let f = ExpPolyFunction::new(p, prec)?;
    let total = f.winding(region)?;
    let mut zeros = if total == 0 {
        Vec::new()
    } else {
        locate_cell(&f, region.clone(), total)?
    };
    zeros.sort_by(|a, b| {
        let ka = a.cinterval.as_ref().map(|c| c.mid());
        let kb = b.cinterval.as_ref().map(|c| c.mid());
        ka.cmp(&kb)
    });
    Ok(ZeroReport {
        region: region.to_record(),
        winding_count: total,
        zeros,
    })
}

/// Zero counts on the nested squares `[-r, r]²`.
pub fn density_report(p: &BivariatePolynomial<Exact>, radii: &[Dyadic], prec: u32) -> Result<Vec<u64>> {
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii.first().is_some_and(|r| !r.is_positive()) {
        return Err(Error::invalid("radii must be positive and increasing"));
    }
    let f = ExpPolyFunction::new(p, prec)?;
    radii
        .par_iter()
        .map(|r| f.winding(&Region::square(r)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[((u32, u32), i64)]) -> BivariatePolynomial<Exact> {
        BivariatePolynomial::from_terms(terms.iter().map(|&(e, c)| (e, Exact::int(c)))).unwrap()
    }

    #[test]
    fn exp_minus_one() {
        let p = poly(&[((0, 1), 1), ((0, 0), -1)]);
        assert_eq!(count_zeros(&p, &Region::from_f64(-7.0, -7.0, 7.0, 7.0).unwrap(), 64).unwrap(), 3);
        let radii: Vec<Dyadic> = [1, 7, 13].iter().map(|&r| Dyadic::from_int(r)).collect();
        assert_eq!(density_report(&p, &radii, 64).unwrap(), vec![1, 3, 5]);
    }

    #[test]
    fn identity_has_one_zero() {
        let p = poly(&[((1, 0), 1)]);
        assert_eq!(count_zeros(&p, &Region::from_f64(-1.0, -0.5, 2.0, 3.0).unwrap(), 64).unwrap(), 1);
    }

    #[test]
    fn boundary_zero_is_reported() {
        let p = poly(&[((1, 0), 1)]);
        let r = Region::from_f64(0.0, -1.0, 1.0, 1.0).unwrap();
        assert!(matches!(count_zeros(&p, &r, 64), Err(Error::BoundaryZeroSuspected(_))));
    }

    #[test]
    fn real_zero_of_square_minus_exp() {
        let p = poly(&[((2, 0), 1), ((0, 1), -1)]);
        let rep = locate_zeros(&p, &Region::from_f64(-1.0, -1.0, 1.0, 1.0).unwrap(), 64).unwrap();
        assert_eq!(rep.winding_count, 1);
        assert_eq!(rep.certified_count(), 1);
        let c = rep.zeros[0].cinterval.as_ref().unwrap();
        assert!((c.re.mid().to_f64() + 0.703467).abs() < 1e-6);
        assert!(c.im.mid().to_f64().abs() < 1e-9);
    }

    #[test]
    fn exp_minus_identity() {
        let p = poly(&[((0, 1), 1), ((1, 0), -1)]);
        let rep = locate_zeros(&p, &Region::from_f64(-4.0, -4.0, 4.0, 4.0).unwrap(), 64).unwrap();
        assert_eq!(rep.winding_count, 2);
        assert_eq!(rep.certified_count(), 2);
        for z in &rep.zeros {
            let c = z.cinterval.as_ref().unwrap();
            assert!((c.re.mid().to_f64() - 0.318132).abs() < 1e-5);
            assert!((c.im.mid().to_f64().abs() - 1.337236).abs() < 1e-5);
        }
    }
}
