//! Integer-relation screening by lattice reduction, with exact confirmation
//! for logarithms of algebraic numbers and rational multiples of `2πi`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algnum::{CInterval, ComplexBox, Dyadic, Enclose, Exact, Interval, Ring, Round};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    NumericOnly,
    ExactlyVerified,
}

#[derive(Clone, Debug)]
pub struct RelationCandidate {
    pub coefficients: Vec<BigInt>,
    /// Enclosure of `|Σ mᵢ·zᵢ|`.
    pub residual: Interval,
    pub status: RelationStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationRecord {
    pub coefficients: Vec<String>,
    pub residual_upper: String,
    pub status: RelationStatus,
}

impl RelationCandidate {
    pub fn to_record(&self) -> RelationRecord {
        RelationRecord {
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
            residual_upper: self.residual.hi().to_decimal_string(),
            status: self.status,
        }
    }
}

/// A value whose ℚ-linear relations can be confirmed symbolically.
#[derive(Clone, Debug)]
pub enum SymbolicValue {
    /// `log|λ| + i·(Arg λ + 2πk)`.
    Log { lambda: Exact, branch: i64 },
    /// `r·2πi`.
    TwoPiI(BigRational),
    /// Known only through an enclosure.
    Opaque(ComplexBox),
}

impl SymbolicValue {
    pub fn enclose(&self, prec: u32) -> Result<CInterval> {
        match self {
            SymbolicValue::Log { lambda, branch } => {
                let l = principal_log(lambda, prec)?;
                let turn = CInterval::two_pi_i(prec + 8).mul(&CInterval::from_int(*branch), prec);
                Ok(l.add(&turn, prec))
            }
            SymbolicValue::TwoPiI(r) => {
                Ok(CInterval::two_pi_i(prec + 8).mul(&CInterval::from_rational(r, prec + 8), prec))
            }
            SymbolicValue::Opaque(b) => Ok(b.to_cinterval()),
        }
    }
}

/// Principal logarithm of a nonzero exact value. Real values get a point
/// imaginary part so the negative axis is handled.
pub fn principal_log(lambda: &Exact, prec: u32) -> Result<CInterval> {
    let wp = prec + 16;
    let real = match lambda {
        Exact::Rational(_) => true,
        Exact::Algebraic(a) => a.isolating_box().is_real(),
    };
    if Ring::is_zero(lambda) {
        return Err(Error::invalid("log of zero"));
    }
    let mut z = lambda.enclose(wp)?;
    if real {
        z = CInterval::real(z.re.clone());
    }
    z.log(prec)
        .ok_or_else(|| Error::precision(prec, "log enclosure meets zero or the branch cut"))
}

/// Screen `values` for integer relations with `|m|∞ ≤ coeff_bound`.
///
/// Reduces the lattice spanned by `eᵢ ‖ S·Re zᵢ ‖ S·Im zᵢ` with `S = 2^prec`.
/// Results are numeric evidence only; completeness is not claimed.
pub fn find_integer_relations(
    values: &[ComplexBox],
    coeff_bound: &BigInt,
    prec: u32,
) -> Result<Vec<RelationCandidate>> {
    if coeff_bound < &BigInt::one() {
        return Err(Error::invalid("coeff_bound must be at least 1"));
    }
    let n = values.len();
    let limit = Dyadic::pow2(-((prec / 2) as i64));
    for v in values {
        if v.radius > limit {
            return Err(Error::precision(prec, "relation screening: input boxes too wide"));
        }
    }
    let scaled = |d: &Dyadic| -> BigInt { d.shl(prec as i64).round_to_exp(0, Round::Nearest).floor() };
    let mut basis: Vec<Vec<BigInt>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = vec![BigInt::zero(); n + 2];
            row[i] = BigInt::one();
            row[n] = scaled(&v.center_re);
            row[n + 1] = scaled(&v.center_im);
            row
        })
        .collect();
    lll_reduce(&mut basis);

    let boxes: Vec<CInterval> = values.iter().map(|v| v.to_cinterval()).collect();
    let mut out: Vec<RelationCandidate> = Vec::new();
    for row in &basis {
        let m: Vec<BigInt> = normalize_sign(&row[..n]);
        if m.iter().all(|x| x.is_zero()) || m.iter().any(|x| x.abs() > *coeff_bound) {
            continue;
        }
        let s = boxes.iter().zip(&m).fold(CInterval::zero(), |acc, (z, k)| {
            acc.add(&z.mul(&CInterval::from_int(k.clone()), prec), prec)
        });
        if !s.contains_zero() {
            continue;
        }
        if out.iter().any(|c| c.coefficients == m) {
            continue;
        }
        out.push(RelationCandidate {
            coefficients: m,
            residual: s.abs(prec),
            status: RelationStatus::NumericOnly,
        });
    }
    Ok(out)
}

/// Screen symbolic values and confirm each candidate exactly where possible.
pub fn find_verified_relations(
    values: &[SymbolicValue],
    coeff_bound: &BigInt,
    prec: u32,
) -> Result<Vec<RelationCandidate>> {
    let boxes: Vec<ComplexBox> = values
        .iter()
        .map(|v| Ok(ComplexBox::from_cinterval(&v.enclose(prec + 32)?)))
        .collect::<Result<_>>()?;
    let mut cands = find_integer_relations(&boxes, coeff_bound, prec)?;
    for c in cands.iter_mut() {
        if verify_relation(values, &c.coefficients, prec)? {
            c.status = RelationStatus::ExactlyVerified;
        }
    }
    Ok(cands)
}

/// Exact check of `Σ mᵢ·zᵢ = 0`.
///
/// Logs contribute `∏ λᵢ^{mᵢ} = 1` (exact), after which `Σ mᵢ Log λᵢ` is a
/// known integer multiple `N` of `2πi`, pinned by an enclosure of width < 1.
/// The relation holds iff `N + Σ mᵢkᵢ + Σ mⱼrⱼ = 0`.
pub fn verify_relation(values: &[SymbolicValue], m: &[BigInt], prec: u32) -> Result<bool> {
    let mut product = Exact::int(1);
    let mut turns = BigRational::zero();
    let mut args = Interval::zero();
    let two_pi = Interval::pi(prec + 8).shl(1);
    for (v, k) in values.iter().zip(m) {
        if k.is_zero() {
            continue;
        }
        let kq = BigRational::from_integer(k.clone());
        match v {
            SymbolicValue::Opaque(_) => return Ok(false),
            SymbolicValue::TwoPiI(r) => turns += &kq * r,
            SymbolicValue::Log { lambda, branch } => {
                let e = k
                    .to_i64()
                    .ok_or_else(|| Error::invalid("relation coefficient too large"))?;
                product = product.mul(&lambda.powi(e)?)?;
                turns += &kq * BigRational::from_integer((*branch).into());
                let arg = principal_log(lambda, prec)?.im;
                let a = arg
                    .div(&two_pi, prec)
                    .ok_or_else(|| Error::precision(prec, "2π enclosure"))?;
                args = args.add(&a.mul(&Interval::from_int(k.clone()), prec), prec);
            }
        }
    }
    if !product.is_one() {
        return Ok(false);
    }
    let lo = args.lo().ceil();
    let hi = args.hi().floor();
    if lo != hi {
        return Err(Error::precision(prec, "winding count of a relation not pinned"));
    }
    Ok((BigRational::from_integer(lo) + turns).is_zero())
}

fn normalize_sign(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    v.iter()
        .map(|x| if neg { -(x / &g) } else { x / &g })
        .collect()
}

#[cfg(test)]
fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_half(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num = q.numer() * &two + q.denom();
    num.div_floor(&(q.denom() * &two))
}

/// LLL reduction with `δ = 3/4` on linearly independent integer rows.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let (mut mu, mut bb) = gram_schmidt(b);
    let mut k = 1;
    while k < n {
        for l in (0..k).rev() {
            if mu[k][l].abs() > half {
                let r = round_half(&mu[k][l]);
                let bl = b[l].clone();
                for (x, y) in b[k].iter_mut().zip(&bl) {
                    *x -= &r * y;
                }
                let rq = BigRational::from_integer(r);
                for j in 0..l {
                    let d = &rq * &mu[l][j];
                    mu[k][j] -= d;
                }
                mu[k][l] -= &rq;
            }
        }
        let lhs = &bb[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bb[k - 1];
        if *lhs >= rhs {
            k += 1;
            continue;
        }
        // Swap rows k−1 and k and update the Gram–Schmidt data.
        let m = mu[k][k - 1].clone();
        let new_b = &bb[k] + &m * &m * &bb[k - 1];
        if new_b.is_zero() {
            k += 1;
            continue;
        }
        mu[k][k - 1] = &m * &bb[k - 1] / &new_b;
        bb[k] = &bb[k - 1] * &bb[k] / &new_b;
        bb[k - 1] = new_b;
        b.swap(k - 1, k);
        for j in 0..k - 1 {
            let t = mu[k][j].clone();
            mu[k][j] = mu[k - 1][j].clone();
            mu[k - 1][j] = t;
        }
        for i in k + 1..n {
            let t = mu[i][k].clone();
            mu[i][k] = &mu[i][k - 1] - &m * &t;
            mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
        }
        k = (k - 1).max(1);
    }
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bb = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut v = bi.clone();
        for j in 0..i {
            let num: BigRational = bi.iter().zip(&star[j]).map(|(x, y)| x * y).sum();
            let c = if bb[j] == BigRational::zero() {
                BigRational::zero()
            } else {
                num / &bb[j]
            };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &c * y;
            }
            mu[i][j] = c;
        }
        bb.push(v.iter().map(|x| x * x).sum::<BigRational>());
        star.push(v);
    }
    (mu, bb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::AlgebraicNumber;
    use crate::algnum::IntPolynomial;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn log_of(n: i64) -> SymbolicValue {
        SymbolicValue::Log {
            lambda: Exact::int(n),
            branch: 0,
        }
    }

    #[test]
    fn log2_log4() {
        let r = find_verified_relations(&[log_of(2), log_of(4)], &BigInt::from(1000), 128).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].coefficients, vec![BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(r[0].status, RelationStatus::ExactlyVerified);
    }

    #[test]
    fn two_pi_i_and_pi_i() {
        let vals = [SymbolicValue::TwoPiI(q(1)), SymbolicValue::TwoPiI(BigRational::new(1.into(), 2.into()))];
        let r = find_verified_relations(&vals, &BigInt::from(10), 128).unwrap();
        assert_eq!(r[0].coefficients, vec![BigInt::from(1), BigInt::from(-2)]);
        assert_eq!(r[0].status, RelationStatus::ExactlyVerified);
    }

    #[test]
    fn one_and_sqrt2_have_no_small_relation() {
        let s2 = AlgebraicNumber::from_poly_and_approx(
            &IntPolynomial::from_i64(&[-2, 0, 1]),
            &ComplexBox::new(Dyadic::from_f64(1.414), Dyadic::zero(), Dyadic::from_f64(0.01)),
        ).unwrap();
        let b = s2.enclosure_bits(300).unwrap();
        let vals = [ComplexBox::from_int(1), ComplexBox::from_cinterval(&b)];
        let r = find_integer_relations(&vals, &BigInt::from(1000), 256).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn log_of_minus_one_is_half_turn() {
        // log(−1) = πi, so 2·log(−1) − 2πi = 0 exactly
        let vals = [log_of(-1), SymbolicValue::TwoPiI(q(1))];
        assert!(verify_relation(&vals, &[2.into(), (-1).into()], 128).unwrap());
        assert!(!verify_relation(&vals, &[2.into(), 1.into()], 128).unwrap());
    }

    #[test]
    fn lll_finds_short_vector() {
        let mut b = vec![
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(31416)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(10000)],
        ];
        lll_reduce(&mut b);
        let norms: Vec<BigInt> = b.iter().map(|r| dot(r, r)).collect();
        assert!(norms.iter().min().unwrap() < &BigInt::from(100_000_000));
    }
}
