//! One pass/fail line per acceptance criterion, with pinned tolerances and
//! wall-clock budgets. Oracles are computed here, independently of the
//! library routes they check.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pexp_core::algnum::{
    AlgebraicNumber, BivariatePolynomial, CInterval, Dyadic, Exact, IntPolynomial, MPoly, Ring,
};
use pexp_core::analytic::{density_report, locate_zeros, Region};
use pexp_core::finite::{compute_bound, run_pipeline, BoundInputs, Verdict};
use pexp_core::height::{exact_height, mahler_measure, rational_height};
use pexp_core::mullattice::{a3_constant, brute_force_a3, power_product};
use pexp_core::problem::parse_problem;
use pexp_core::reduce::{
    classify_degeneracy, clear_denominators, expand_exponential_sum, rescale_denominator,
    specialize_formal, split_two_pi_i, Degeneracy, ExpPolyEquation, FormalCoefficient, LogElement,
};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn f(d: &Dyadic) -> f64 {
    d.to_f64()
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

// ---------------------------------------------------------------- oracles

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64(f64, f64);

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C64) -> C64 {
        C64(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C64) -> C64 {
        C64(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.0 * o.0 + o.1 * o.1;
        C64((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
    fn exp(self) -> C64 {
        let r = self.0.exp();
        C64(r * self.1.cos(), r * self.1.sin())
    }
    fn ln(self) -> C64 {
        C64(self.abs().ln(), self.1.atan2(self.0))
    }
}

/// Roots of an integer polynomial (constant term first) by Durand–Kerner.
fn numeric_roots(coeffs: &[f64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lc).collect();
    let eval = |z: C64| {
        let mut acc = C64(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc.mul(z).add(C64(*c, 0.0));
        }
        acc
    };
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            C64(0.9 * t.cos(), 0.9 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let prev = z.clone();
        for i in 0..n {
            let mut den = C64(1.0, 0.0);
            for (j, zj) in prev.iter().enumerate() {
                if j != i {
                    den = den.mul(z[i].sub(*zj));
                }
            }
            z[i] = z[i].sub(eval(z[i]).div(den));
        }
    }
    z
}

fn numeric_mahler(coeffs: &[f64]) -> f64 {
    let lc = coeffs.last().unwrap().abs();
    numeric_roots(coeffs).iter().fold(lc, |m, r| m * r.abs().max(1.0))
}

/// Branch `k` of Lambert W at `w` by Newton from the asymptotic guess.
fn lambert_w(k: i64, w: C64) -> C64 {
    let l1 = w.ln().add(C64(0.0, 2.0 * std::f64::consts::PI * k as f64));
    let mut z = l1.sub(l1.ln());
    for _ in 0..100 {
        let e = z.exp();
        let fz = z.mul(e).sub(w);
        let dz = e.mul(z.add(C64(1.0, 0.0)));
        z = z.sub(fz.div(dz));
    }
    z
}

// ------------------------------------------------------------- criterion 1

fn c1_height_units() -> Outcome {
    let tol = 1e-12;
    for n in 2..=50i64 {
        for s in [n, -n] {
            let i = rational_height(&q(s, 1), 128).map_err(|e| e.to_string())?;
            let w = f(&i.width());
            check(w <= tol, || format!("h({s}) width {w:e}"))?;
            let oracle = (n as f64).ln();
            let mid = f(&i.mid());
            check((mid - oracle).abs() <= tol, || format!("h({s}) = {mid} vs log {n} = {oracle}"))?;
        }
    }
    Ok("h(±n) = log n for 2 ≤ n ≤ 50, width ≤ 1e-12".into())
}

// ------------------------------------------------------------- criterion 2

fn c2_mahler() -> Outcome {
    let tol = 1e-6;
    let cases: [(&str, Vec<i64>, f64); 2] = [
        ("x² − x − 1", vec![-1, -1, 1], 1.618034),
        ("Lehmer", vec![1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], 1.176281),
    ];
    let mut detail = Vec::new();
    for (name, c, stated) in cases {
        let p = IntPolynomial::new(c.iter().map(|&k| BigInt::from(k)).collect());
        let m = mahler_measure(&p, 128).map_err(|e| e.to_string())?;
        let oracle = numeric_mahler(&c.iter().map(|&k| k as f64).collect::<Vec<_>>());
        let (lo, hi) = (f(m.lo()), f(m.hi()));
        check(lo - tol <= oracle && oracle <= hi + tol, || {
            format!("{name}: [{lo}, {hi}] misses oracle {oracle}")
        })?;
        check((m.mid().to_f64() - stated).abs() <= tol, || {
            format!("{name}: {} vs {stated}", m.mid().to_f64())
        })?;
        detail.push(format!("M({name}) ≈ {:.7}", m.mid().to_f64()));
    }
    Ok(detail.join(", "))
}

// ------------------------------------------------------------- criterion 3

fn c3_a3() -> Outcome {
    let gamma = [q(2, 1), q(3, 1)];
    let b = a3_constant(&gamma, 128).map_err(|e| e.to_string())?;
    let a3 = b.lower.clone();
    let (l2, l3) = (2f64.ln(), 3f64.ln());
    let oracle = l2 * l3 / (l2 + l3);
    check(oracle - 1e-3 <= f(&a3) && f(&a3) <= oracle + 1e-12, || {
        format!("a3 = {} outside [{}, {oracle}]", f(&a3), oracle - 1e-3)
    })?;
    let mut checked = 0;
    for a in -12i64..=12 {
        for c in -12i64..=12 {
            let l1 = a.abs() + c.abs();
            if l1 == 0 || l1 > 12 {
                continue;
            }
            let g = power_product(&gamma, &[a.into(), c.into()]);
            let h = rational_height(&g, 128).map_err(|e| e.to_string())?;
            let rhs = &a3 * &Dyadic::from_int(l1);
            check(h.lo() >= &rhs, || format!("h(2^{a}·3^{c}) < a3·{l1}"))?;
            checked += 1;
        }
    }
    let bf = brute_force_a3(&gamma, 50, 128).map_err(|e| e.to_string())?;
    let gap = (f(&bf.mid()) - f(&a3)).abs();
    check(gap <= 1e-3, || format!("brute force {} vs a3 {}", f(&bf.mid()), f(&a3)))?;
    Ok(format!(
        "a3 ≥ {:.7} (oracle {oracle:.7}), sound on {checked} vectors, brute force gap {gap:.1e}",
        f(&a3)
    ))
}

// ------------------------------------------------------------- criterion 4

fn random_value(rng: &mut ChaCha8Rng, roots: &[Exact]) -> Exact {
    let r = |rng: &mut ChaCha8Rng| {
        let mut n = rng.gen_range(-30i64..=30);
        if n == 0 {
            n = 1;
        }
        Exact::rational(n, rng.gen_range(1i64..=30))
    };
    if rng.gen_bool(0.5) {
        r(rng)
    } else {
        let s = &roots[rng.gen_range(0..roots.len())];
        r(rng).add(&r(rng).mul(s).unwrap()).unwrap()
    }
}

fn c4_height_inequalities() -> Outcome {
    let prec = 96;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let roots: Vec<Exact> = [2i64, 3, 5, -1, -3]
        .iter()
        .map(|&d| {
            let p = IntPolynomial::new(vec![BigInt::from(-d), BigInt::zero(), BigInt::one()]);
            Exact::from_algebraic(AlgebraicNumber::roots_of(&p).unwrap().remove(0))
        })
        .collect();
    let h = |x: &Exact| exact_height(x, prec).map_err(|e| e.to_string());
    let ln2 = std::f64::consts::LN_2;
    for case in 0..200 {
        let a = random_value(&mut rng, &roots);
        let b = random_value(&mut rng, &roots);
        let (ha, hb) = (h(&a)?, h(&b)?);
        let sum_hi = f(ha.hi()) + f(hb.hi());
        let hab = h(&a.mul(&b).map_err(|e| e.to_string())?)?;
        check(f(hab.lo()) <= sum_hi + 1e-12, || format!("case {case}: h(ab) > h(a) + h(b)"))?;
        let s = a.add(&b).map_err(|e| e.to_string())?;
        if !s.is_zero() {
            let hs = h(&s)?;
            check(f(hs.lo()) <= sum_hi + ln2 + 1e-12, || {
                format!("case {case}: h(a+b) > h(a) + h(b) + log 2")
            })?;
        }
        let k = [-3i64, -2, 2, 3][case % 4];
        let hk = h(&a.powi(k).map_err(|e| e.to_string())?)?;
        let scaled = ha.mul_int(k.abs(), prec);
        check(hk.intersects(&scaled), || format!("case {case}: h(a^{k}) ≠ {k}·h(a)"))?;
        let hi = h(&a.inv().map_err(|e| e.to_string())?)?;
        check(hi.intersects(&ha), || format!("case {case}: h(1/a) ≠ h(a)"))?;
    }
    Ok("200 random pairs satisfy all four relations".into())
}

// ------------------------------------------------------------- criterion 5

fn exact_poly(terms: &[((u32, u32), i64)]) -> BivariatePolynomial<Exact> {
    BivariatePolynomial::from_terms(terms.iter().map(|&(e, c)| (e, Exact::int(c)))).unwrap()
}

fn located_centres(p: &BivariatePolynomial<Exact>, half: i64) -> Result<Vec<(C64, f64)>, String> {
    let r = Region::square(&Dyadic::from_int(half)).map_err(|e| e.to_string())?;
    let rep = locate_zeros(p, &r, 128).map_err(|e| e.to_string())?;
    check(rep.certified_count() == rep.zeros.len(), || "uncertified zero".into())?;
    Ok(rep
        .zeros
        .iter()
        .map(|z| {
            let b = &z.enclosure;
            let re: f64 = b.re.parse().unwrap();
            let im: f64 = b.im.parse().unwrap();
            let rad: f64 = b.rad.parse().unwrap();
            (C64(re, im), rad)
        })
        .collect())
}

fn matches_oracle(found: &[(C64, f64)], oracle: &[C64], tol: f64) -> Result<(), String> {
    check(found.len() == oracle.len(), || format!("{} zeros, oracle {}", found.len(), oracle.len()))?;
    for o in oracle {
        let best = found.iter().map(|(c, r)| c.sub(*o).abs() + r).fold(f64::MAX, f64::min);
        check(best <= tol, || format!("oracle zero {o:?} missed by {best:e}"))?;
    }
    Ok(())
}

fn c5_zero_counting() -> Outcome {
    let tol = 1e-8;
    let e_minus_z = exact_poly(&[((0, 1), 1), ((1, 0), -1)]);
    let counts = density_report(&e_minus_z, &[Dyadic::from_int(4), Dyadic::from_int(9)], 128)
        .map_err(|e| e.to_string())?;
    check(counts == vec![2, 4], || format!("y − x counts {counts:?}"))?;
    // e^z = z  ⇔  z = −W_k(−1).
    let oracle: Vec<C64> = [0i64, -1]
        .iter()
        .map(|&k| {
            let w = lambert_w(k, C64(-1.0, 0.0));
            C64(-w.0, -w.1)
        })
        .collect();
    matches_oracle(&located_centres(&e_minus_z, 4)?, &oracle, tol)?;

    let e_minus_one = exact_poly(&[((0, 1), 1), ((0, 0), -1)]);
    let radii: Vec<Dyadic> = [1, 7, 13].iter().map(|&r| Dyadic::from_int(r)).collect();
    let counts = density_report(&e_minus_one, &radii, 128).map_err(|e| e.to_string())?;
    check(counts == vec![1, 3, 5], || format!("y − 1 counts {counts:?}"))?;
    let tau = 2.0 * std::f64::consts::PI;
    let oracle: Vec<C64> = (-1..=1).map(|k| C64(0.0, tau * k as f64)).collect();
    matches_oracle(&located_centres(&e_minus_one, 7)?, &oracle, tol)?;
    Ok("y − x: (2, 4); y − 1: (1, 3, 5); zeros within 1e-8".into())
}

// ------------------------------------------------------------- criterion 6

/// Integers `n` with `8n = 3·2ⁿ`, by exact arithmetic on `|n| ≤ 64`.
fn tau38_oracle() -> Vec<i64> {
    (-64i64..=64)
        .filter(|&n| {
            let lhs = BigInt::from(8 * n);
            if n >= 0 {
                lhs == BigInt::from(3) << n as usize
            } else {
                lhs << (-n) as usize == BigInt::from(3)
            }
        })
        .collect()
}

fn c6_pipeline() -> Outcome {
    let problem = parse_problem(fixture("tau38.expf")).map_err(|e| e.to_string())?;
    let cert = run_pipeline(&problem).map_err(|e| e.to_string())?;
    check(cert.verdict == Verdict::Finite, || format!("verdict {:?}", cert.verdict))?;
    let oracle = tau38_oracle();
    let verified: Vec<i64> = cert.verified().iter().map(|v| v[0].to_i64().unwrap()).collect();
    check(verified == oracle, || format!("verified {verified:?}, oracle {oracle:?}"))?;
    check(cert.solutions.len() == 1, || format!("{} solutions", cert.solutions.len()))?;
    check(!cert.has_probable(), || "probable statuses present".into())?;
    check(oracle.iter().all(|n| n.unsigned_abs() <= cert.bound_b), || "solution outside B".into())?;
    Ok(format!("B = {}, unique exactly verified n = 3", cert.bound_b))
}

// ------------------------------------------------------------- criterion 7

const SCAN_PREC: u32 = 192;

fn window(d: usize, r: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |k| {
                    let mut w = v.clone();
                    w.push(BigInt::from(k));
                    w
                })
            })
            .collect();
    }
    out
}

/// Direct interval scan of `p(x, e^x)` at `x = Σ r_k·b_k` for rational `r`.
fn scan_zero(eq: &ExpPolyEquation, r: &[BigRational]) -> Result<bool, String> {
    let prec = SCAN_PREC;
    let syms = eq.enclose_symbols(prec + 32).map_err(|e| e.to_string())?;
    let mut x = CInterval::zero();
    for (rk, b) in r.iter().zip(&eq.basis) {
        let bk = b.enclose(&syms, prec + 32).map_err(|e| e.to_string())?;
        x = x.add(&bk.mul(&CInterval::from_rational(rk, prec + 32), prec + 32), prec + 32);
    }
    let y = x.exp(prec + 32);
    let coeff = |c: &FormalCoefficient| c.enclose(&syms, prec + 32);
    let v = eq.p.eval_cinterval_with(&x, &y, &coeff, prec).map_err(|e| e.to_string())?;
    Ok(v.contains_zero())
}

fn ints_to_q(n: &[BigInt]) -> Vec<BigRational> {
    n.iter().map(|k| BigRational::from_integer(k.clone())).collect()
}

fn formal(coeff: i64, powers: &[(&str, u32)]) -> FormalCoefficient {
    FormalCoefficient::from_poly(MPoly::monomial(powers, Exact::int(coeff)))
}

fn equation(terms: Vec<((u32, u32), FormalCoefficient)>, basis: Vec<LogElement>) -> ExpPolyEquation {
    let p = BivariatePolynomial::from_terms(terms).unwrap();
    ExpPolyEquation::new(p, basis, BTreeMap::new(), true).unwrap()
}

fn log_of(n: i64) -> LogElement {
    LogElement::log_of_rational(q(n, 1), 0).unwrap()
}

fn c7_reductions() -> Outcome {
    let r = 8;
    let one = || formal(1, &[]);
    let rescale_cases = [
        (
            equation(vec![((0, 2), one()), ((0, 0), formal(-2, &[]))], vec![log_of(2)]),
            2u64,
        ),
        (
            equation(vec![((1, 0), one()), ((0, 1), formal(-1, &[("log(2)", 1)]).mul(&FormalCoefficient::exact(Exact::rational(3, 8))).unwrap())], vec![log_of(2)]),
            3,
        ),
        (
            equation(vec![((0, 1), one()), ((0, 0), formal(-4, &[]))], vec![log_of(2), log_of(3)]),
            2,
        ),
    ];
    let mut solutions = 0;
    for (k, (eq, n)) in rescale_cases.iter().enumerate() {
        let resc = rescale_denominator(eq, *n).map_err(|e| e.to_string())?;
        let nq = BigRational::from_integer(BigInt::from(*n));
        for m in window(eq.dim(), r) {
            let orig: Vec<BigRational> = ints_to_q(&m).iter().map(|x| x / &nq).collect();
            let a = scan_zero(eq, &orig)?;
            let b = scan_zero(&resc, &ints_to_q(&m))?;
            check(a == b, || format!("rescale case {k} differs at {m:?}"))?;
            solutions += a as usize;
        }
    }
    let tpi = |n: i64| LogElement::two_pi_i_over(n);
    let split_cases = [
        equation(vec![((1, 0), one()), ((0, 1), formal(-1, &[("two_pi_i", 1)]))], vec![tpi(1), log_of(2)]),
        equation(vec![((0, 1), one()), ((0, 0), formal(-1, &[]))], vec![tpi(4), log_of(2)]),
        equation(vec![((0, 2), one()), ((0, 0), one())], vec![tpi(4), log_of(3)]),
    ];
    for (k, eq) in split_cases.iter().enumerate() {
        let parts = split_two_pi_i(eq).map_err(|e| e.to_string())?;
        let big_n = BigInt::from(parts.len());
        for n in window(eq.dim(), r) {
            let a = scan_zero(eq, &ints_to_q(&n))?;
            let (qt, s) = n[0].div_mod_floor(&big_n);
            let mut m = n.clone();
            m[0] = qt;
            let b = scan_zero(&parts[s.to_usize().unwrap()], &ints_to_q(&m))?;
            check(a == b, || format!("split case {k} differs at {n:?}"))?;
            solutions += a as usize;
        }
    }
    Ok(format!("6 fixtures agree on |n|∞ ≤ {r} ({solutions} solution points)"))
}

// ------------------------------------------------------------- criterion 8

/// A subsum as a polynomial in L = log 2 with rational coefficients.
type LPoly = Vec<BigRational>;

fn lpoly_add(a: &mut LPoly, b: &LPoly) {
    if a.len() < b.len() {
        a.resize(b.len(), BigRational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

fn c8_degeneracy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut degenerate = 0;
    for case in 0..20 {
        let s = rng.gen_range(2usize..=6);
        let mut levels: Vec<u32> = (0..7).collect();
        while levels.len() > s {
            levels.remove(rng.gen_range(0..levels.len()));
        }
        let n: i64 = rng.gen_range(-2..=2);
        // q_level(x) = c0 + c1·x with rational c0, c1.
        let mut qs: Vec<(BigRational, BigRational)> = levels
            .iter()
            .map(|_| {
                let mut c0 = rng.gen_range(-5i64..=5);
                if c0 == 0 {
                    c0 = 1;
                }
                (q(c0, 1), q(rng.gen_range(-3i64..=3), 1))
            })
            .collect();
        if rng.gen_bool(0.6) {
            let i = rng.gen_range(0..s);
            let mut j = rng.gen_range(0..s);
            while j == i {
                j = rng.gen_range(0..s);
            }
            let f = -pow2(n * (levels[i] as i64 - levels[j] as i64));
            qs[j] = (&qs[i].0 * &f, &qs[i].1 * &f);
        }
        let terms: Vec<((u32, u32), FormalCoefficient)> = levels
            .iter()
            .zip(&qs)
            .flat_map(|(&l, (c0, c1))| {
                [((0, l), c0.clone()), ((1, l), c1.clone())]
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (e, FormalCoefficient::exact(Exact::Rational(c))))
            })
            .collect();
        let eq = equation(terms, vec![log_of(2)]);
        let sum = expand_exponential_sum(&eq).map_err(|e| e.to_string())?;
        let sum_levels: Vec<u32> = sum.terms.iter().map(|t| t.0).collect();
        check(sum_levels == levels, || format!("case {case}: levels {sum_levels:?}"))?;
        // Term at level l: (c0 + c1·n·L)·2^{n·l}.
        let term_polys: Vec<LPoly> = levels
            .iter()
            .zip(&qs)
            .map(|(&l, (c0, c1))| {
                let w = pow2(n * l as i64);
                vec![c0 * &w, c1 * &w * BigRational::from_integer(n.into())]
            })
            .collect();
        let mut masks: Vec<u32> = (1..(1u32 << s) - 1).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let oracle = masks.iter().find_map(|&m| {
            let mut acc: LPoly = Vec::new();
            for (i, t) in term_polys.iter().enumerate() {
                if m >> i & 1 == 1 {
                    lpoly_add(&mut acc, t);
                }
            }
            acc.iter().all(|c| c.is_zero()).then(|| {
                (0..s).filter(|i| m >> i & 1 == 1).map(|i| levels[i]).collect::<Vec<u32>>()
            })
        });
        let got = classify_degeneracy(&sum, &[BigInt::from(n)], 128).map_err(|e| e.to_string())?;
        let expected = match oracle {
            Some(l) => {
                degenerate += 1;
                Degeneracy::Degenerate(l)
            }
            None => Degeneracy::ProbablyNonDegenerate,
        };
        check(got == expected, || format!("case {case}: {got:?} vs oracle {expected:?}"))?;
    }
    Ok(format!("20 pairs agree ({degenerate} degenerate)"))
}

// ------------------------------------------------------------- criterion 9

fn c9_bound() -> Outcome {
    let b = compute_bound(&BoundInputs::from_f64(2f64.ln(), 0.0, 1000f64.ln())).map_err(|e| e.to_string())?;
    check(b == 9, || format!("B = {b}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..100 {
        let a3 = rng.gen_range(0.05..2.0);
        let aa = rng.gen_range(0.0..8.0);
        let c = rng.gen_range(0.0..20.0);
        let base = compute_bound(&BoundInputs::from_f64(a3, aa, c)).map_err(|e| e.to_string())?;
        let bigger_a = compute_bound(&BoundInputs::from_f64(a3, aa + 1.0, c)).map_err(|e| e.to_string())?;
        let bigger_c = compute_bound(&BoundInputs::from_f64(a3, aa, c + 1.0)).map_err(|e| e.to_string())?;
        let bigger_a3 = compute_bound(&BoundInputs::from_f64(a3 * 1.5, aa, c)).map_err(|e| e.to_string())?;
        check(bigger_a >= base && bigger_c >= base && bigger_a3 <= base, || {
            format!("case {case}: ({a3}, {aa}, {c}) gives {base}, {bigger_a}, {bigger_c}, {bigger_a3}")
        })?;
    }
    Ok("B(log 2, 0, log 1000) = 9; 100 triples monotone".into())
}

// ------------------------------------------------------------ criterion 10

fn c10_specialization() -> Outcome {
    let t = |k: i64, p: &[(&str, u32)]| formal(k, p);
    let ratio = |n: FormalCoefficient, d: FormalCoefficient| n.div(&d).unwrap();
    let fixtures: Vec<BivariatePolynomial<FormalCoefficient>> = vec![
        BivariatePolynomial::from_terms([((1, 0), t(1, &[])), ((0, 1), t(-1, &[("t", 1)]))]).unwrap(),
        BivariatePolynomial::from_terms([
            ((2, 0), ratio(t(1, &[("t", 1)]), t(1, &[("u", 1)]))),
            ((0, 1), t(1, &[])),
            ((0, 0), t(-1, &[("u", 1)])),
        ])
        .unwrap(),
        BivariatePolynomial::from_terms([
            ((1, 1), t(1, &[])),
            ((0, 2), ratio(t(1, &[("t", 1)]).add(&t(1, &[])).unwrap(), t(1, &[("t", 1)]).sub(&t(1, &[("u", 1)])).unwrap())),
        ])
        .unwrap(),
        BivariatePolynomial::from_terms([
            ((1, 0), t(2, &[("t", 2)])),
            ((0, 1), t(-3, &[("u", 1), ("t", 1)])),
            ((1, 1), t(1, &[("u", 2)])),
        ])
        .unwrap(),
        BivariatePolynomial::from_terms([
            ((3, 0), ratio(t(1, &[]), t(1, &[("t", 1)]))),
            ((0, 2), ratio(t(1, &[]), t(1, &[("u", 1)]))),
            ((0, 0), t(5, &[])),
        ])
        .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let rq = |rng: &mut ChaCha8Rng| {
        let mut n = rng.gen_range(-9i64..=9);
        if n == 0 {
            n = 2;
        }
        Exact::rational(n, rng.gen_range(1i64..=7))
    };
    let names = vec!["t".to_string(), "u".to_string()];
    let mut points = 0;
    for (k, p) in fixtures.iter().enumerate() {
        let cleared = clear_denominators(p, &names).map_err(|e| e.to_string())?;
        let mut sigmas = 0;
        while sigmas < 5 {
            let sigma: BTreeMap<String, Exact> =
                names.iter().map(|s| (s.clone(), rq(&mut rng))).collect();
            let Ok((spec, _)) = specialize_formal(p, &sigma) else {
                continue;
            };
            let consts: BTreeMap<String, MPoly<Exact>> =
                sigma.iter().map(|(s, v)| (s.clone(), MPoly::constant(v.clone()))).collect();
            let mut factor: Option<Exact> = None;
            for _ in 0..4 {
                let (x0, y0) = (rq(&mut rng), rq(&mut rng));
                let lhs = spec.eval(&x0, &y0).map_err(|e| e.to_string())?;
                let at = cleared
                    .eval(&MPoly::constant(x0.clone()), &MPoly::constant(y0.clone()))
                    .map_err(|e| e.to_string())?;
                let rhs = at.substitute(&consts).map_err(|e| e.to_string())?.as_constant().unwrap();
                check(lhs.try_eq(&rhs).unwrap_or(false), || format!("fixture {k}: {lhs} ≠ {rhs}"))?;
                let raw = p
                    .eval(&FormalCoefficient::exact(x0.clone()), &FormalCoefficient::exact(y0.clone()))
                    .and_then(|v| v.specialize(&sigma))
                    .map_err(|e| e.to_string())?;
                if !raw.is_zero() {
                    let f = lhs.div(&raw).map_err(|e| e.to_string())?;
                    if let Some(g) = &factor {
                        check(g.try_eq(&f).unwrap_or(false), || format!("fixture {k}: factor varies"))?;
                    }
                    factor = Some(f);
                }
                points += 1;
            }
            sigmas += 1;
        }
    }
    Ok(format!("{points} points across 5 fixtures commute exactly"))
}

// ------------------------------------------------------------------ runner

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "height unit facts", budget: s(1), run: c1_height_units },
        Criterion { id: 2, name: "Mahler fixtures", budget: s(1), run: c2_mahler },
        Criterion { id: 3, name: "a3 certification", budget: s(5), run: c3_a3 },
        Criterion { id: 4, name: "height inequalities", budget: s(10), run: c4_height_inequalities },
        Criterion { id: 5, name: "zero counting", budget: s(30), run: c5_zero_counting },
        Criterion { id: 6, name: "end-to-end pipeline", budget: s(10), run: c6_pipeline },
        Criterion { id: 7, name: "reduction correctness", budget: s(30), run: c7_reductions },
        Criterion { id: 8, name: "degeneracy classifier", budget: s(5), run: c8_degeneracy },
        Criterion { id: 9, name: "bound solver", budget: s(1), run: c9_bound },
        Criterion { id: 10, name: "specialization commutation", budget: s(5), run: c10_specialization },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || *f == c.id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if took <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] {:>2} {:<28} {:>7.3} s / {:>2} s  {detail}",
            c.id,
            c.name,
            took.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
