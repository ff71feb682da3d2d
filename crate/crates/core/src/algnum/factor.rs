//! Factorization of integer polynomials over ℚ (Zassenhaus).
//!
//! Square-free input is factored modulo a small prime by Cantor–Zassenhaus,
//! the factors are Hensel-lifted to a modulus exceeding twice the factor
//! coefficient bound, and true factors are recovered by subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::IntPolynomial;

/// Irreducible factorization: `f = unit · ∏ gᵢ^eᵢ` with each `gᵢ` primitive,
/// positive leading coefficient, irreducible over ℚ. Returns `(unit, factors)`
/// where `unit` is the signed content. Factors are sorted by (degree, coeffs).
pub fn factor(f: &IntPolynomial) -> (BigInt, Vec<(IntPolynomial, u32)>) {
    if f.is_zero() {
        return (BigInt::zero(), vec![]);
    }
    let mut unit = f.content();
    if f.leading().is_negative() {
        unit = -unit;
    }
    let mut out = Vec::new();
    for (sf, mult) in f.square_free_decomposition() {
        for g in factor_square_free(&sf) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    (unit, out)
}

/// True iff `f` has degree ≥ 1 and admits no factorization into two integer
/// polynomials of degree ≥ 1.
pub fn irreducible_over_q(f: &IntPolynomial) -> bool {
    if f.is_zero() || f.degree() == 0 {
        return false;
    }
    if !f.is_square_free() {
        return false;
    }
    factor_square_free(&f.primitive()).len() == 1
}

/// Irreducible factors of a square-free primitive polynomial.
pub fn factor_square_free(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let f = f.primitive();
    let n = f.degree();
    if n <= 1 {
        return if n == 1 { vec![f] } else { vec![] };
    }
    // strip the factor x first; it confuses nothing but is free to remove
    if f.coeff(0).is_zero() {
        let rest = IntPolynomial::new(f.coeffs()[1..].to_vec());
        let mut v = vec![IntPolynomial::x()];
        v.extend(factor_square_free(&rest));
        return v;
    }
    let Some((p, modular)) = choose_prime(&f) else {
        return vec![f];
    };
    if modular.len() == 1 {
        return vec![f];
    }
    let bound = f.factor_coefficient_bound() * 2 + 1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let target = reduce_mod(&to_big(&f), &m);
    let lifted = hensel_lift_all(&target, &f.leading(), &modular, p, k, &m);
    recombine(f, lifted, &m)
}

// ---------------------------------------------------------------------------
// Prime selection and factorization mod p.

type Fp = Vec<u64>;

const PRIME_TRIES: usize = 6;

fn choose_prime(f: &IntPolynomial) -> Option<(u64, Vec<Fp>)> {
    let lc = f.leading();
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    for p in small_primes().into_iter().skip(1) {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = fp_from_int(f, p);
        let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        let facs = fp_factor(&fp, p, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= PRIME_TRIES || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best
}

fn small_primes() -> Vec<u64> {
    let mut v = Vec::new();
    let mut n = 2u64;
    while v.len() < 2000 {
        if v.iter().take_while(|&&q| q * q <= n).all(|&q| n % q != 0) {
            v.push(n);
        }
        n += 1;
    }
    v
}

fn fp_from_int(f: &IntPolynomial, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_trim(v: &mut Fp) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_deg(a: &Fp) -> usize {
    a.len().saturating_sub(1)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_trim(&mut v);
    v
}

fn fp_scale(a: &Fp, k: u64, p: u64) -> Fp {
    let mut v: Fp = a.iter().map(|&x| mulmod(x, k, p)).collect();
    fp_trim(&mut v);
    v
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (vec![], a.clone());
    }
    let mut r = a.clone();
    let db = fp_deg(b);
    let inv = invmod(*b.last().unwrap(), p);
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], inv, p);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &y) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, y, p)) % p;
        }
    }
    fp_trim(&mut q);
    fp_trim(&mut r);
    (q, r)
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&lc) => fp_scale(a, invmod(lc, p), p),
        None => vec![],
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s·a + t·b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = invmod(*r0.last().unwrap(), p);
    (fp_scale(&r0, inv, p), fp_scale(&s0, inv, p), fp_scale(&t0, inv, p))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    let mut v: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        result = fp_divrem(&fp_mul(&result, &result, p), m, p).1;
        if e.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
    }
    result
}

/// Monic irreducible factors of a square-free polynomial over F_p (p odd).
fn fp_factor(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&fp_monic(f, p), p) {
        equal_degree(&g, d, p, rng, &mut out);
    }
    out
}

fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while 2 * d <= fp_deg(&f) {
        h = fp_powmod(&h, &pe, &f, p);
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if f.len() > 1 {
        let dd = fp_deg(&f);
        out.push((f, dd));
    }
    out
}

fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    let n = fp_deg(f);
    if n == d {
        out.push(f.clone());
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
        fp_trim(&mut a);
        if a.len() <= 1 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, f, p), &vec![1], p);
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&fp_monic(&h, p), d, p, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting over ℤ/p^k.

type Zp = Vec<BigInt>;

fn to_big(f: &IntPolynomial) -> Zp {
    f.coeffs().to_vec()
}

fn fp_to_big(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn big_to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp_trim(&mut v);
    v
}

fn zp_trim(v: &mut Zp) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn reduce_mod(a: &Zp, m: &BigInt) -> Zp {
    let mut v: Zp = a.iter().map(|c| c.mod_floor(m)).collect();
    zp_trim(&mut v);
    v
}

fn zp_mul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    reduce_mod(&v, m)
}

fn zp_sub(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zp = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    reduce_mod(&v, m)
}

fn zp_add_scaled(a: &Zp, b: &Zp, k: &BigInt, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zp = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z) * k)
        .collect();
    reduce_mod(&v, m)
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Lift `target ≡ lc · ∏ factors (mod p)` to monic factors modulo `m = p^k`.
fn hensel_lift_all(
    target: &Zp,
    lc: &BigInt,
    factors: &[Fp],
    p: u64,
    k: u32,
    m: &BigInt,
) -> Vec<Zp> {
    if factors.len() == 1 {
        return vec![zp_monic(target, m)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let g0 = left.iter().fold(vec![1u64], |acc, f| fp_mul(&acc, f, p));
    let lcp = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let h0 = fp_scale(
        &right.iter().fold(vec![1u64], |acc, f| fp_mul(&acc, f, p)),
        lcp,
        p,
    );
    let (g, h) = hensel_lift_pair(target, &g0, &h0, p, k, m);
    let mut out = hensel_lift_all(&g, &BigInt::one(), left, p, k, m);
    out.extend(hensel_lift_all(&h, lc, right, p, k, m));
    out
}

fn zp_monic(a: &Zp, m: &BigInt) -> Zp {
    let inv = inv_mod_big(&a.last().cloned().unwrap_or_default(), m);
    reduce_mod(&a.iter().map(|c| c * &inv).collect(), m)
}

/// Linear Hensel lifting of `f ≡ g0·h0 (mod p)` with `g0` monic.
fn hensel_lift_pair(f: &Zp, g0: &Fp, h0: &Fp, p: u64, k: u32, m: &BigInt) -> (Zp, Zp) {
    let (one, s, t) = fp_xgcd(g0, h0, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g = fp_to_big(g0);
    let mut h = fp_to_big(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = zp_sub(&reduce_mod(f, &next), &zp_mul(&g, &h, &next), &next);
        let e: Zp = diff.iter().map(|c| c / &pj).collect();
        let ep = big_to_fp(&e, p);
        let (q, r) = fp_divrem(&fp_mul(&t, &ep, p), g0, p);
        let dh = fp_add(&fp_mul(&s, &ep, p), &fp_mul(&q, h0, p), p);
        g = zp_add_scaled(&g, &fp_to_big(&r), &pj, &next);
        h = zp_add_scaled(&h, &fp_to_big(&dh), &pj, &next);
        pj = next;
    }
    (reduce_mod(&g, m), reduce_mod(&h, m))
}

// ---------------------------------------------------------------------------
// Recombination.

fn symmetric(a: &Zp, m: &BigInt) -> IntPolynomial {
    let half: BigInt = m / 2;
    IntPolynomial::new(
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn recombine(mut f: IntPolynomial, mut lifted: Vec<Zp>, m: &BigInt) -> Vec<IntPolynomial> {
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let lc = f.leading();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let prod = idx
                .iter()
                .fold(vec![lc.clone()], |acc, &i| zp_mul(&acc, &lifted[i], m));
            let cand = symmetric(&prod, m).primitive();
            if cand.degree() > 0 {
                if let Some(q) = f.div_exact(&cand) {
                    found.push(cand);
                    f = q.primitive();
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        s += 1;
    }
    if f.degree() > 0 {
        found.push(f);
    }
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn product(fs: &[(IntPolynomial, u32)]) -> IntPolynomial {
        fs.iter()
            .fold(IntPolynomial::one(), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    #[test]
    fn small_irreducibility() {
        assert!(irreducible_over_q(&p(&[-2, 0, 1])));
        assert!(!irreducible_over_q(&p(&[-4, 0, 1])));
        assert!(irreducible_over_q(&p(&[1, 0, 0, 0, 1])));
        assert!(irreducible_over_q(&p(&[-1, -1, 1])));
        assert!(!irreducible_over_q(&p(&[5])));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 splits into quadratics mod every prime
        assert!(irreducible_over_q(&p(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn factors_multiply_back() {
        let f = p(&[-1, 0, 0, 0, 0, 0, 1]); // x^6 - 1
        let (u, fs) = factor(&f);
        assert_eq!(u, BigInt::one());
        assert_eq!(fs.len(), 4);
        assert_eq!(product(&fs), f);
        let g = p(&[6, -5, 1]).mul(&p(&[3, 0, 2])).pow(2).scale(&BigInt::from(-3));
        let (u, fs) = factor(&g);
        assert_eq!(u, BigInt::from(-3));
        assert_eq!(product(&fs).scale(&u), g);
        assert!(fs.iter().all(|(h, _)| irreducible_over_q(h)));
    }

    #[test]
    fn non_monic_recombination() {
        // (6x^2 + 1)(10x^3 - 7)(15x + 2)
        let f = p(&[1, 0, 6]).mul(&p(&[-7, 0, 0, 10])).mul(&p(&[2, 15]));
        let (_, fs) = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn cyclotomic_product() {
        let f = IntPolynomial::x_pow_minus_one(24);
        let (_, fs) = factor(&f);
        assert_eq!(fs.len(), 8);
        for (g, _) in &fs {
            assert!((1..=24).any(|n| 24 % n == 0 && IntPolynomial::cyclotomic(n) == *g));
        }
    }
}
