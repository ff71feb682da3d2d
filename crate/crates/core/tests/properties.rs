use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use pexp_core::algnum::{BivariatePolynomial, Dyadic, Exact, MPoly};
use pexp_core::analytic::density_report;
use pexp_core::finite::{
    ball_size, compute_bound, enumerate_candidates, run_pipeline, BoundInputs, CandidateStatus, Verdict,
};
use pexp_core::height::rational_height;
use pexp_core::problem::Problem;
use pexp_core::reduce::{
    clear_denominators, rescale_denominator, specialize_formal, ExpPolyEquation, FormalCoefficient,
    LogElement,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-500i64..=-1, 1i64..=500], 1i64..=500).prop_map(|(n, d)| q(n, d))
}

/// `p = x − r·log 2·y` over the basis `(log 2)`: solutions are `n = r·2ⁿ`.
fn linear_problem(r: &BigRational) -> Problem {
    let tau = MPoly::monomial(&[("log(2)", 1)], Exact::Rational(-r.clone()));
    let p = BivariatePolynomial::from_terms([
        ((1, 0), FormalCoefficient::exact(Exact::int(1))),
        ((0, 1), FormalCoefficient::from_poly(tau)),
    ])
    .unwrap();
    let b = LogElement::log_of_rational(q(2, 1), 0).unwrap();
    Problem::new(ExpPolyEquation::new(p, vec![b], BTreeMap::new(), true).unwrap())
}

fn two_pow(n: i64) -> BigRational {
    if n >= 0 {
        BigRational::from_integer(BigInt::from(1) << n as usize)
    } else {
        BigRational::new(1.into(), BigInt::from(1) << (-n) as usize)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_height_is_multiplicative_up_to_the_triangle(a in nonzero_rational(), b in nonzero_rational()) {
        let h = |x: &BigRational| rational_height(x, 96).unwrap();
        let (ha, hb, hab) = (h(&a), h(&b), h(&(&a * &b)));
        prop_assert!(hab.lo() <= &(ha.hi() + hb.hi()));
        prop_assert!(h(&a.recip()).intersects(&ha));
    }

    #[test]
    fn rational_height_of_powers(a in nonzero_rational(), k in 1i64..=6) {
        let ha = rational_height(&a, 96).unwrap();
        let hk = rational_height(&num_traits::pow(a.clone(), k as usize), 96).unwrap();
        prop_assert!(hk.intersects(&ha.mul_int(k, 96)));
    }

    #[test]
    fn bound_is_monotone_and_tight(a3 in 0.05f64..3.0, slope in 0.0f64..6.0, offset in 0.0f64..15.0) {
        let b = compute_bound(&BoundInputs::from_f64(a3, slope, offset)).unwrap();
        let admits = |x: u64| {
            if x <= 1 { a3 * x as f64 <= offset + 1e-9 } else { a3 * x as f64 <= slope * (x as f64).ln() + offset + 1e-9 }
        };
        prop_assert!(admits(b));
        prop_assert!(!admits(b + 1) || a3 * (b + 1) as f64 > slope * ((b + 1) as f64).ln() + offset - 1e-9);
        let more = compute_bound(&BoundInputs::from_f64(a3, slope + 0.5, offset + 0.5)).unwrap();
        let less = compute_bound(&BoundInputs::from_f64(a3 * 2.0, slope, offset)).unwrap();
        prop_assert!(more >= b && less <= b);
    }

    #[test]
    fn enumeration_matches_ball_size(d in 1usize..=4, b in 0u64..=6) {
        let it = enumerate_candidates(d, b, 1_000_000).unwrap();
        prop_assert_eq!(it.total(), ball_size(d, b));
        let all: Vec<Vec<BigInt>> = it.collect();
        prop_assert_eq!(all.len() as u128, ball_size(d, b));
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), all.len());
        for v in &all {
            let l1: BigInt = v.iter().map(|x| if x < &BigInt::zero() { -x } else { x.clone() }).sum();
            prop_assert!(l1 <= BigInt::from(b));
        }
    }

    #[test]
    fn specialization_commutes_with_evaluation(
        t in nonzero_rational(), u in nonzero_rational(), x0 in nonzero_rational(), y0 in nonzero_rational()
    ) {
        let sym = |k: i64, p: &[(&str, u32)]| FormalCoefficient::from_poly(MPoly::monomial(p, Exact::int(k)));
        let p = BivariatePolynomial::from_terms([
            ((2, 0), sym(1, &[("t", 1)]).div(&sym(1, &[("u", 1)])).unwrap()),
            ((1, 1), sym(-3, &[("u", 2)])),
            ((0, 0), sym(1, &[("t", 1), ("u", 1)])),
        ])
        .unwrap();
        let sigma = BTreeMap::from([("t".to_string(), Exact::Rational(t)), ("u".to_string(), Exact::Rational(u))]);
        let names = vec!["t".to_string(), "u".to_string()];
        let (spec, _) = specialize_formal(&p, &sigma).unwrap();
        let (x0, y0) = (Exact::Rational(x0), Exact::Rational(y0));
        let lhs = spec.eval(&x0, &y0).unwrap();
        let cleared = clear_denominators(&p, &names).unwrap();
        let at = cleared.eval(&MPoly::constant(x0), &MPoly::constant(y0)).unwrap();
        let consts: BTreeMap<String, MPoly<Exact>> =
            sigma.iter().map(|(s, v)| (s.clone(), MPoly::constant(v.clone()))).collect();
        let rhs = at.substitute(&consts).unwrap().as_constant().unwrap();
        prop_assert!(lhs.try_eq(&rhs).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Pipeline solutions agree with an exact scan over |n| ≤ B + 10, and
    /// every status survives re-substitution at twice the precision.
    #[test]
    fn pipeline_agrees_with_brute_force(n0 in -3i64..=6, extra in prop_oneof![Just(0i64), 1i64..=3]) {
        let r = if n0 == 0 {
            q(1, 1 + extra)
        } else {
            BigRational::from_integer(n0.into()) / two_pow(n0)
        };
        let problem = linear_problem(&r);
        let cert = run_pipeline(&problem).unwrap();
        prop_assert_eq!(&cert.verdict, &Verdict::Finite);
        let window = cert.bound_b as i64 + 10;
        let oracle: Vec<i64> = (-window..=window)
            .filter(|&n| BigRational::from_integer(n.into()) == &r * two_pow(n))
            .collect();
        let verified: Vec<i64> = cert.verified().iter().map(|v| v[0].to_i64().unwrap()).collect();
        prop_assert_eq!(&verified, &oracle);
        prop_assert!(!cert.has_probable());
        prop_assert!(oracle.iter().all(|n| n.unsigned_abs() <= cert.bound_b));
        let eq = &problem.equation;
        for b in &cert.branches {
            for c in &b.candidates {
                match c.status {
                    CandidateStatus::ExactlyVerified => {
                        prop_assert!(eq.enclose_direct(&c.vector, 512).unwrap().contains_zero());
                    }
                    CandidateStatus::CertifiedNonSolution { precision_bits } => {
                        prop_assert!(!eq.enclose_direct(&c.vector, 2 * precision_bits).unwrap().contains_zero());
                    }
                    CandidateStatus::Probable { .. } => prop_assert!(false, "probable status"),
                }
            }
        }
    }

    /// Rescaling by N maps rational solutions with denominator N onto integers.
    #[test]
    fn rescale_preserves_solutions(n in 1u64..=4, k in -4i64..=4) {
        // y = 2^{k/n}: e^{x} with x = (k/n)·log 2.
        let p = BivariatePolynomial::from_terms([
            ((0, n as u32), FormalCoefficient::exact(Exact::int(1))),
            ((0, 0), FormalCoefficient::exact(Exact::Rational(-two_pow(k)))),
        ])
        .unwrap();
        let b = LogElement::log_of_rational(q(2, 1), 0).unwrap();
        let eq = ExpPolyEquation::new(p, vec![b], BTreeMap::new(), true).unwrap();
        let resc = rescale_denominator(&eq, n).unwrap();
        for m in -8i64..=8 {
            let zero = resc.enclose_direct(&[BigInt::from(m)], 256).unwrap().contains_zero();
            // (e^{(m/n) log 2})^n = 2^m, so m is a solution iff m = k.
            prop_assert_eq!(zero, m == k, "m = {}", m);
        }
    }

    #[test]
    fn zero_counts_grow_with_the_square(c in 1i64..=20) {
        let p = BivariatePolynomial::from_terms([
            ((0, 1), Exact::int(1)),
            ((0, 0), Exact::int(-c)),
        ])
        .unwrap();
        let radii: Vec<Dyadic> = [4, 8, 16].iter().map(|&r| Dyadic::from_int(r)).collect();
        let counts = density_report(&p, &radii, 96).unwrap();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        // Zeros log c + 2πik with |Im| < r.
        for (r, got) in [4.0f64, 8.0, 16.0].iter().zip(&counts) {
            let k = ((r / (2.0 * std::f64::consts::PI)).ceil() as i64 - 1) * 2 + 1;
            prop_assert_eq!(*got as i64, k);
        }
    }
}
