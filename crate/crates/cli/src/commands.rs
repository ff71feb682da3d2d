use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use pexp_core::algnum::{irreducible_over_q, parse_decimal, Dyadic, Exact, IntPolynomial, Round};
use pexp_core::analytic::{density_report, locate_zeros, Region};
use pexp_core::finite::{
    basis_relations, compute_bound, enumerate_candidates, run_pipeline, BoundInputs, CandidateStatus,
    FinitenessCertificate, Verdict, DEFAULT_GUARD,
};
use pexp_core::height::{exact_height, log_mahler_measure, mahler_measure, rational_height, HeightValue};
use pexp_core::mullattice::{a3_constant, find_verified_relations, mult_independent, Independence, SymbolicValue};
use pexp_core::problem::{coefficient_json, parse_problem_str, parse_value, problem_to_json, Problem};
use pexp_core::reduce::{
    expand_exponential_sum, rescale_denominator, specialize_partial, split_two_pi_i, translate_by_vector,
    zero_vector, ExpPolyEquation, LogKind,
};

use crate::report::{Failure, Outcome, EXIT_PRECISION};
use crate::{Cli, Command, RationalList, ValueSource};

type Run = std::result::Result<Outcome, Failure>;

const DEFAULT_PRECISION: u32 = 128;

fn precision(cli: &Cli) -> std::result::Result<u32, Failure> {
    match cli.global.precision {
        None => Ok(DEFAULT_PRECISION),
        Some(p) if (32..=4096).contains(&p) => Ok(p),
        Some(p) => Err(Failure::invalid(format!("--precision {p} is outside 32..=4096"))),
    }
}

/// Problem file with `--precision` and `--guard` applied, plus its text.
fn load(path: &Path, cli: &Cli) -> std::result::Result<(Problem, String), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let mut problem = parse_problem_str(&text)?;
    if cli.global.precision.is_some() {
        problem.config.precision_bits = precision(cli)?;
    }
    if let Some(g) = cli.global.guard {
        problem.config.guard = g;
    }
    Ok((problem, text))
}

fn rational(s: &str) -> std::result::Result<BigRational, Failure> {
    parse_decimal(s.trim()).map_err(|e| Failure::invalid(format!("{s:?}: {e}")))
}

fn rationals(list: &str) -> std::result::Result<Vec<BigRational>, Failure> {
    list.split(',').map(rational).collect()
}

fn integers(list: &str) -> std::result::Result<Vec<BigInt>, Failure> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::invalid(format!("{s:?} is not an integer")))
        })
        .collect()
}

fn f64_of(h: &HeightValue) -> String {
    format!("{:.6}", h.to_f64())
}

/// `(symbol, λ)` for every logarithm entry of the basis.
fn log_arguments(eq: &ExpPolyEquation) -> Vec<(usize, String, Exact)> {
    eq.basis
        .iter()
        .enumerate()
        .filter_map(|(k, b)| match &b.kind {
            LogKind::Log { lambda, symbol, .. } => Some((k, symbol.clone(), lambda.clone())),
            _ => None,
        })
        .collect()
}

fn rational_arguments(src: &RationalList, cli: &Cli) -> std::result::Result<(Vec<BigRational>, Vec<String>), Failure> {
    if let Some(list) = &src.rationals {
        return Ok((rationals(list)?, Vec::new()));
    }
    let path = src.problem.as_ref().expect("clap enforces one source");
    let (problem, text) = load(path, cli)?;
    let gamma = log_arguments(&problem.equation)
        .into_iter()
        .map(|(k, _, lambda)| {
            lambda
                .as_rational()
                .cloned()
                .ok_or_else(|| Failure::invalid(format!("basis entry {k} has an irrational argument")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((gamma, vec![text]))
}

fn minimal_polynomial(x: &Exact) -> IntPolynomial {
    match x {
        Exact::Rational(q) => IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()]),
        Exact::Algebraic(a) => a.minpoly().clone(),
    }
}

fn height(src: &ValueSource, cli: &Cli) -> Run {
    let prec = precision(cli)?;
    if let Some(s) = &src.rational {
        let q = rational(s)?;
        if q.is_zero() {
            return Err(Failure::invalid("height of zero is undefined"));
        }
        let h = HeightValue::from_interval(&rational_height(&q, prec)?, prec);
        let m = std::cmp::max(q.numer().abs(), q.denom().abs());
        let rendered = if m == BigInt::from(1) { "0".to_string() } else { format!("log {m}") };
        let summary = format!("h({q}) = {rendered} ≈ {}", f64_of(&h));
        return Ok(Outcome::new(json!(h.to_record()), summary));
    }
    if let Some(s) = &src.poly {
        let f = IntPolynomial::new(integers(s)?);
        if f.degree() == 0 {
            return Err(Failure::invalid("polynomial must have positive degree"));
        }
        if !irreducible_over_q(&f) {
            return Err(Failure::invalid(format!("{f} is not irreducible over ℚ")));
        }
        let i = log_mahler_measure(&f, prec)?.div_int(f.degree() as i64, prec);
        let h = HeightValue::from_interval(&i, prec);
        let summary = format!("h(root of {f}) = log M/{} ≈ {}", f.degree(), f64_of(&h));
        return Ok(Outcome::new(json!(h.to_record()), summary));
    }
    let (problem, text) = load(src.problem.as_ref().expect("clap enforces one source"), cli)?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (k, symbol, lambda) in log_arguments(&problem.equation) {
        let h = HeightValue::from_interval(&exact_height(&lambda, prec)?, prec);
        lines.push(format!("h(exp {symbol}) ≈ {}", f64_of(&h)));
        rows.push(json!({"entry": k, "symbol": symbol, "height": h.to_record()}));
    }
    let mut out = Outcome::new(json!({ "heights": rows }), lines.join("\n"));
    out.inputs.push(text);
    Ok(out)
}

fn mahler(src: &ValueSource, cli: &Cli) -> Run {
    let prec = precision(cli)?;
    let record = |f: &IntPolynomial| -> std::result::Result<(Value, String), Failure> {
        let m = HeightValue::from_interval(&mahler_measure(f, prec)?, prec);
        Ok((json!(m.to_record()), format!("M({f}) ≈ {}", f64_of(&m))))
    };
    if let Some(s) = &src.rational {
        let q = rational(s)?;
        if q.is_zero() {
            return Err(Failure::invalid("Mahler measure of zero is not useful here"));
        }
        let (v, s) = record(&minimal_polynomial(&Exact::Rational(q)))?;
        return Ok(Outcome::new(v, s));
    }
    if let Some(s) = &src.poly {
        let f = IntPolynomial::new(integers(s)?);
        if f.coeffs().iter().all(|c| c.is_zero()) {
            return Err(pexp_core::Error::ZeroPolynomial.into());
        }
        let (v, s) = record(&f)?;
        return Ok(Outcome::new(v, s));
    }
    let (problem, text) = load(src.problem.as_ref().expect("clap enforces one source"), cli)?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (k, symbol, lambda) in log_arguments(&problem.equation) {
        let (v, s) = record(&minimal_polynomial(&lambda))?;
        lines.push(s);
        rows.push(json!({"entry": k, "symbol": symbol, "mahler": v}));
    }
    let mut out = Outcome::new(json!({ "measures": rows }), lines.join("\n"));
    out.inputs.push(text);
    Ok(out)
}

fn a3(src: &RationalList, cli: &Cli) -> Run {
    let prec = precision(cli)?;
    let (gamma, inputs) = rational_arguments(src, cli)?;
    let b = a3_constant(&gamma, prec)?;
    let mut out = Outcome::new(json!(b.to_record()), format!("a3 ≥ {:.6}", b.lower.to_f64()));
    out.inputs = inputs;
    Ok(out)
}

fn indep(src: &RationalList, cli: &Cli) -> Run {
    let (gamma, inputs) = rational_arguments(src, cli)?;
    let (v, s) = match mult_independent(&gamma)? {
        Independence::Independent => (
            json!({"independent": true}),
            "multiplicatively independent".to_string(),
        ),
        Independence::Dependent(m) => {
            let m: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            let s = format!("dependent: exponents ({})", m.join(", "));
            (json!({"independent": false, "relation": m}), s)
        }
    };
    let mut out = Outcome::new(v, s);
    out.inputs = inputs;
    Ok(out)
}

fn relations(src: &RationalList, coeff_bound: Option<u64>, cli: &Cli) -> Run {
    let prec = precision(cli)?;
    let (found, inputs) = if let Some(list) = &src.rationals {
        let values: Vec<SymbolicValue> = rationals(list)?
            .into_iter()
            .map(|q| SymbolicValue::Log {
                lambda: Exact::Rational(q),
                branch: 0,
            })
            .collect();
        let bound = BigInt::from(coeff_bound.unwrap_or(1000));
        (find_verified_relations(&values, &bound, prec)?, Vec::new())
    } else {
        let (problem, text) = load(src.problem.as_ref().expect("clap enforces one source"), cli)?;
        let bound = coeff_bound.unwrap_or(problem.config.relation_coeff_bound);
        let prec = problem.config.precision_bits;
        (basis_relations(&problem.equation, bound, prec)?, vec![text])
    };
    let records: Vec<_> = found.iter().map(|r| r.to_record()).collect();
    let summary = match records.first() {
        None => "no integer relation found (numeric screening, not a proof)".to_string(),
        Some(r) => format!("relation ({}) {:?}", r.coefficients.join(", "), r.status),
    };
    let mut out = Outcome::new(json!({ "relations": records }), summary);
    out.inputs = inputs;
    Ok(out)
}

fn expand(path: &Path, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let sum = expand_exponential_sum(&problem.equation)?;
    let terms: Vec<Value> = sum
        .terms
        .iter()
        .map(|(level, q)| json!({"level": level, "coefficient": coefficient_json(q)}))
        .collect();
    let summary = format!("{} exponential term(s)", terms.len());
    let mut out = Outcome::new(json!({ "terms": terms }), summary);
    out.inputs.push(text);
    Ok(out)
}

fn transformed(problem: Problem, text: String, summary: String) -> Outcome {
    let mut out = Outcome::new(problem_to_json(&problem), summary);
    out.warnings = problem.equation.warnings();
    out.inputs.push(text);
    out
}

fn rescale(path: &Path, n: Option<u64>, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let n = n.unwrap_or(problem.config.denominator_n);
    let mut next = problem.with_equation(rescale_denominator(&problem.equation, n)?);
    next.config.denominator_n = 1;
    Ok(transformed(next, text, format!("basis divided by {n}")))
}

fn split2pi(path: &Path, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let parts: Vec<Value> = split_two_pi_i(&problem.equation)?
        .into_iter()
        .map(|eq| {
            let mut p = problem.with_equation(eq);
            p.config.class_translates = vec![zero_vector(p.equation.dim())];
            p.config.denominator_n = 1;
            problem_to_json(&p)
        })
        .collect();
    let summary = format!("{} residue class(es)", parts.len());
    let mut out = Outcome::new(Value::Array(parts.clone()), summary);
    out.split_outputs = Some(parts);
    out.inputs.push(text);
    Ok(out)
}

fn specialize(path: &Path, assign: &[String], cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let prec = problem.config.precision_bits;
    let mut map = BTreeMap::new();
    for a in assign {
        let (name, value) = a
            .split_once('=')
            .ok_or_else(|| Failure::invalid(format!("{a:?}: expected NAME=VALUE")))?;
        let v = if value.trim_start().starts_with('{') {
            serde_json::from_str(value).map_err(|e| Failure::invalid(format!("{name}: {e}")))?
        } else {
            Value::String(value.to_string())
        };
        map.insert(name.trim().to_string(), parse_value(&v, prec)?);
    }
    let eq = &problem.equation;
    let (p, flags) = specialize_partial(&eq.p, &map)?;
    let next = ExpPolyEquation::new(p, eq.basis.clone(), eq.transcendental_values.clone(), eq.asserted_independent)?;
    let mut out = transformed(problem.with_equation(next), text, format!("specialized {} symbol(s)", map.len()));
    if !flags.healthy() {
        out.warnings.push("specialized polynomial has a vanishing partial derivative".into());
    }
    out.details = Some(json!({ "flags": flags }));
    Ok(out)
}

fn translate(path: &Path, class: &str, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let n = integers(class)?;
    if n.len() != problem.equation.dim() {
        return Err(Failure::invalid(format!(
            "class vector has length {}, basis has {}",
            n.len(),
            problem.equation.dim()
        )));
    }
    let eq = translate_by_vector(&problem.equation, &n, problem.equation.basis.clone())?;
    let mut next = problem.with_equation(eq);
    next.config.class_translates = vec![zero_vector(n.len())];
    Ok(transformed(next, text, format!("translated by ({class})")))
}

fn bound(a3: &str, slope: &str, offset: &str) -> Run {
    let prec = 256;
    let inputs = BoundInputs::new(
        Dyadic::from_rational(&rational(a3)?, prec, Round::Down),
        Dyadic::from_rational(&rational(slope)?, prec, Round::Up),
        Dyadic::from_rational(&rational(offset)?, prec, Round::Up),
    );
    let b = compute_bound(&inputs)?;
    Ok(Outcome::new(
        json!({"bound_B": b, "constants": inputs.to_record()}),
        format!("B = {b}"),
    ))
}

fn enumerate(dim: usize, b: u64, cli: &Cli) -> Run {
    let it = enumerate_candidates(dim, b, cli.global.guard.unwrap_or(DEFAULT_GUARD))?;
    let total = it.total();
    let vectors: Vec<Vec<Value>> = it
        .map(|v| {
            v.iter()
                .map(|x| i64::try_from(x).map_or_else(|_| json!(x.to_string()), |k| json!(k)))
                .collect()
        })
        .collect();
    Ok(Outcome::new(
        json!({"dim": dim, "bound_B": b, "total": total.to_string(), "vectors": vectors}),
        format!("{total} vector(s) with |n|₁ ≤ {b}"),
    ))
}

fn escalations(cert: &FinitenessCertificate, start: u32) -> Vec<Value> {
    let mut out = Vec::new();
    for (k, b) in cert.branches.iter().enumerate() {
        for c in &b.candidates {
            let bits = match c.status {
                CandidateStatus::CertifiedNonSolution { precision_bits } if precision_bits > start => precision_bits,
                CandidateStatus::Probable { precision_bits } => precision_bits,
                _ => continue,
            };
            let vector: Vec<String> = c.vector.iter().map(|x| x.to_string()).collect();
            out.push(json!({"branch": k, "vector": vector, "precision_bits": bits}));
        }
    }
    out
}

fn pipeline(path: &Path, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let cert = run_pipeline(&problem)?;
    let summary = match &cert.verdict {
        Verdict::NotApplicable { hypothesis } => format!("not applicable: {hypothesis}"),
        Verdict::Finite => {
            let sols: Vec<String> = cert
                .solutions
                .iter()
                .map(|s| format!("({}) {:?}", s.rational.join(", "), s.status))
                .collect();
            format!(
                "finite: B = {}, {} candidate(s), solutions: {}",
                cert.bound_b,
                cert.candidates_total,
                if sols.is_empty() { "none".into() } else { sols.join("; ") }
            )
        }
    };
    let mut out = Outcome::new(serde_json::to_value(&cert).expect("serializable"), summary);
    out.precision_escalations = escalations(&cert, problem.config.precision_bits.max(32));
    out.warnings = cert.warnings.clone();
    out.inputs.push(text);
    if cert.has_probable() {
        out.exit = EXIT_PRECISION;
    }
    Ok(out)
}

fn dyadic_exact(s: &str) -> std::result::Result<Dyadic, Failure> {
    let q = rational(s)?;
    Dyadic::try_from_rational_exact(&q)
        .ok_or_else(|| Failure::invalid(format!("{s:?} is not a dyadic rational (denominator a power of 2)")))
}

fn count_roots(path: &Path, rect: Option<&str>, radii: Option<&str>, cli: &Cli) -> Run {
    let (problem, text) = load(path, cli)?;
    let prec = problem.config.precision_bits;
    let p = problem.equation.p.map_coeffs(|c| {
        c.as_exact().ok_or_else(|| {
            pexp_core::Error::InvalidArgument("count-roots needs coefficients free of symbols; specialize first".into())
        })
    })?;
    let mut output = serde_json::Map::new();
    let mut lines = Vec::new();
    if let Some(r) = rect {
        let c: Vec<Dyadic> = r.split(',').map(dyadic_exact).collect::<std::result::Result<_, _>>()?;
        if c.len() != 4 {
            return Err(Failure::invalid("--rect needs four numbers re0,im0,re1,im1"));
        }
        let region = Region::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())?;
        let report = locate_zeros(&p, &region, prec)?;
        lines.push(format!(
            "{} zero(s) in the rectangle, {} certified by Krawczyk",
            report.winding_count,
            report.certified_count()
        ));
        output.insert("report".into(), serde_json::to_value(&report).expect("serializable"));
    }
    if let Some(r) = radii {
        let rs: Vec<Dyadic> = r.split(',').map(dyadic_exact).collect::<std::result::Result<_, _>>()?;
        let counts = density_report(&p, &rs, prec)?;
        let rows: Vec<Value> = rs
            .iter()
            .zip(&counts)
            .map(|(r, n)| json!({"half_side": r.to_decimal_string(), "count": n}))
            .collect();
        lines.push(format!(
            "counts on squares: {}",
            counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ));
        output.insert("density".into(), Value::Array(rows));
    }
    let mut out = Outcome::new(Value::Object(output), lines.join("\n"));
    out.inputs.push(text);
    Ok(out)
}

pub fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Height(src) => height(src, cli),
        Command::Mahler(src) => mahler(src, cli),
        Command::A3(src) => a3(src, cli),
        Command::Indep(src) => indep(src, cli),
        Command::Relations { source, coeff_bound } => relations(source, *coeff_bound, cli),
        Command::Expand { problem } => expand(problem, cli),
        Command::Rescale { problem, denominator } => rescale(problem, *denominator, cli),
        Command::Split2pi { problem } => split2pi(problem, cli),
        Command::Specialize { problem, assign } => specialize(problem, assign, cli),
        Command::Translate { problem, class } => translate(problem, class, cli),
        Command::Bound { a3: a, slope, offset } => bound(a, slope, offset),
        Command::Enumerate { dim, bound: b } => enumerate(*dim, *b, cli),
        Command::Pipeline { problem } => pipeline(problem, cli),
        Command::CountRoots { problem, rect, radii } => {
            count_roots(problem, rect.as_deref(), radii.as_deref(), cli)
        }
    }
}
