//! Problem files: the equation plus the run configuration, stored as JSON.
//!
//! ```json
//! {
//!   "polynomial": [
//!     {"monomial": [1, 0], "value": "1"},
//!     {"monomial": [0, 1], "value": {"num": [{"coeff": "-3/8", "powers": {"log(2)": 1}}]}}
//!   ],
//!   "basis": [{"log_of": "2", "branch": 0}],
//!   "denominator_N": 1,
//!   "asserted_independent": true
//! }
//! ```
//!
//! Coefficients are a rational string, `{"minpoly": [...], "approx": box}`
//! (integer coefficients from the constant term up, and a box isolating the
//! root), or a formal quotient `{"num": [...], "den": [...]}` of terms
//! `{"coeff", "powers"}`. Basis entries are `{"log_of", "branch", "name"?}`,
//! `{"two_pi_i_over": N}` or `{"formal": name}`, each with an optional
//! rational `"scale"`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algnum::{
    parse_decimal, AlgebraicNumber, BivariatePolynomial, BoxRecord, CInterval, ComplexBox, Exact,
    IntPolynomial, MPoly, Ring,
};
use crate::finite::DEFAULT_GUARD;
use crate::reduce::{
    enclose_symbols, log_symbol, ExpPolyEquation, FormalCoefficient, LogElement, LogKind,
    SymbolSource, TWO_PI_I,
};
use crate::{Error, Result};

/// Run parameters that are not part of the equation itself.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Common denominator `N` of the rational solutions sought.
    pub denominator_n: u64,
    /// Class translates `n_m`, in coordinates of the rescaled basis.
    pub class_translates: Vec<Vec<BigInt>>,
    pub precision_bits: u32,
    /// Largest number of candidates enumerated per branch.
    pub guard: u128,
    /// Coefficient bound for the independence screening.
    pub relation_coeff_bound: u64,
}

impl PipelineConfig {
    pub fn for_dim(dim: usize) -> Self {
        PipelineConfig {
            denominator_n: 1,
            class_translates: vec![vec![BigInt::zero(); dim]],
            precision_bits: 128,
            guard: DEFAULT_GUARD,
            relation_coeff_bound: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub equation: ExpPolyEquation,
    pub config: PipelineConfig,
}

impl Problem {
    pub fn new(equation: ExpPolyEquation) -> Self {
        let config = PipelineConfig::for_dim(equation.dim());
        Problem { equation, config }
    }

    /// Same configuration, new equation; class translates are reset when the
    /// dimension changes.
    pub fn with_equation(&self, equation: ExpPolyEquation) -> Self {
        let mut config = self.config.clone();
        if equation.dim() != self.equation.dim() {
            config.class_translates = vec![vec![BigInt::zero(); equation.dim()]];
        }
        Problem { equation, config }
    }
}

const PRECISION_RANGE: (u32, u32) = (32, 4096);
const TOP_KEYS: [&str; 8] = [
    "polynomial",
    "basis",
    "transcendental_values",
    "denominator_N",
    "class_translates",
    "asserted_independent",
    "precision_bits",
    "guards",
];

/// Collects violations with their location in the file.
struct Errors(Vec<String>);

impl Errors {
    fn push(&mut self, at: &str, msg: impl std::fmt::Display) {
        self.0.push(format!("{at}: {msg}"));
    }

    fn ok<T>(&mut self, at: &str, r: Result<T>) -> Option<T> {
        r.map_err(|e| self.push(at, e)).ok()
    }
}

fn integer(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn small_int(v: &Value, at: &str, errs: &mut Errors) -> Option<i64> {
    match integer(v).and_then(|n| i64::try_from(n).ok()) {
        Some(k) => Some(k),
        None => {
            errs.push(at, format!("expected an integer, found {v}"));
            None
        }
    }
}

fn rational(v: &Value, at: &str, errs: &mut Errors) -> Option<BigRational> {
    match v {
        Value::String(s) => errs.ok(at, parse_decimal(s)),
        Value::Number(n) if n.is_i64() => Some(BigRational::from_integer(n.as_i64()?.into())),
        _ => {
            errs.push(at, format!("expected a decimal string, found {v}"));
            None
        }
    }
}

fn box_record(v: &Value, at: &str, errs: &mut Errors, prec: u32) -> Option<ComplexBox> {
    let r: BoxRecord = match serde_json::from_value(v.clone()) {
        Ok(r) => r,
        Err(e) => {
            errs.push(at, format!("expected {{re, im, rad}}: {e}"));
            return None;
        }
    };
    errs.ok(at, ComplexBox::from_record(&r, prec))
}

/// A rational string or an algebraic record.
fn exact(v: &Value, at: &str, errs: &mut Errors, prec: u32) -> Option<Exact> {
    let Some(obj) = v.as_object() else {
        return rational(v, at, errs).map(Exact::Rational);
    };
    let (Some(mp), Some(approx)) = (obj.get("minpoly"), obj.get("approx")) else {
        errs.push(at, "algebraic value needs \"minpoly\" and \"approx\"");
        return None;
    };
    let coeffs: Option<Vec<BigInt>> = mp.as_array().and_then(|a| a.iter().map(integer).collect());
    let Some(coeffs) = coeffs else {
        errs.push(&format!("{at}.minpoly"), "expected a list of integers");
        return None;
    };
    let approx = box_record(approx, &format!("{at}.approx"), errs, prec)?;
    let a = errs.ok(at, AlgebraicNumber::from_poly_and_approx(&IntPolynomial::new(coeffs), &approx))?;
    Some(Exact::from_algebraic(a))
}

fn formal_terms(v: &Value, at: &str, errs: &mut Errors, prec: u32) -> Option<MPoly<Exact>> {
    let Some(list) = v.as_array() else {
        errs.push(at, "expected a list of {coeff, powers} terms");
        return None;
    };
    let mut acc = MPoly::zero();
    let mut ok = true;
    for (k, t) in list.iter().enumerate() {
        let here = format!("{at}[{k}]");
        let Some(c) = t.get("coeff").and_then(|c| exact(c, &format!("{here}.coeff"), errs, prec)) else {
            if t.get("coeff").is_none() {
                errs.push(&here, "missing \"coeff\"");
            }
            ok = false;
            continue;
        };
        let mut mono = BTreeMap::new();
        if let Some(p) = t.get("powers") {
            let Some(p) = p.as_object() else {
                errs.push(&format!("{here}.powers"), "expected a map from symbol to exponent");
                ok = false;
                continue;
            };
            for (s, e) in p {
                match e.as_u64().and_then(|e| u32::try_from(e).ok()) {
                    Some(e) if e > 0 => {
                        mono.insert(s.clone(), e);
                    }
                    Some(_) => {}
                    None => {
                        errs.push(&format!("{here}.powers.{s}"), "expected a nonnegative exponent");
                        ok = false;
                    }
                }
            }
        }
        match MPoly::from_terms([(mono, c)]).and_then(|m| acc.add(&m)) {
            Ok(s) => acc = s,
            Err(e) => {
                errs.push(&here, e);
                ok = false;
            }
        }
    }
    ok.then_some(acc)
}

fn coefficient(v: &Value, at: &str, errs: &mut Errors, prec: u32) -> Option<FormalCoefficient> {
    if let Some(obj) = v.as_object() {
        if obj.contains_key("num") {
            let num = formal_terms(&obj["num"], &format!("{at}.num"), errs, prec);
            let den = match obj.get("den") {
                Some(d) => formal_terms(d, &format!("{at}.den"), errs, prec),
                None => Some(MPoly::one()),
            };
            let (num, den) = (num?, den?);
            if den.is_zero() {
                errs.push(at, "zero denominator");
                return None;
            }
            return errs.ok(at, FormalCoefficient::new(num, den));
        }
    }
    exact(v, at, errs, prec).map(FormalCoefficient::exact)
}

fn basis_entry(v: &Value, k: usize, errs: &mut Errors, prec: u32) -> Option<LogElement> {
    let at = format!("basis[{k}]");
    let Some(obj) = v.as_object() else {
        errs.push(&at, "expected an object");
        return None;
    };
    let kinds: Vec<&str> = ["log_of", "two_pi_i_over", "formal"]
        .into_iter()
        .filter(|key| obj.contains_key(*key))
        .collect();
    if kinds.len() != 1 {
        errs.push(&at, "needs exactly one of log_of, two_pi_i_over, formal");
        return None;
    }
    let scale = match obj.get("scale") {
        Some(s) => {
            let q = rational(s, &format!("{at}.scale"), errs)?;
            if q.is_zero() {
                errs.push(&format!("{at}.scale"), "scale must be nonzero");
                return None;
            }
            q
        }
        None => BigRational::one(),
    };
    let entry = match kinds[0] {
        "log_of" => {
            let lambda = exact(&obj["log_of"], &format!("{at}.log_of"), errs, prec)?;
            if lambda.is_zero() {
                errs.push(&format!("{at}.log_of"), "logarithm of zero");
                return None;
            }
            let branch = match obj.get("branch") {
                Some(b) => small_int(b, &format!("{at}.branch"), errs)?,
                None => 0,
            };
            let name = match (obj.get("name").and_then(Value::as_str), lambda.as_rational()) {
                (Some(n), _) => n.to_string(),
                (None, Some(q)) => log_symbol(q),
                (None, None) => format!("log_b{}", k + 1),
            };
            let source = SymbolSource::PrincipalLog(lambda.clone());
            let e = errs.ok(&at, LogElement::log_of(lambda, branch, &name))?;
            if let Some(val) = obj.get("value") {
                let given = box_record(val, &format!("{at}.value"), errs, prec)?;
                let sources = BTreeMap::from([(name.clone(), source)]);
                let mut syms = errs.ok(&at, enclose_symbols(&sources, &BTreeMap::new(), prec))?;
                syms.insert(TWO_PI_I.into(), CInterval::two_pi_i(prec));
                let computed = errs.ok(&at, e.enclose(&syms, prec))?;
                if !computed.intersects(&given.to_cinterval()) {
                    errs.push(&format!("{at}.value"), "does not match the logarithm on the given branch");
                }
            }
            e
        }
        "two_pi_i_over" => {
            let n = small_int(&obj["two_pi_i_over"], &format!("{at}.two_pi_i_over"), errs)?;
            if n <= 0 {
                errs.push(&format!("{at}.two_pi_i_over"), "must be a positive integer");
                return None;
            }
            LogElement::two_pi_i_over(n)
        }
        _ => match obj["formal"].as_str() {
            Some(name) if !name.is_empty() => LogElement::formal(name),
            _ => {
                errs.push(&format!("{at}.formal"), "expected a symbol name");
                return None;
            }
        },
    };
    Some(entry.scaled(&scale))
}

/// Parse and validate a problem, reporting every violation found.
pub fn parse_problem_str(text: &str) -> Result<Problem> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidProblem(vec![format!("not valid JSON: {e}")]))?;
    let Some(top) = root.as_object() else {
        return Err(Error::InvalidProblem(vec!["top level must be an object".into()]));
    };
    let mut errs = Errors(Vec::new());
    for k in top.keys() {
        if !TOP_KEYS.contains(&k.as_str()) {
            errs.push(k, "unknown field");
        }
    }
    let prec = match top.get("precision_bits") {
        Some(v) => match small_int(v, "precision_bits", &mut errs) {
            Some(p) if (PRECISION_RANGE.0 as i64..=PRECISION_RANGE.1 as i64).contains(&p) => p as u32,
            Some(p) => {
                errs.push("precision_bits", format!("{p} outside {PRECISION_RANGE:?}"));
                128
            }
            None => 128,
        },
        None => 128,
    };

    let mut terms: BTreeMap<(u32, u32), FormalCoefficient> = BTreeMap::new();
    match top.get("polynomial").and_then(Value::as_array) {
        None => errs.push("polynomial", "missing or not a list"),
        Some(list) => {
            let mut seen = BTreeSet::new();
            for (k, t) in list.iter().enumerate() {
                let at = format!("polynomial[{k}]");
                let mono = t.get("monomial").and_then(Value::as_array).and_then(|m| {
                    (m.len() == 2)
                        .then(|| Some((u32::try_from(m[0].as_u64()?).ok()?, u32::try_from(m[1].as_u64()?).ok()?)))
                        .flatten()
                });
                let Some(mono) = mono else {
                    errs.push(&at, "\"monomial\" must be [i, j] with nonnegative integers");
                    continue;
                };
                if !seen.insert(mono) {
                    errs.push(&at, format!("duplicate monomial [{}, {}]", mono.0, mono.1));
                    continue;
                }
                let Some(v) = t.get("value") else {
                    errs.push(&at, "missing \"value\"");
                    continue;
                };
                if let Some(c) = coefficient(v, &format!("{at}.value"), &mut errs, prec) {
                    if !c.is_zero() {
                        terms.insert(mono, c);
                    }
                }
            }
            if terms.is_empty() && errs.0.iter().all(|e| !e.starts_with("polynomial")) {
                errs.push("polynomial", "zero polynomial");
            }
        }
    }

    let mut basis = Vec::new();
    match top.get("basis").and_then(Value::as_array) {
        None => errs.push("basis", "missing or not a list"),
        Some(list) if list.is_empty() => errs.push("basis", "must be nonempty"),
        Some(list) => {
            for (k, b) in list.iter().enumerate() {
                if let Some(e) = basis_entry(b, k, &mut errs, prec) {
                    basis.push(e);
                }
            }
        }
    }
    let dim = top
        .get("basis")
        .and_then(Value::as_array)
        .map_or(0, |b| b.len());

    let mut values = BTreeMap::new();
    if let Some(v) = top.get("transcendental_values") {
        match v.as_object() {
            None => errs.push("transcendental_values", "expected a map from symbol to box"),
            Some(m) => {
                for (name, b) in m {
                    if let Some(bx) = box_record(b, &format!("transcendental_values.{name}"), &mut errs, prec) {
                        values.insert(name.clone(), bx);
                    }
                }
            }
        }
    }

    let mut config = PipelineConfig::for_dim(dim);
    config.precision_bits = prec;
    if let Some(v) = top.get("denominator_N") {
        match small_int(v, "denominator_N", &mut errs) {
            Some(n) if n >= 1 => config.denominator_n = n as u64,
            Some(_) => errs.push("denominator_N", "must be at least 1"),
            None => {}
        }
    }
    if let Some(v) = top.get("class_translates") {
        match v.as_array() {
            None => errs.push("class_translates", "expected a list of integer vectors"),
            Some(list) => {
                let mut classes = Vec::new();
                for (k, c) in list.iter().enumerate() {
                    let at = format!("class_translates[{k}]");
                    match c.as_array().and_then(|a| a.iter().map(integer).collect::<Option<Vec<_>>>()) {
                        Some(vec) if vec.len() == dim => classes.push(vec),
                        Some(vec) => errs.push(&at, format!("has {} entries, basis has {dim}", vec.len())),
                        None => errs.push(&at, "expected a list of integers"),
                    }
                }
                if list.is_empty() {
                    errs.push("class_translates", "must be nonempty");
                } else if classes.len() == list.len() {
                    config.class_translates = classes;
                }
            }
        }
    }
    let asserted_independent = match top.get("asserted_independent") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(v) => {
            errs.push("asserted_independent", format!("expected a boolean, found {v}"));
            false
        }
    };
    if let Some(g) = top.get("guards") {
        match g.as_object() {
            None => errs.push("guards", "expected an object"),
            Some(g) => {
                for (k, v) in g {
                    let n = integer(v).and_then(|n| u64::try_from(n).ok()).filter(|n| *n >= 1);
                    match (k.as_str(), n) {
                        ("enumeration", Some(n)) => config.guard = u128::from(n),
                        ("relation_coeff_bound", Some(n)) => config.relation_coeff_bound = n,
                        ("enumeration" | "relation_coeff_bound", None) => {
                            errs.push(&format!("guards.{k}"), "expected a positive integer")
                        }
                        _ => errs.push(&format!("guards.{k}"), "unknown guard"),
                    }
                }
            }
        }
    }

    if !errs.0.is_empty() {
        return Err(Error::InvalidProblem(errs.0));
    }
    let p = BivariatePolynomial::from_terms(terms).map_err(|e| Error::InvalidProblem(vec![e.to_string()]))?;
    let equation = ExpPolyEquation::new(p, basis, values, asserted_independent).map_err(|e| match e {
        Error::InvalidProblem(v) => Error::InvalidProblem(v),
        e => Error::InvalidProblem(vec![e.to_string()]),
    })?;
    Ok(Problem { equation, config })
}

pub fn parse_problem(path: impl AsRef<Path>) -> Result<Problem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidProblem(vec![format!("{}: {e}", path.display())]))?;
    parse_problem_str(&text)
}

fn exact_json(c: &Exact) -> Value {
    match c {
        Exact::Rational(q) => Value::String(q.to_string()),
        Exact::Algebraic(a) => json!({
            "minpoly": a.minpoly().coeffs().iter().map(|k| Value::String(k.to_string())).collect::<Vec<_>>(),
            "approx": a.isolating_box().to_record(),
        }),
    }
}

fn terms_json(m: &MPoly<Exact>) -> Value {
    Value::Array(
        m.terms()
            .iter()
            .map(|(mono, c)| json!({"coeff": exact_json(c), "powers": mono}))
            .collect(),
    )
}

/// A value in file form: a rational string or an algebraic record.
pub fn parse_value(v: &Value, prec: u32) -> Result<Exact> {
    let mut errs = Errors(Vec::new());
    match exact(v, "value", &mut errs, prec) {
        Some(e) if errs.0.is_empty() => Ok(e),
        _ => Err(Error::InvalidProblem(errs.0)),
    }
}

/// A coefficient in file form.
pub fn coefficient_json(c: &FormalCoefficient) -> Value {
    if let Some(e) = c.as_exact() {
        return exact_json(&e);
    }
    let mut m = Map::new();
    m.insert("num".into(), terms_json(c.num()));
    if !c.is_polynomial() {
        m.insert("den".into(), terms_json(c.den()));
    }
    Value::Object(m)
}

fn basis_json(e: &LogElement) -> Value {
    let mut m = Map::new();
    let mut scale = e.scale.clone();
    match &e.kind {
        LogKind::Log { lambda, branch, symbol } => {
            m.insert("log_of".into(), exact_json(lambda));
            m.insert("branch".into(), json!(branch));
            if lambda.as_rational().map(log_symbol).as_deref() != Some(symbol.as_str()) {
                m.insert("name".into(), json!(symbol));
            }
        }
        LogKind::TwoPiI => {
            m.insert("two_pi_i_over".into(), Value::String(scale.denom().to_string()));
            scale = BigRational::from_integer(scale.numer().clone());
        }
        LogKind::Formal(name) => {
            m.insert("formal".into(), json!(name));
        }
    }
    if !scale.is_one() {
        m.insert("scale".into(), Value::String(scale.to_string()));
    }
    Value::Object(m)
}

/// The problem in file form; parsing the result gives back an equal problem.
pub fn problem_to_json(p: &Problem) -> Value {
    let eq = &p.equation;
    let cfg = &p.config;
    json!({
        "polynomial": eq.p.terms().iter().map(|((i, j), c)| json!({
            "monomial": [i, j],
            "value": coefficient_json(c),
        })).collect::<Vec<_>>(),
        "basis": eq.basis.iter().map(basis_json).collect::<Vec<_>>(),
        "transcendental_values": eq.transcendental_values.iter()
            .map(|(k, v)| (k.clone(), serde_json::to_value(v.to_record()).expect("plain record")))
            .collect::<Map<_, _>>(),
        "denominator_N": cfg.denominator_n,
        "class_translates": cfg.class_translates.iter()
            .map(|c| c.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "asserted_independent": eq.asserted_independent,
        "precision_bits": cfg.precision_bits,
        "guards": {
            "enumeration": cfg.guard.to_string(),
            "relation_coeff_bound": cfg.relation_coeff_bound,
        },
    })
}

pub fn problem_to_string(p: &Problem) -> String {
    serde_json::to_string_pretty(&problem_to_json(p)).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU38: &str = r#"{
        "polynomial": [
            {"monomial": [1, 0], "value": "1"},
            {"monomial": [0, 1], "value": {"num": [{"coeff": "-3/8", "powers": {"log(2)": 1}}]}}
        ],
        "basis": [{"log_of": "2", "branch": 0}],
        "asserted_independent": true
    }"#;

    #[test]
    fn parses_tau38() {
        let p = parse_problem_str(TAU38).unwrap();
        assert!(p.equation.warnings().is_empty());
        assert_eq!(p.config.denominator_n, 1);
        assert_eq!(p.config.class_translates, vec![vec![BigInt::zero()]]);
    }

    #[test]
    fn round_trip() {
        let p = parse_problem_str(TAU38).unwrap();
        let text = problem_to_string(&p);
        let q = parse_problem_str(&text).unwrap();
        assert_eq!(problem_to_string(&q), text);
        assert_eq!(q.equation.p, p.equation.p);
    }

    #[test]
    fn empty_polynomial() {
        let e = parse_problem_str(r#"{"polynomial": [], "basis": [{"log_of": "2"}]}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidProblem(ref v) if v.iter().any(|m| m.contains("zero polynomial"))));
    }

    #[test]
    fn collects_every_violation() {
        let text = r#"{
            "polynomial": [{"monomial": [1, 0], "value": "1"}, {"monomial": [1, 0], "value": "2"}],
            "basis": [{"log_of": "0"}, {"two_pi_i_over": -3}],
            "denominator_N": 0,
            "colour": "red"
        }"#;
        let Error::InvalidProblem(v) = parse_problem_str(text).unwrap_err() else {
            panic!()
        };
        for needle in ["duplicate monomial", "logarithm of zero", "positive integer", "at least 1", "unknown field"] {
            assert!(v.iter().any(|m| m.contains(needle)), "{needle} missing from {v:?}");
        }
    }

    #[test]
    fn branch_value_check() {
        let text = r#"{
            "polynomial": [{"monomial": [0, 1], "value": "1"}, {"monomial": [0, 0], "value": "-2"}],
            "basis": [{"log_of": "-1", "branch": 0, "value": {"re": "0", "im": "-3.14159", "rad": "0.001"}}]
        }"#;
        let Error::InvalidProblem(v) = parse_problem_str(text).unwrap_err() else {
            panic!()
        };
        assert!(v[0].contains("does not match"));
    }

    #[test]
    fn missing_formal_value() {
        let text = r#"{
            "polynomial": [{"monomial": [1, 0], "value": "1"}, {"monomial": [0, 1], "value": "-1"}],
            "basis": [{"formal": "t"}]
        }"#;
        assert!(matches!(parse_problem_str(text), Err(Error::InvalidProblem(_))));
    }
}
