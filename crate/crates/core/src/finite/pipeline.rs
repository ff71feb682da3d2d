//! The full chain: rescale, restrict to the algebraic sublattice, translate
//! by classes, split on `2πi`, specialize, bound, enumerate and certify.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::bound::{compute_bound, enumerate_candidates, BoundInputs, BoundRecord};
use super::candidate::{CandidateReport, CandidateStatus, CandidateTester, PrecisionPolicy};
use crate::algnum::{factor, BivariatePolynomial, Dyadic, Exact, IntPolynomial, Ring, Round};
use crate::height::{a1_constant, a4_bound, AffineRecord, Direction};
use crate::mullattice::{a3_constant, find_verified_relations, rref, RelationCandidate, SymbolicValue};
use crate::problem::{PipelineConfig, Problem};
use crate::reduce::{
    extract_algebraic_log_sublattice, rescale_denominator, specialize_formal, specialize_partial,
    split_two_pi_i, translate_by_vector, ExpPolyEquation, FormalCoefficient, LogElement, LogKind,
    Sublattice, TWO_PI_I,
};
use crate::{Error, Result};

/// Attempts of the specialization schedule before giving up.
pub const SIGMA_RETRIES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Finite,
    NotApplicable { hypothesis: String },
}

/// How a branch produced its candidate list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchMethod {
    /// Ball of the radius solved from the height inequality.
    HeightBound,
    /// The specialization involves only `x`: roots matched against the lattice.
    RootMatching,
    /// The specialization is a nonzero constant: no candidates.
    ConstantSpecialization,
    /// Only the `2πi` coordinate remains.
    FirstCoordinateOnly,
    /// The branch stopped before choosing a method.
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchConstants {
    #[serde(flatten)]
    pub bound: BoundRecord,
    pub a1: AffineRecord,
    pub a4: AffineRecord,
    #[serde(skip)]
    pub inputs: BoundInputs,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchCertificate {
    pub class_index: usize,
    /// Residue of the `2πi` coordinate when the branch came from a split.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<u64>,
    pub method: BranchMethod,
    pub sigma: BTreeMap<String, String>,
    #[serde(rename = "bound_B")]
    pub bound_b: Option<u64>,
    pub constants: Option<BranchConstants>,
    pub candidates_total: u128,
    /// Every tested vector, in coordinates of the rescaled basis.
    pub candidates: Vec<CandidateReport>,
    pub notes: Vec<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    /// Integer solution of the rescaled equation.
    #[serde(with = "crate::finite::serde_ints")]
    pub vector: Vec<BigInt>,
    /// The rational solution `vector / N` of the input equation.
    pub rational: Vec<String>,
    #[serde(flatten)]
    pub status: CandidateStatus,
    pub branch: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessCertificate {
    #[serde(rename = "bound_B")]
    pub bound_b: u64,
    pub constants: Option<BoundRecord>,
    pub candidates_total: u128,
    /// Exactly verified and probable candidates of all branches.
    pub solutions: Vec<SolutionRecord>,
    pub exceptional_notes: Vec<String>,
    pub warnings: Vec<String>,
    pub branches: Vec<BranchCertificate>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl FinitenessCertificate {
    pub fn has_probable(&self) -> bool {
        self.solutions
            .iter()
            .any(|s| matches!(s.status, CandidateStatus::Probable { .. }))
    }

    /// Exactly verified solutions, as integer vectors of the rescaled problem.
    pub fn verified(&self) -> Vec<Vec<BigInt>> {
        self.solutions
            .iter()
            .filter(|s| s.status == CandidateStatus::ExactlyVerified)
            .map(|s| s.vector.clone())
            .collect()
    }

    fn not_applicable(hypothesis: String, warnings: Vec<String>) -> Self {
        FinitenessCertificate {
            bound_b: 0,
            constants: None,
            candidates_total: 0,
            solutions: Vec::new(),
            exceptional_notes: Vec::new(),
            warnings,
            branches: Vec::new(),
            verdict: Verdict::NotApplicable { hypothesis },
        }
    }
}

enum Halt {
    Fail(Error),
    NotApplicable(String),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

type Step<T> = std::result::Result<T, Halt>;

fn not_applicable<T>(why: impl Into<String>) -> Step<T> {
    Err(Halt::NotApplicable(why.into()))
}

struct Job {
    class_index: usize,
    class: Vec<BigInt>,
    residue: Option<u64>,
    split_n: BigInt,
    eq: ExpPolyEquation,
}

impl Job {
    /// Branch coordinates to coordinates of the rescaled basis.
    fn lift(&self, sub: &Sublattice, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        if let Some(s) = self.residue {
            v[0] = &self.split_n * &v[0] + BigInt::from(s);
        }
        sub.embed(&v)
            .into_iter()
            .zip(&self.class)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// Run the finiteness engine on a problem.
pub fn run_pipeline(problem: &Problem) -> Result<FinitenessCertificate> {
    let eq = &problem.equation;
    let cfg = &problem.config;
    let mut warnings = eq.warnings();
    if eq.asserted_independent {
        match screen_relations(eq, cfg) {
            Ok(Some(why)) => return Ok(FinitenessCertificate::not_applicable(why, warnings)),
            Ok(None) => {}
            Err(e) => warnings.push(format!("independence screening skipped: {e}")),
        }
    }
    let rescaled = rescale_denominator(eq, cfg.denominator_n)?;
    let sub = extract_algebraic_log_sublattice(&rescaled)?;
    if sub.c.is_empty() {
        return Ok(FinitenessCertificate::not_applicable(
            "no algebraic-exponential sublattice; finiteness engine not applicable".into(),
            warnings,
        ));
    }
    let mut exceptional_notes = Vec::new();
    if sub.c.len() < rescaled.dim() {
        exceptional_notes.push("solutions outside supplied classes: not enumerated".to_string());
    }
    let mut jobs = Vec::new();
    for (ci, class) in cfg.class_translates.iter().enumerate() {
        if class.len() != rescaled.dim() {
            return Err(Error::invalid(format!(
                "class translate {ci} has {} entries, basis has {}",
                class.len(),
                rescaled.dim()
            )));
        }
        let r = translate_by_vector(&rescaled, class, sub.c.clone())?;
        if sub.has_two_pi_i() {
            let split_n = sub.c[0].scale.denom().clone();
            for (s, e) in split_two_pi_i(&r)?.into_iter().enumerate() {
                jobs.push(Job {
                    class_index: ci,
                    class: class.clone(),
                    residue: Some(s as u64),
                    split_n: split_n.clone(),
                    eq: e,
                });
            }
        } else {
            jobs.push(Job {
                class_index: ci,
                class: class.clone(),
                residue: None,
                split_n: BigInt::one(),
                eq: r,
            });
        }
    }
    let branches = jobs
        .par_iter()
        .map(|j| run_branch(j, &sub, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(branches, cfg, warnings, exceptional_notes))
}

fn merge(
    branches: Vec<BranchCertificate>,
    cfg: &PipelineConfig,
    warnings: Vec<String>,
    mut exceptional_notes: Vec<String>,
) -> FinitenessCertificate {
    let n = BigInt::from(cfg.denominator_n);
    let mut solutions = Vec::new();
    for (bi, b) in branches.iter().enumerate() {
        for c in &b.candidates {
            if c.all_coefficients_vanish {
                exceptional_notes.push(format!(
                    "all exponential-sum coefficients vanish at {:?}",
                    c.vector.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ));
            }
            if c.status.is_solution_like() {
                solutions.push(SolutionRecord {
                    vector: c.vector.clone(),
                    rational: c
                        .vector
                        .iter()
                        .map(|x| BigRational::new(x.clone(), n.clone()).to_string())
                        .collect(),
                    status: c.status.clone(),
                    branch: bi,
                });
            }
        }
        exceptional_notes.extend(b.notes.iter().cloned());
    }
    let top = branches
        .iter()
        .filter(|b| b.bound_b.is_some())
        .max_by_key(|b| b.bound_b);
    let verdict = branches
        .iter()
        .map(|b| b.verdict.clone())
        .find(|v| *v != Verdict::Finite)
        .unwrap_or(Verdict::Finite);
    FinitenessCertificate {
        bound_b: top.and_then(|b| b.bound_b).unwrap_or(0),
        constants: top.and_then(|b| b.constants.as_ref().map(|c| c.bound.clone())),
        candidates_total: branches.iter().map(|b| b.candidates_total).sum(),
        solutions,
        exceptional_notes,
        warnings,
        branches,
        verdict,
    }
}

/// `Some(reason)` if the basis admits an integer relation.
/// Verified and numeric integer relations among the basis entries.
pub fn basis_relations(
    eq: &ExpPolyEquation,
    coeff_bound: u64,
    prec: u32,
) -> Result<Vec<RelationCandidate>> {
    if eq.dim() < 2 {
        return Ok(Vec::new());
    }
    let values = eq
        .basis
        .iter()
        .map(|b| match &b.kind {
            LogKind::Log { lambda, branch, .. } => Ok(SymbolicValue::Log {
                lambda: lambda.clone(),
                branch: *branch,
            }),
            LogKind::TwoPiI => Ok(SymbolicValue::TwoPiI(BigRational::one())),
            LogKind::Formal(name) => eq
                .transcendental_values
                .get(name)
                .cloned()
                .map(SymbolicValue::Opaque)
                .ok_or_else(|| Error::invalid(format!("no value for {name}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    find_verified_relations(&values, &BigInt::from(coeff_bound), prec)
}

fn screen_relations(eq: &ExpPolyEquation, cfg: &PipelineConfig) -> Result<Option<String>> {
    let found = basis_relations(eq, cfg.relation_coeff_bound, cfg.precision_bits)?;
    Ok(found.first().map(|r| {
        format!(
            "basis entries are ℚ-linearly dependent: relation {:?} ({:?})",
            r.coefficients.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            r.status
        )
    }))
}

fn run_branch(job: &Job, sub: &Sublattice, cfg: &PipelineConfig) -> Result<BranchCertificate> {
    let mut cert = BranchCertificate {
        class_index: job.class_index,
        residue: job.residue,
        method: BranchMethod::Unresolved,
        sigma: BTreeMap::new(),
        bound_b: None,
        constants: None,
        candidates_total: 0,
        candidates: Vec::new(),
        notes: Vec::new(),
        verdict: Verdict::Finite,
    };
    match branch_body(job, sub, cfg, &mut cert) {
        Ok(()) => Ok(cert),
        Err(Halt::NotApplicable(hypothesis)) => {
            cert.verdict = Verdict::NotApplicable { hypothesis };
            Ok(cert)
        }
        Err(Halt::Fail(e)) => Err(e),
    }
}

fn branch_body(
    job: &Job,
    sub: &Sublattice,
    cfg: &PipelineConfig,
    cert: &mut BranchCertificate,
) -> Step<()> {
    let tester = CandidateTester::new(&job.eq, PrecisionPolicy::new(cfg.precision_bits))?;
    let vectors = if job.residue.is_some() {
        let fixed = BTreeMap::from([(TWO_PI_I.to_string(), Exact::int(0))]);
        let reduced = match specialize_partial(&job.eq.p, &fixed) {
            Ok((r, _)) => r,
            Err(Error::SpecializationAnnihilates) => {
                return not_applicable("specializing 2πi to 0 annihilates the equation")
            }
            Err(e) => return Err(e.into()),
        };
        let rest = &job.eq.basis[1..];
        let tails = if rest.is_empty() {
            cert.method = BranchMethod::FirstCoordinateOnly;
            vec![Vec::new()]
        } else {
            reduced_candidates(&reduced, rest, &fixed, cfg, cert)?
        };
        let recovered = tails
            .par_iter()
            .map(|t| recover_first_coordinate(&job.eq, t, &tester, cfg.guard))
            .collect::<Vec<_>>();
        let mut all = Vec::new();
        for r in recovered {
            all.extend(r?);
        }
        all
    } else {
        reduced_candidates(&job.eq.p, &job.eq.basis, &BTreeMap::new(), cfg, cert)?
    };
    cert.candidates_total = vectors.len() as u128;
    let reports = vectors
        .par_iter()
        .map(|v| tester.test(v))
        .collect::<Result<Vec<_>>>()?;
    cert.candidates = reports
        .into_iter()
        .map(|mut r| {
            r.vector = job.lift(sub, &r.vector);
            r
        })
        .collect();
    Ok(())
}

/// Candidates in the coordinates of `c` for `p(n·c, exp(n·c)) = 0`, where
/// `fixed` pins symbols (`2πi ↦ 0`) and the rest follow the retry schedule.
fn reduced_candidates(
    p: &BivariatePolynomial<FormalCoefficient>,
    c: &[LogElement],
    fixed: &BTreeMap<String, Exact>,
    cfg: &PipelineConfig,
    cert: &mut BranchCertificate,
) -> Step<Vec<Vec<BigInt>>> {
    let prec = cfg.precision_bits;
    let mut symbols: BTreeSet<String> = BTreeSet::new();
    for coeff in p.terms().values() {
        symbols.extend(coeff.symbols());
    }
    let forms = c
        .iter()
        .map(|e| Ok(FormalCoefficient::from_poly(e.symbolic()?)))
        .collect::<Result<Vec<_>>>()?;
    for f in &forms {
        symbols.extend(f.symbols());
    }
    let free: Vec<String> = symbols
        .into_iter()
        .filter(|s| !fixed.contains_key(s))
        .collect();
    let mut matcher = RootMatcher::new(c.len());
    for attempt in 0..SIGMA_RETRIES {
        let mut sigma = fixed.clone();
        for (j, s) in free.iter().enumerate() {
            sigma.insert(s.clone(), Exact::int((attempt + j + 1) as i64));
        }
        let (rs, flags) = match specialize_formal(p, &sigma) {
            Ok(v) => v,
            Err(Error::SpecializationAnnihilates) => continue,
            Err(e) => return Err(e.into()),
        };
        let sc = match forms.iter().map(|f| f.specialize(&sigma)).collect::<Result<Vec<_>>>() {
            Ok(v) if v.iter().all(|x| !x.is_zero()) => v,
            Ok(_) | Err(Error::DivisionByZero) => continue,
            Err(e) => return Err(e.into()),
        };
        let record: BTreeMap<String, String> =
            sigma.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
        if !flags.dx_nonzero && !flags.dy_nonzero {
            cert.method = BranchMethod::ConstantSpecialization;
            cert.sigma = record;
            return Ok(Vec::new());
        }
        if flags.dy_nonzero {
            let a4 = a4_bound(&rs, Direction::YFromX, prec)?;
            if !a4.notes.is_empty() && !has_constant_slice(&rs) {
                cert.notes.push(format!("σ attempt {attempt}: {}", a4.notes.join("; ")));
                continue;
            }
            let a1 = a1_constant(&sc, prec)?;
            let a3 = exp_a3(c, prec)?;
            let chain = a1.then(&a4);
            let inputs = BoundInputs::new(a3, chain.slope.clone(), chain.offset.clone());
            let b = compute_bound(&inputs)?;
            cert.method = BranchMethod::HeightBound;
            cert.sigma = record;
            cert.bound_b = Some(b);
            cert.constants = Some(BranchConstants {
                bound: inputs.to_record(),
                a1: a1.to_record(),
                a4: a4.to_record(),
                inputs,
            });
            return Ok(enumerate_candidates(c.len(), b, cfg.guard)?.collect());
        }
        if let Some(found) = matcher.offer(&rs, &sc)? {
            cert.method = BranchMethod::RootMatching;
            cert.sigma = record;
            return Ok(found);
        }
    }
    not_applicable(format!(
        "specialization degenerate after {SIGMA_RETRIES} retries"
    ))
}

/// Some `y`-coefficient of `f` is a nonzero constant, so no value of `x`
/// kills every coefficient.
fn has_constant_slice(f: &BivariatePolynomial<Exact>) -> bool {
    f.y_slices()
        .values()
        .any(|s| s.len() == 1 && s.contains_key(&0))
}

/// Certified lower bound for `a₃(exp(c))`.
///
/// With `exp(c_k) = λ_k^{s_k}` (up to roots of unity) and `D` the common
/// denominator of the `s_k`, `h(exp(n·c)) = h(∏ |λ_k|^{D·s_k·n_k}) / D`.
fn exp_a3(c: &[LogElement], prec: u32) -> Step<Dyadic> {
    let d = c
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.scale.denom()));
    let mut gamma = Vec::with_capacity(c.len());
    for e in c {
        let LogKind::Log { lambda, .. } = &e.kind else {
            return not_applicable("a₃ needs logarithms of algebraic numbers");
        };
        let Some(q) = lambda.as_rational() else {
            return not_applicable("a₃ is only available for rational exponential values");
        };
        let k = (&e.scale * BigRational::from_integer(d.clone())).to_integer();
        let k: i32 = k
            .to_i32()
            .ok_or_else(|| Halt::NotApplicable("exponent too large for a₃".into()))?;
        gamma.push(num_traits::pow::Pow::pow(q.abs(), k));
    }
    match a3_constant(&gamma, prec) {
        Ok(b) => Ok(b.lower.div(&Dyadic::from_int(d), 64, Round::Down)),
        Err(Error::DependenceDetected(m)) => {
            not_applicable(format!("exp(c) is multiplicatively dependent: relation {m:?}"))
        }
        Err(Error::GuardExceeded { count, guard }) => not_applicable(format!(
            "a₃ handles at most {guard} exponentials, got {count}"
        )),
        Err(e) => Err(e.into()),
    }
}

/// Collects `x`-only specializations `g_j` until the values `σ_j(c)` span
/// the space, then solves `σ_j(c)·n = ρ_j` over all rational roots `ρ_j`.
struct RootMatcher {
    dim: usize,
    rows: Vec<Vec<BigRational>>,
    roots: Vec<Vec<BigRational>>,
}

impl RootMatcher {
    fn new(dim: usize) -> Self {
        RootMatcher {
            dim,
            rows: Vec::new(),
            roots: Vec::new(),
        }
    }

    fn offer(
        &mut self,
        g: &BivariatePolynomial<Exact>,
        sc: &[Exact],
    ) -> Step<Option<Vec<Vec<BigInt>>>> {
        let Some(row) = sc
            .iter()
            .map(|x| x.as_rational().cloned())
            .collect::<Option<Vec<_>>>()
        else {
            return not_applicable("root matching needs rational specializations of c");
        };
        let mut trial = self.rows.clone();
        trial.push(row.clone());
        if crate::mullattice::rank(&trial, self.dim) <= self.rows.len() {
            return Ok(None);
        }
        self.rows.push(row);
        self.roots.push(rational_roots(g)?);
        if self.rows.len() < self.dim {
            return Ok(None);
        }
        let mut found = BTreeSet::new();
        let mut choice = vec![0usize; self.dim];
        if self.roots.iter().any(|r| r.is_empty()) {
            return Ok(Some(Vec::new()));
        }
        loop {
            let mut aug: Vec<Vec<BigRational>> = self
                .rows
                .iter()
                .zip(&choice)
                .zip(&self.roots)
                .map(|((row, &k), rs)| {
                    let mut r = row.clone();
                    r.push(rs[k].clone());
                    r
                })
                .collect();
            rref(&mut aug, self.dim);
            let sol: Vec<BigRational> = aug.iter().map(|r| r[self.dim].clone()).collect();
            if sol.iter().all(|q| q.is_integer()) {
                found.insert(sol.iter().map(|q| q.to_integer()).collect::<Vec<_>>());
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    let mut out: Vec<Vec<BigInt>> = found.into_iter().collect();
                    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<BigInt>(), v.clone()));
                    return Ok(Some(out));
                }
                choice[i] += 1;
                if choice[i] < self.roots[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

fn rational_roots(g: &BivariatePolynomial<Exact>) -> Step<Vec<BigRational>> {
    let deg = g.degree_x() as usize;
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for ((i, _), v) in g.terms() {
        let Some(q) = v.as_rational() else {
            return not_applicable("root matching needs rational coefficients");
        };
        coeffs[*i as usize] = q.clone();
    }
    let (_, factors) = factor(&IntPolynomial::from_rationals(&coeffs));
    Ok(factors
        .into_iter()
        .filter(|(f, _)| f.degree() == 1)
        .map(|(f, _)| BigRational::new(-f.coeff(0), f.coeff(1)))
        .collect())
}

/// Integer `X` with `r(a·2πi·X + n′·c′, exp(n′·c′)) = 0`, as full vectors
/// `(X, n′)`; the range comes from Cauchy's root bound.
fn recover_first_coordinate(
    eq: &ExpPolyEquation,
    tail: &[BigInt],
    tester: &CandidateTester,
    guard: u128,
) -> Step<Vec<Vec<BigInt>>> {
    let mut full = vec![BigInt::zero()];
    full.extend_from_slice(tail);
    let exps = eq.exp_values()?;
    let x0 = eq.x_value(&full)?;
    let y0 = eq.y_value(&full, &exps)?;
    let q = eq.p.affine_substitute(&x0, &y0)?;
    let step = FormalCoefficient::from_poly(eq.basis[0].symbolic()?);
    let mut h: BTreeMap<u32, FormalCoefficient> = BTreeMap::new();
    for ((i, _), c) in q.terms() {
        let e = h.entry(*i).or_insert_with(FormalCoefficient::zero);
        *e = e.add(c)?;
    }
    let mut nonzero = BTreeMap::new();
    for (i, c) in h {
        if !c.is_zero() {
            nonzero.insert(i, c.mul(&Ring::pow(&step, i)?)?);
        }
    }
    let Some((&d, lead)) = nonzero.iter().next_back() else {
        return not_applicable(format!(
            "the equation in the 2πi coordinate vanishes identically at n′ = {tail:?}"
        ));
    };
    if d == 0 {
        return Ok(Vec::new());
    }
    let Some((p, lead)) = tester.certify_nonzero(lead)? else {
        return not_applicable(format!(
            "leading coefficient in the 2πi coordinate not certified nonzero at n′ = {tail:?}"
        ));
    };
    let lead_lo = lead.abs(p).lo().clone();
    let mut ratio = Dyadic::zero();
    for (i, c) in &nonzero {
        if *i < d {
            let hi = tester.enclose_finest(c)?.abs(p).hi().clone();
            ratio = Dyadic::max(&ratio, &hi.div(&lead_lo, 64, Round::Up));
        }
    }
    let r = (&ratio + &Dyadic::one()).ceil();
    let count = (&r * BigInt::from(2) + BigInt::one()).to_u128().unwrap_or(u128::MAX);
    if count > guard {
        return Err(Error::GuardExceeded { count, guard }.into());
    }
    let r = r.to_i64().expect("bounded by guard");
    Ok((-r..=r)
        .map(|x| {
            let mut v = full.clone();
            v[0] = BigInt::from(x);
            v
        })
        .collect())
}
