use std::path::Path;
use std::process::ExitCode;

use pexp_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Cli;

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_GUARD: u8 = 4;

/// What a command produced.
pub struct Outcome {
    /// Primary output: a problem file, certificate or record.
    pub output: Value,
    /// Several files for `--out`, written as `stem.0.ext`, `stem.1.ext`, …
    pub split_outputs: Option<Vec<Value>>,
    pub details: Option<Value>,
    pub warnings: Vec<String>,
    pub precision_escalations: Vec<Value>,
    /// Files whose contents enter the input digest.
    pub inputs: Vec<String>,
    pub summary: String,
    pub exit: u8,
}

impl Outcome {
    pub fn new(output: Value, summary: impl Into<String>) -> Self {
        Outcome {
            output,
            split_outputs: None,
            details: None,
            warnings: Vec::new(),
            precision_escalations: Vec::new(),
            inputs: Vec::new(),
            summary: summary.into(),
            exit: 0,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    inputs_digest: String,
    output: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
    precision_escalations: Vec<Value>,
    warnings: Vec<String>,
}

/// A failed run: an error kind, a message and optional structured details.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
    pub exit: u8,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure {
            kind: "usage",
            message,
            details: Value::Null,
            exit: EXIT_INVALID,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            kind: "invalid_argument",
            message: message.into(),
            details: Value::Null,
            exit: EXIT_INVALID,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            kind: "io",
            message: format!("{}: {e}", path.display()),
            details: Value::Null,
            exit: EXIT_INVALID,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (kind, details, exit) = match &e {
            Error::PrecisionExhausted { bits, context } => (
                "precision_exhausted",
                json!({"bits": bits, "context": context}),
                EXIT_PRECISION,
            ),
            Error::BoundaryZeroSuspected(at) => ("boundary_zero_suspected", json!({"at": at}), EXIT_PRECISION),
            Error::GuardExceeded { count, guard } => (
                "guard_exceeded",
                json!({"count": count.to_string(), "guard": guard.to_string()}),
                EXIT_GUARD,
            ),
            Error::InvalidProblem(v) => ("invalid_problem", json!({"violations": v}), EXIT_INVALID),
            Error::DependenceDetected(m) => ("dependence_detected", json!({"relation": m}), EXIT_INVALID),
            Error::DivisionByZero => ("division_by_zero", Value::Null, EXIT_INVALID),
            Error::DegreeGuardExceeded { degree, cap } => (
                "degree_guard_exceeded",
                json!({"degree": degree, "cap": cap}),
                EXIT_GUARD,
            ),
            Error::ZeroPolynomial => ("zero_polynomial", Value::Null, EXIT_INVALID),
            Error::InvalidArgument(_) => ("invalid_argument", Value::Null, EXIT_INVALID),
            Error::DirectionDegenerate(_) => ("direction_degenerate", Value::Null, EXIT_INVALID),
            Error::SpecializationAnnihilates => ("specialization_annihilates", Value::Null, EXIT_INVALID),
        };
        Failure {
            kind,
            message,
            details,
            exit,
        }
    }
}

fn digest(cli_args: &[String], files: &[String]) -> String {
    let mut h = Sha256::new();
    for a in cli_args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for f in files {
        h.update([1]);
        h.update(f.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// `out.json` → `out.1.json`.
fn numbered(path: &Path, k: usize) -> std::path::PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{k}"),
    };
    path.with_file_name(name)
}

pub fn emit_report(command: &str, cli: &Cli, outcome: Outcome) -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut output = outcome.output;
    if let Some(path) = &cli.global.out {
        let writes = match outcome.split_outputs {
            Some(parts) => parts.into_iter().enumerate().map(|(k, v)| (numbered(path, k), v)).collect(),
            None => vec![(path.clone(), output.clone())],
        };
        let mut written = Vec::new();
        for (p, v) in writes {
            if let Err(e) = std::fs::write(&p, pretty(&v)) {
                return emit_error(Some(command), &Failure::io(&p, e));
            }
            written.push(p.display().to_string());
        }
        output = json!({"written": written});
    }
    let report = RunReport {
        command,
        inputs_digest: digest(&args, &outcome.inputs),
        output,
        details: outcome.details,
        precision_escalations: outcome.precision_escalations,
        warnings: outcome.warnings,
    };
    print!("{}", pretty(&report));
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("{}", outcome.summary);
    ExitCode::from(outcome.exit)
}

pub fn emit_error(command: Option<&str>, f: &Failure) -> ExitCode {
    let record = json!({
        "command": command,
        "error": {"kind": f.kind, "message": f.message, "details": f.details},
        "exit_code": f.exit,
    });
    print!("{}", pretty(&record));
    if f.kind != "usage" {
        eprintln!("error: {}", f.message);
    }
    ExitCode::from(f.exit)
}
