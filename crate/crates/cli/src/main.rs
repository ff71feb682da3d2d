//! `pexp`: command-line front end for the polynomial-exponential toolkit.
//!
//! Structured JSON goes to stdout (or `--out`), human summaries to stderr.
//! Exit codes: 0 success, 2 invalid input, 3 precision exhausted or
//! probable statuses remain, 4 guard exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{emit_error, emit_report, Failure};

#[derive(Parser, Debug)]
#[command(name = "pexp", version, about = "Heights, reductions and finiteness certificates for p(z, exp z) = 0")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Working precision in bits (32..=4096); overrides the problem file.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision: Option<u32>,
    /// Largest number of candidates enumerated per branch.
    #[arg(long, global = true, value_name = "N")]
    pub guard: Option<u128>,
    /// Write the primary output here instead of embedding it in the report.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ValueSource {
    /// A rational number such as `2/3` or `-0.25`.
    #[arg(long, value_name = "P/Q")]
    pub rational: Option<String>,
    /// Integer polynomial coefficients, constant term first (`-1,-1,1` is x² − x − 1).
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Use the logarithm arguments of the problem's basis.
    #[arg(long, value_name = "PATH")]
    pub problem: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct RationalList {
    /// Comma-separated nonzero rationals.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub rationals: Option<String>,
    /// Use the rational logarithm arguments of the problem's basis.
    #[arg(long, value_name = "PATH")]
    pub problem: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Certified absolute logarithmic Weil height.
    Height(ValueSource),
    /// Certified Mahler measure of an integer polynomial.
    Mahler(ValueSource),
    /// Certified lower bound a₃ with h(γ^m) ≥ a₃·|m|₁.
    A3(RationalList),
    /// Decide multiplicative independence of rationals.
    Indep(RationalList),
    /// Screen basis entries (or logs of rationals) for integer relations.
    Relations {
        #[command(flatten)]
        source: RationalList,
        /// Largest absolute relation coefficient searched.
        #[arg(long, value_name = "N")]
        coeff_bound: Option<u64>,
    },
    /// Expand the equation as a sum of exponential terms.
    Expand {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
    },
    /// Divide the basis by N so rational solutions become integer ones.
    Rescale {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
        /// Defaults to the file's denominator_N.
        #[arg(long, value_name = "N")]
        denominator: Option<u64>,
    },
    /// Split on the residue of the leading 2πi coordinate.
    #[command(name = "split2pi")]
    Split2pi {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
    },
    /// Substitute exact values for symbols of the coefficients.
    Specialize {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
        /// `NAME=VALUE` with a rational value; repeatable.
        #[arg(long = "assign", value_name = "NAME=VALUE", required = true)]
        assign: Vec<String>,
    },
    /// Translate the solution set by an integer vector.
    Translate {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
        /// Comma-separated integer vector in basis coordinates.
        #[arg(long, value_name = "VECTOR", allow_hyphen_values = true)]
        class: String,
    },
    /// Largest B with a₃·B ≤ A·log B + C.
    Bound {
        #[arg(long, value_name = "DECIMAL")]
        a3: String,
        #[arg(long = "slope", value_name = "DECIMAL")]
        slope: String,
        #[arg(long = "offset", value_name = "DECIMAL", allow_hyphen_values = true)]
        offset: String,
    },
    /// List the integer vectors with |n|₁ ≤ B.
    Enumerate {
        #[arg(long, value_name = "D")]
        dim: usize,
        #[arg(long, value_name = "B")]
        bound: u64,
    },
    /// Run the full reduction and finiteness pipeline.
    Pipeline {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
    },
    /// Count (and locate) complex zeros of p(z, e^z).
    #[command(name = "count-roots")]
    CountRoots {
        #[arg(long, value_name = "PATH")]
        problem: PathBuf,
        /// Rectangle `re0,im0,re1,im1`.
        #[arg(long, value_name = "RECT", allow_hyphen_values = true, required_unless_present = "radii")]
        rect: Option<String>,
        /// Half-sides of centred squares, for growth of the count.
        #[arg(long, value_name = "LIST")]
        radii: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Height(_) => "height",
            Command::Mahler(_) => "mahler",
            Command::A3(_) => "a3",
            Command::Indep(_) => "indep",
            Command::Relations { .. } => "relations",
            Command::Expand { .. } => "expand",
            Command::Rescale { .. } => "rescale",
            Command::Split2pi { .. } => "split2pi",
            Command::Specialize { .. } => "specialize",
            Command::Translate { .. } => "translate",
            Command::Bound { .. } => "bound",
            Command::Enumerate { .. } => "enumerate",
            Command::Pipeline { .. } => "pipeline",
            Command::CountRoots { .. } => "count-roots",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return emit_error(None, &Failure::usage(e.to_string()));
        }
    };
    let started = Instant::now();
    let name = cli.command.name();
    let code = match commands::dispatch(&cli) {
        Ok(outcome) => emit_report(name, &cli, outcome),
        Err(f) => emit_error(Some(name), &f),
    };
    eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
    code
}
