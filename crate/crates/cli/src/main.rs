//! `ncindex`: batch driver for the verification suites and index
//! computations. Every command prints (or `--emit`s) one JSON report.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 hypothesis violation,
//! 3 I/O or schema error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncindex::Error;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ncindex", version, about = "Cyclic cocycles, JLO brackets and index pairings at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Exact,
    Quadrature,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure of the universal even cocycle, its growth class and the
    /// simplex identity suite.
    VerifySimplex {
        #[arg(long, default_value_t = 8)]
        max_even_degree: usize,
        /// Prefix length of the growth classification.
        #[arg(long, default_value_t = 40)]
        terms: usize,
        /// Double the first coefficient of φ_{2k} before verifying.
        #[arg(long, value_name = "K")]
        mutate: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Growth of a sequence (or of the universal cocycle norms) against a
    /// comparison sequence.
    GrowthClassify {
        /// JSON `{ "x": profile|generator, "y": profile|generator? }`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        terms: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0])]
        radii: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// A JLO bracket or Chern component on named algebra elements.
    Jlo {
        #[arg(long)]
        module: PathBuf,
        /// Algebra element names a₀,…,a_n.
        #[arg(long, value_delimiter = ',', required = true)]
        args: Vec<String>,
        /// Replace a₁,…,a_n by [D, a_i].
        #[arg(long)]
        chern: bool,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Itemised even index pairing of the universal cocycle with [p].
    EvenIndex {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value = "p")]
        projection: String,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        /// Also run the fully expanded cup evaluation through this degree.
        #[arg(long)]
        general: Option<usize>,
        /// Mode of the JLO cross-check pairing.
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Spectral flow of a path (or of D → g⁻¹Dg), its heat integral over a
    /// scale sweep, the odd pairing and the odd constant.
    SpectralFlow {
        #[arg(long)]
        module: PathBuf,
        /// Partial sums of the odd constant.
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// Truncation of the odd pairing.
        #[arg(long, default_value_t = 2)]
        pairing_terms: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 10.0, 100.0])]
        scales: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Cocyclic identity suites and norm estimates.
    Identities {
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        /// Also compute Betti numbers of a finite mixed-complex presentation.
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => 2,
        Error::Io(_)
        | Error::Schema(_)
        | Error::InvalidModule(_)
        | Error::DimensionMismatch(_)
        | Error::InvalidPoint(_) => 3,
        _ => 1,
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    command: &'a str,
    error: String,
    exit_code: u8,
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = cli.command.describe();
    let outcome = commands::run(&cli.command);
    let code = match outcome {
        Ok(out) => match emit(&out.report, common.emit.as_ref()) {
            Ok(()) => u8::from(!out.passed),
            Err(e) => {
                eprintln!("ncindex {name}: {e}");
                3
            }
        },
        Err(e) => {
            let code = exit_code_for(&e);
            eprintln!("ncindex {name}: {e}");
            let report = ErrorReport {
                command: name,
                error: e.to_string(),
                exit_code: code,
            };
            if let Some(p) = &common.emit {
                if let Ok(text) = ncindex::io::to_json_string(&report) {
                    let _ = std::fs::write(p, text);
                }
            }
            code
        }
    };
    ExitCode::from(code)
}

impl Command {
    fn describe(&self) -> (&'static str, Common) {
        match self {
            Command::VerifySimplex { common, .. } => ("verify-simplex", common.clone()),
            Command::GrowthClassify { common, .. } => ("growth-classify", common.clone()),
            Command::Jlo { common, .. } => ("jlo", common.clone()),
            Command::EvenIndex { common, .. } => ("even-index", common.clone()),
            Command::SpectralFlow { common, .. } => ("spectral-flow", common.clone()),
            Command::Identities { common, .. } => ("identities", common.clone()),
        }
    }
}
