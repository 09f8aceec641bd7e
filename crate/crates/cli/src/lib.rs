//! Batch front end: parse a job from the command line, run it, write a JSON report.

mod commands;
pub mod spec;

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::Value;
use thiserror::Error;
use transporter_core::Error as CoreError;

pub const REPORT_SCHEMA_VERSION: u64 = 1;

#[derive(Parser, Debug, Clone)]
#[command(name = "transporter", version, about = "Equivariant poset homology with presheaf coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Order, classes, shipped table and rational irreducible degrees
    GroupInfo(Job),
    /// Build a poset and report its orbits, components and chains
    PosetBuild(Job),
    /// Homology modules of a presheaf, with invariant checks
    Homology(Job),
    /// Alternating sum of homology classes
    LkPi(Job),
    /// Generalized Steinberg class of a poset
    Steinberg(Job),
    /// Every module is a summand of H_0 of its constant presheaf
    Thm31(Job),
    /// (lk r − Id)[M] against the Steinberg class times [M]
    Cor54(Job),
    /// Direct lk of atomic presheaves against the lower-interval formula
    SimpleFormula(Job),
    /// Harish-Chandra induction as H_0 over a parabolic orbit
    HcInduce(Job),
    /// i t − Id through fixed points on the Bouc poset
    AlvisCurtis(Job),
    /// Whether classes induced from stabilizers span the character lattice
    SpanCheck(Job),
    /// Homology of a presheaf and of its pullback to the subdivision
    SubdivisionCompare(Job),
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Job {
    /// builtin group (S3, S4, S5, GL32, C<n>, D<n>, A<n>) or a group file
    #[arg(long)]
    pub group: Option<String>,
    /// Q or GF(p)
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// Sp:p, Sp1:p, Bp:p, coset:<subgroup>, parabolic:<subgroup>, point, chain:n, triangle, sd:<poset>, file:<path>
    #[arg(long)]
    pub poset: Option<String>,
    /// constant:<module>, fixed:<module>, induced:<module>, atomic:<x>:<module>, file:<path>
    #[arg(long)]
    pub coeff: Option<String>,
    /// character table file, or `builtin`
    #[arg(long)]
    pub table: Option<String>,
    /// write the report here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
    /// poset element for simple-formula
    #[arg(long)]
    pub element: Option<usize>,
    /// subgroup for hc-induce: sylow<p>, generators "(0 1);(2 3)", trivial, whole
    #[arg(long)]
    pub subgroup: Option<String>,
    /// prime for the Bouc poset in alvis-curtis
    #[arg(long)]
    pub prime: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// Distinct status per failure class; 1 is reserved for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(..) => 3,
            CliError::Core(e) => match e {
                CoreError::Io(_) => 3,
                CoreError::Schema(_) | CoreError::Parse(_) | CoreError::Json(_) | CoreError::InvalidPermutation(_) => 4,
                CoreError::UnsupportedField(_) | CoreError::FieldMismatch(..) | CoreError::NotPrime(_) => 5,
                CoreError::SizeBound { .. } => 6,
                CoreError::Internal(_) => 8,
                _ => 7,
            },
        }
    }
}

/// A finished report and its verdict; `passed` is `None` for non-check commands.
pub struct Outcome {
    pub report: Value,
    pub passed: Option<bool>,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.passed {
            Some(false) => 1,
            _ => 0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(&cli.command)
}

pub fn job(command: &Command) -> &Job {
    match command {
        Command::GroupInfo(j)
        | Command::PosetBuild(j)
        | Command::Homology(j)
        | Command::LkPi(j)
        | Command::Steinberg(j)
        | Command::Thm31(j)
        | Command::Cor54(j)
        | Command::SimpleFormula(j)
        | Command::HcInduce(j)
        | Command::AlvisCurtis(j)
        | Command::SpanCheck(j)
        | Command::SubdivisionCompare(j) => j,
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &str, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(path.to_string(), e);
    let target = Path::new(path);
    let dir = match target.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(target).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs a parsed command line, emitting the report; returns the process status.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(outcome) => {
            let text = render(&outcome.report);
            let written = match &job(&cli.command).out {
                Some(path) => write_atomic(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            eprintln!("{}", outcome.summary);
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
