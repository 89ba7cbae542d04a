//! `dplab`: configuration searches, trace tables, Weyl group class tables and
//! point counts. Every run emits a JSON artifact embedding its manifest.

mod commands;
mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use dplab_core::search::{DEFAULT_BUDGET, DEFAULT_TEST_BUDGET};

#[derive(Parser)]
#[command(name = "dplab", version, about = "Point configurations, trace tables, Weyl group classes and point counts for del Pezzo surfaces over F_q")]
struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Rendering printed on stdout; the JSON artifact is always produced.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the JSON artifact to this file (and the md/csv rendering next to it).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Root {
    E6,
    E7,
}

#[derive(Args, Clone, Debug)]
pub struct SearchFlags {
    /// Random trials before giving up.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Elementary-test cap for exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_TEST_BUDGET)]
    pub test_budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow the expensive exhaustive searches.
    #[arg(long)]
    pub long: bool,
    /// Resumable progress file for exhaustive searches.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a configuration of closed points in general position.
    Search {
        /// Base field order, `q` or `p^n`.
        #[arg(long)]
        q: String,
        /// Degrees of the closed points, e.g. `1,1,1,1,2`.
        #[arg(long)]
        partition: String,
        /// Exhaustive search (certifies non-existence) instead of random sampling.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// Which Frobenius traces occur in degree 1..4 over each field.
    TraceTable {
        #[arg(long)]
        degree: u32,
        /// Every prime power from 2 up to this bound.
        #[arg(long, conflicts_with = "q", required_unless_present = "q")]
        qmax: Option<u64>,
        /// A single field order.
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// Conjugacy class table of W(E6) or W(E7).
    Table {
        #[arg(long, value_enum)]
        root: Root,
    },
    /// Limiting distribution of the trace in degree 3 or 2.
    SatoTate {
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Count the points of a surface model.
    Count {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Quadratic twist of a degree 2 or degree 1 model.
    Twist {
        #[arg(long)]
        surface: PathBuf,
        /// Twist parameter (default: least nontrivial element).
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Analyze a conic bundle over P^1.
    ConicBundle {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long)]
        long: bool,
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

/// Inputs that determine an artifact. Wall time goes to stderr so that
/// identical manifests give byte-identical artifacts.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub budgets: BTreeMap<String, Value>,
    pub versions: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Inconclusive searches or failed checks.
    Incomplete,
}

/// What a command produces: the JSON result plus a tabular rendering.
pub struct Outcome {
    pub result: Value,
    pub preface: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub status: Status,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<dplab_core::Error> for CliError {
    fn from(e: dplab_core::Error) -> CliError {
        use dplab_core::Error::*;
        match e {
            Consistency(_) | Overflow(_) | DivisionByZero => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn apply_size_bound() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("DPLAB_SIZE_BOUND") {
        let bound: u64 = v.trim().parse().map_err(|_| CliError::Usage(format!("DPLAB_SIZE_BOUND={v} is not an integer")))?;
        dplab_core::gf::set_size_bound(bound);
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    apply_size_bound()?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let (manifest, outcome) = commands::execute(&cli.command)?;
    let artifact = render::artifact(&manifest, &outcome.result);
    let rendered = match cli.format {
        Format::Json => artifact.clone(),
        Format::Md => render::markdown(&outcome),
        Format::Csv => render::csv(&outcome)?,
    };
    if let Some(path) = &cli.out {
        write_file(path, &artifact)?;
        if cli.format != Format::Json {
            let ext = if cli.format == Format::Md { "md" } else { "csv" };
            write_file(&path.with_extension(ext), &rendered)?;
        }
    }
    print!("{rendered}");
    eprintln!("{}: {:.2?}", manifest.command, start.elapsed());
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Incomplete) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dplab: {e}");
            ExitCode::from(e.code())
        }
    }
}
