//! `trisect`: build alternating trilinear forms over finite fields and check
//! what their singular lines do.

mod commands;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;
use crate::source::FormArgs;

#[derive(Parser)]
#[command(name = "trisect", version, about = "Singular lines of alternating trilinear forms over finite fields")]
struct Cli {
    /// Worker threads for point enumeration [default: all cores]
    #[arg(long, global = true, env = "TRISECT_THREADS")]
    threads: Option<usize>,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    report: Format,
    /// Include elapsed wall-clock time in the report
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spread form of GF(q²)³ read over GF(q) by the trace construction
    Construct(ConstructArgs),
    /// Enumerate the singular lines of a form and their coverage of the points
    Lines(LinesArgs),
    /// Check that the singular lines partition the points and form a normal spread
    SpreadCheck(FormOnly),
    /// Points on singular lines for odd n, and the hypersurface they fill
    Union(UnionArgs),
    /// Search for totally singular subspaces
    TsSearch(TsArgs),
    /// The ratio q^C(n,3) / |GL(n, q)| against the published table for q = 2
    Census(CensusArgs),
    /// GL(n, q) orbits on trivectors by exhaustive search
    Orbits(OrbitsArgs),
    /// Exact checks of the seven-dimensional cross product and its algebra
    Crossalg(CrossalgArgs),
    /// Run every claim and print a pass/fail matrix
    VerifyAll(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Parity,
    #[arg(long)]
    pub q: u64,
    /// Odd q: non-square to use as ρ². Even q with h even: the target Tr(ρ³)
    #[arg(long)]
    pub mu: Option<u32>,
    /// Nonzero element of GF(q²), packed [default: 1/2 for odd q, 1 for even q]
    #[arg(long)]
    pub beta: Option<u32>,
    /// Also write the form as JSON to this file
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Args)]
pub struct FormOnly {
    #[command(flatten)]
    pub form: FormArgs,
}

#[derive(Args)]
pub struct LinesArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// List every line by its reduced basis
    #[arg(long)]
    pub list: bool,
}

#[derive(Args)]
pub struct UnionArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Fit the union by a hyperplane or quadric
    #[arg(long)]
    pub classify: bool,
}

#[derive(Args)]
pub struct TsArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Dimension to enumerate; without it, report the largest dimension found
    #[arg(long)]
    pub r: Option<usize>,
    /// Search nodes before giving up
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Args)]
pub struct CensusArgs {
    /// Print the table for n = 5..=11
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = 5)]
    pub n_min: usize,
    #[arg(long, default_value_t = 11)]
    pub n_max: usize,
}

#[derive(Args)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// Attach the invariant fingerprint of each orbit representative
    #[arg(long)]
    pub fingerprints: bool,
}

#[derive(Args)]
pub struct CrossalgArgs {
    /// Run the identity checks
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Largest field order used by any claim
    #[arg(long, default_value_t = 8)]
    pub q_max: u64,
    /// Random forms per (n, q) for the coverage claim
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 10_000)]
    pub crossalg_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Node budget for totally singular subspace searches
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Replace a catalog form by a JSON file, as NAME=FILE (repeatable)
    #[arg(long = "override", value_name = "NAME=FILE")]
    pub overrides: Vec<String>,
    /// Run only these claim ids (comma-separated or repeated)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}

/// How a run ended, beyond the report itself.
pub enum CliError {
    /// Bad invocation; names the flag at fault.
    Usage { flag: &'static str, message: String },
    Other(String),
}

impl CliError {
    pub fn usage(flag: &'static str, message: impl ToString) -> Self {
        CliError::Usage { flag, message: message.to_string() }
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub body: serde_json::Value,
    /// Set when a checked statement does not hold.
    pub failure: Option<String>,
    pub text: Option<String>,
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Construct(a) => commands::construct(a),
        Command::Lines(a) => commands::lines(a),
        Command::SpreadCheck(a) => commands::spread_check(&a.form),
        Command::Union(a) => commands::union(a),
        Command::TsSearch(a) => commands::ts_search(a),
        Command::Census(a) => commands::census(a),
        Command::Orbits(a) => commands::orbits(a),
        Command::Crossalg(a) => commands::crossalg(a),
        Command::VerifyAll(a) => commands::verify_all(a),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads", "thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage("--threads", e))?;
    }
    let start = Instant::now();
    let mut outcome = dispatch(&cli.command)?;
    if cli.timing {
        if let Some(obj) = outcome.body.as_object_mut() {
            obj.insert("elapsed_ms".into(), (start.elapsed().as_secs_f64() * 1e3).into());
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = output::render(&outcome, cli.report);
            if let Err(e) = output::write(&rendered, cli.out.as_deref()) {
                eprintln!("error: --out: {e}");
                return ExitCode::from(2);
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("check failed: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(CliError::Usage { flag, message }) => {
            eprintln!("error: {flag}: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Other(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
