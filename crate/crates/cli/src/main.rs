//! `planarlab`: planarity tests, degree-bound witnesses, the exponent scan
//! and numerical checks of the valuation statements.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Emitter, Format};

#[derive(Debug, Parser, Serialize)]
#[command(name = "planarlab", version, about = "Planar functions over finite fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "PLANARLAB_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,
    #[command(flatten)]
    pub caps: Caps,
    /// Seed for pseudorandom test functions.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Caps {
    /// Largest field order for brute-force planarity and classification.
    #[arg(long, default_value_t = 2401, global = true)]
    pub brute_force_cap: u64,
    /// Largest field order for exact cyclotomic matrices.
    #[arg(long, default_value_t = 81, global = true)]
    pub padic_cap: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Test a function on F_{p^n} for planarity.
    Planar(PlanarArgs),
    /// Search for a witness e ruling out planarity of x^d over a field of order b^n.
    Witness(WitnessArgs),
    /// Scan all (b, n, d) up to a cap for exponents without a witness.
    Scan(ScanArgs),
    /// Run a numerical check.
    Verify(VerifyArgs),
    /// List the planar monomials x^d over F_{p^n}.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct FunctionSpec {
    /// The monomial x^d.
    #[arg(long)]
    pub monomial: Option<u64>,
    /// Coefficients c_0,c_1,... of X^0, X^1, ... as element indices.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<u64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct PlanarArgs {
    pub p: u64,
    pub n: u32,
    #[command(flatten)]
    pub function: FunctionSpec,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    pub b: u64,
    pub n: u32,
    pub d: u64,
    /// Try every e up to q-1 (or --e-cap) after the structured candidates.
    #[arg(long)]
    pub exhaustive: bool,
    /// Number of ascending candidates tried without --exhaustive.
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: u64,
    #[arg(long)]
    pub e_cap: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Scan cells with b^n at most this.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    /// `prime`, `all`, or a comma-separated list of bases.
    #[arg(long, default_value = "prime")]
    pub bases: String,
    #[arg(long, default_value_t = 2)]
    pub min_n: u32,
    #[arg(long)]
    pub max_n: Option<u32>,
    /// Exponents per work unit.
    #[arg(long, default_value_t = 1 << 14)]
    pub block: u64,
    /// Save progress here after every batch.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue the scan saved in this checkpoint (its configuration wins).
    #[arg(long, conflicts_with = "checkpoint")]
    pub resume: Option<PathBuf>,
    /// Stop after this many work units.
    #[arg(long)]
    pub max_units: Option<usize>,
    /// Also print one record per cell.
    #[arg(long)]
    pub cells: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Valuations of Gauss sums.
    Stickelberger,
    /// Valuations of the change-of-basis matrices.
    BaseConversion,
    /// The ultrametric matrix reduces to interpolation coefficients.
    Reduction,
    /// adeg(F^e) - s_p(e) <= n(p-1)/2 for planar F.
    Theorem1,
    /// Three-case triage of exponents over F_{p^{2m}}.
    Lemma3,
    /// The digit lemma for v + delta p^s.
    Lemma6,
    /// Witnesses for exponents whose digits are all at least r.
    Lemma8,
    /// Witnesses for every D(t, u) exponent over F_{p^n}.
    Power2,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Field order (stickelberger, base-conversion, reduction, theorem1).
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Largest s (lemma6).
    #[arg(long, default_value_t = 4)]
    pub smax: usize,
    /// A single exponent (lemma8).
    #[arg(long)]
    pub d: Option<u64>,
    /// Monomial to test (reduction, theorem1).
    #[arg(long)]
    pub monomial: Option<u64>,
    /// Number of pseudorandom functions (reduction).
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    pub p: u64,
    pub n: u32,
    /// Confirm every rejected survivor with an exhaustive search.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    version: &'static str,
    #[serde(flatten)]
    cli: &'a Cli,
    threads_used: usize,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut threads = cli.threads;
    if threads == 0 {
        threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let mut out = Emitter::new(cli.format);
    out.header(&RunConfig { version: env!("CARGO_PKG_VERSION"), cli, threads_used: threads })?;
    pool.install(|| commands::dispatch(cli, &mut out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
