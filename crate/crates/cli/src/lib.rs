//! Command-line driver for the `rsgraph` toolkit.
//!
//! Every subcommand prints one report (JSON by default) and can also write
//! it to a file with `--report`. Exit status: 0 success, 1 parameter or
//! input error, 2 verification failure, 3 resource refusal.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod report;

pub use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "rsgraph",
    version,
    about = "Dense graphs covered by large induced matchings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Refuse all-pairs work on more vertices than this.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_vertices: usize,

    /// Refuse all-pairs work needing more pair checks than this.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub max_pair_checks: u64,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph and its induced-matching cover.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Proper binary linear codes.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Triangle graph and lower-bound checks.
    #[command(subcommand)]
    Limits(LimitsCmd),
    /// Multichannel partitions, schedules and simulation.
    #[command(subcommand)]
    Channel(ChannelCmd),
    /// Graph linearity test on a covered graph.
    Lintest(LintestArgs),
    /// Partition sum of the code-graph counterexample.
    Vempala(VempalaArgs),
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Squared-distance band graph on [C]^n, covered shell by shell.
    Geometric(GeometricArgs),
    /// Antipodal-gap scan of sampled shells of the band graph.
    Shells(ShellsArgs),
    /// Agreement graph on [C]^n covered by code flip classes.
    Code(CodeConstructArgs),
}

#[derive(Debug, Args)]
pub struct Outputs {
    /// Edge list output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cover output.
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Report output (same bytes as standard output).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GeometricArgs {
    #[arg(long)]
    pub c: u32,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Args)]
pub struct ShellsArgs {
    #[arg(long)]
    pub c: u32,
    #[arg(long)]
    pub n: usize,
    /// Number of distinct centres drawn with the seed.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Code parameters: alphabet, length, agreement threshold and the code.
#[derive(Debug, Args)]
pub struct CodeSource {
    #[arg(long)]
    pub c: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Generator matrix file (`n k` header, n rows of k bits).
    #[arg(long, conflicts_with = "gv_seed")]
    pub gen: Option<PathBuf>,
    /// Search a code with this seed (default: the global seed).
    #[arg(long)]
    pub gv_seed: Option<u64>,
    /// Code dimension for the search (default: largest feasible).
    #[arg(long, conflicts_with = "gen")]
    pub k: Option<usize>,
    /// Search attempts.
    #[arg(long, default_value_t = 1000)]
    pub tries: usize,
}

#[derive(Debug, Args)]
pub struct CodeConstructArgs {
    #[command(flatten)]
    pub code: CodeSource,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Subcommand)]
pub enum CodesCmd {
    /// Randomized search for a proper [n, k] code of distance above d.
    Gv(GvArgs),
    /// Exhaustively verify a generator matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GvArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub tries: usize,
    /// Generator output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Generator matrix file.
    pub file: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LimitsCmd {
    /// Triangle graph of a covered graph; every edge in exactly one triangle.
    Triangle(TriangleArgs),
    /// Complement-degree inequality for uniform covers.
    Mindeg(MindegArgs),
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub cover: PathBuf,
    /// Edge list of the triangle graph.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MindegArgs {
    #[arg(long)]
    pub edges: PathBuf,
    /// Matching size to test against.
    #[arg(long, required_unless_present = "cover")]
    pub r: Option<usize>,
    /// Uniform cover; its matching size is used and it is verified first.
    #[arg(long, conflicts_with = "r")]
    pub cover: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Sequential,
    RoundRobin,
}

#[derive(Debug, Subcommand)]
pub enum ChannelCmd {
    /// Code-graph subchannel plus singletons.
    Two(ChannelTwoArgs),
    /// Random right-relabelings of the band graph.
    Shifts(ChannelShiftsArgs),
    /// Replay a schedule file.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ScheduleOutputs {
    #[arg(long, value_enum, default_value_t = PolicyArg::Sequential)]
    pub policy: PolicyArg,
    /// Schedule output.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChannelTwoArgs {
    #[command(flatten)]
    pub code: CodeSource,
    #[command(flatten)]
    pub outputs: ScheduleOutputs,
}

#[derive(Debug, Args)]
pub struct ChannelShiftsArgs {
    #[arg(long)]
    pub c: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub channels: usize,
    #[arg(long, default_value_t = 20)]
    pub attempts: usize,
    #[command(flatten)]
    pub outputs: ScheduleOutputs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    /// Station count (default: largest id in the schedule plus one).
    #[arg(long)]
    pub stations: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LintestArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub cover: PathBuf,
    /// Arity of the tested function.
    #[arg(long)]
    pub m: usize,
    /// `linear`, `and`, `random:SEED` or `table:FILE`.
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VempalaArgs {
    #[command(flatten)]
    pub code: CodeSource,
    /// Partition output.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Failure of a command, with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rsgraph::Error),
    /// A check on the produced artifacts failed.
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use rsgraph::Error as E;
        match self {
            CliError::Core(E::Verification(_) | E::SearchExhausted { .. })
            | CliError::Failed(_) => 2,
            CliError::Core(E::ResourceLimit { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out` and diagnostics to standard error. Returns the exit
/// status.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = report.render(cli.global.format);
            if let Err(e) = write_report(&report, cli.global.format, out) {
                eprintln!("error: {e}");
                return 1;
            }
            if let Some(path) = report.path.as_ref() {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return 1;
                }
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    out.write_all(report.render(format).as_bytes())?;
    out.flush()
}

/// [`run_with_output`] on standard output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_output(argv, &mut std::io::stdout().lock())
}

/// Runs a parsed command, inside a pool of `--threads` workers when given.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match cli.global.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            pool.install(|| commands::dispatch(cli))
        }
        None => commands::dispatch(cli),
    }
}
