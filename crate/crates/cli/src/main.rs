mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Recorder;

/// Minimum-guesswork discrimination of quantum-state ensembles.
#[derive(Parser, Debug)]
#[command(name = "qguess", version)]
struct Cli {
    /// Print a single JSON report on stdout instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prior guesswork, or guesswork and error probability under a measurement.
    Guesswork {
        file: PathBuf,
        /// Measurement file; defaults to the file's own "povm" entry.
        #[arg(long)]
        povm: Option<PathBuf>,
    },
    /// Minimum guesswork over all measurements.
    MinGuesswork(MinGuessworkArgs),
    /// Minimum error probability over all measurements.
    MinError { file: PathBuf },
    /// Closed-form bounds on (conditional and minimum) guesswork.
    Bounds(BoundsArgs),
    /// Structural criteria.
    Check(CheckArgs),
    /// Recompute the reference values; exit 4 if any misses its tolerance.
    ReproPaper {
        /// Rank-one samples for the entropy precondition.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a bundled fixture file to stdout or a path.
    Fixture {
        name: FixtureName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct MinGuessworkArgs {
    file: PathBuf,
    /// Check the optimality certificate of the recovered or dual measurement.
    #[arg(long)]
    certify: bool,
    /// Recover an optimal measurement.
    #[arg(long)]
    recover: bool,
    /// Where to write the recovered measurement.
    #[arg(long, requires = "recover")]
    out: Option<PathBuf>,
    /// Also run the direct search and report both values.
    #[arg(long)]
    oracle: bool,
    /// Grid resolution for the qubit search.
    #[arg(long, default_value_t = 180)]
    resolution: usize,
    /// Restarts for the general search.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    file: PathBuf,
    /// Known minimum error probability.
    #[arg(long)]
    p_err_opt: Option<f64>,
    /// Known minimum guesswork, used to check the bounds on it.
    #[arg(long)]
    g_opt: Option<f64>,
    /// Inconclusive probability of an unambiguous scheme.
    #[arg(long)]
    p_inc: Option<f64>,
    /// Measurement for the conditional bounds.
    #[arg(long)]
    povm: Option<PathBuf>,
    /// Compute the minimum guesswork and error probability first.
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CheckKind {
    /// Whether no measurement can beat the prior guesswork.
    #[arg(long)]
    no_measurement: bool,
    /// Sufficient optimality conditions for a group-generated measurement.
    #[arg(long, value_name = "SPEC")]
    theorem5: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    file: PathBuf,
    #[command(flatten)]
    kind: CheckKind,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FixtureName {
    /// Trine ensemble with the square-root measurement.
    Trine,
    /// Trine ensemble with the minimum-guesswork measurement.
    TrineOptimal,
    /// Group specification for the trine's optimal measurement.
    TrineGroupCheck,
    /// Five states (I − |i⟩⟨i|)/4 with uniform prior.
    Remark2,
    /// Diagonal qubit encoding truncated to 30 symbols, with the basis measurement.
    DiagonalQubit,
    /// |0⟩ and |+⟩ with equal prior.
    Helstrom,
    /// Three symbols encoded into one state.
    Identical,
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<qguess::Error> for CliError {
    fn from(e: qguess::Error) -> Self {
        use qguess::Error as E;
        let code = match e {
            E::SolverFailure { .. } | E::RecoveryFailed(_) => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QGUESS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("QGUESS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot configure thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(Recorder, u8), CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Guesswork { file, povm } => commands::guesswork(file, povm.as_deref()).map(|r| (r, 0)),
        Command::MinGuesswork(args) => commands::min_guesswork(args),
        Command::MinError { file } => commands::min_error(file),
        Command::Bounds(args) => commands::bounds(args).map(|r| (r, 0)),
        Command::Check(args) => commands::check(args).map(|r| (r, 0)),
        Command::ReproPaper { samples, seed } => commands::repro(*samples, *seed),
        Command::Fixture { name, out } => commands::fixture(*name, out.as_deref()).map(|r| (r, 0)),
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rec, code)) => {
            let (report, lines) = rec.finish();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for l in lines {
                    println!("{l}");
                }
                for d in &report.diagnostics {
                    eprintln!("note: {d}");
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
