//! `symsense` command-line front end.
//!
//! Exit codes: 2 for invalid configuration, 1 for internal failures
//! (including a failed `verify`), 0 otherwise. Flagged or aborted
//! simulation runs are data and exit with 0.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Format, RunManifest};

#[derive(Debug, Parser, Serialize)]
#[command(name = "symsense", version, about = "Error-corrected field sensing with permutation-invariant codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output files and the run manifest; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Code parameters `(g, n, u, s)`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct CodeArgs {
    /// Lattice gap.
    #[arg(long)]
    pub g: u64,
    /// Number of lattice steps; codewords occupy `n + 1` weights.
    #[arg(long)]
    pub n: u64,
    /// Scale factor as a fraction (`22/21`) or decimal. Decimals snap to the
    /// nearest value with `g·n·u` integral.
    #[arg(long, conflicts_with = "nq")]
    pub u: Option<String>,
    /// Shift of the weight lattice.
    #[arg(long)]
    pub s: Option<u64>,
    /// Total qubit count; derives `u` from `N = g·n·u + s`.
    #[arg(long)]
    pub nq: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProtocolArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Signal per unit time.
    #[arg(long, default_value_t = 1e-3)]
    pub theta: f64,
    /// Number of rounds.
    #[arg(long, default_value_t = 32)]
    pub r: u64,
    /// Time-step exponent, `τ = r^{-q}`.
    #[arg(long, default_value_t = 1.5)]
    pub q: f64,
    /// Deletions per qubit per unit time.
    #[arg(long, default_value_t = 0.0)]
    pub ndel: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Oversampling factor for syndrome-1 rounds (likelihood-weighted).
    #[arg(long, default_value_t = 1.0)]
    pub boost: f64,
    /// Also write per-trajectory JSON lines (needs `--out`).
    #[arg(long)]
    pub trajectories: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum GhzChoice {
    Record,
    Proof,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LpArgs {
    #[arg(long, default_value = "0")]
    pub c: String,
    #[arg(long, default_value = "3/2")]
    pub q: String,
    #[arg(long, default_value = "1")]
    pub eta: String,
    #[arg(long, default_value = "0.1")]
    pub e1: String,
    #[arg(long, default_value = "0.1")]
    pub e2: String,
    /// Grid points per axis minus one.
    #[arg(long, default_value_t = 100)]
    pub steps: u32,
    #[arg(long, value_enum, default_value_t = GhzChoice::Record)]
    pub ghz_variant: GhzChoice,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// QFI of the logical plus state and the codeword amplitude table.
    Qfi(CodeArgs),
    /// Code-basis FI against θ.
    FiScan {
        #[command(flatten)]
        code: CodeArgs,
        /// `start:stop:step`.
        #[arg(long, default_value = "0:0.5:0.01")]
        theta_grid: String,
    },
    /// SLD eigen-decomposition of the signal-evolved plus state.
    Sld {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Deletion branches and the post-deletion QFI.
    Delete {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        t: u64,
    },
    /// Amplitude-damping branches and the QFI bound.
    Ad {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        gamma: f64,
    },
    /// Deletion recovery before sensing, with and without correction.
    QecDelete {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        t: u64,
    },
    /// Monte-Carlo runs of Protocol 1.
    Protocol1(ProtocolArgs),
    /// Protocol 2 estimate from a Protocol 1 ensemble.
    Protocol2(ProtocolArgs),
    /// Precision-exponent iteration of Protocol 3.
    Protocol3 {
        #[arg(long, default_value = "1/2")]
        c1: String,
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value = "3/2")]
        q: String,
        #[arg(long, default_value = "0")]
        e1: String,
        #[arg(long, default_value = "0")]
        e2: String,
    },
    /// Feasible (α, γ) region and LP optimum.
    Polytope(LpArgs),
    /// Protocol 2 exponent against the prior exponent c.
    FqecScan {
        /// Comma-separated q values.
        #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "1.25".to_string(), "1.5".to_string()])]
        q: Vec<String>,
        #[arg(long, default_value = "0")]
        e1: String,
        #[arg(long, default_value = "0")]
        e2: String,
        #[arg(long, default_value = "0:0.5:0.05")]
        c_grid: String,
    },
    /// Small-N oracle suite; nonzero exit on any failure.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Qfi(_) => "qfi",
            Command::FiScan { .. } => "fi-scan",
            Command::Sld { .. } => "sld",
            Command::Delete { .. } => "delete",
            Command::Ad { .. } => "ad",
            Command::QecDelete { .. } => "qec-delete",
            Command::Protocol1(_) => "protocol1",
            Command::Protocol2(_) => "protocol2",
            Command::Protocol3 { .. } => "protocol3",
            Command::Polytope(_) => "polytope",
            Command::FqecScan { .. } => "fqec-scan",
            Command::Verify => "verify",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Protocol1(p) | Command::Protocol2(p) => Some(p.seed),
            _ => None,
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SYMSENSE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignored if a pool was already built.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let out = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let io = match &cli.out {
        None => output::print(&out, cli.format),
        Some(dir) => output::write_dir(dir, &out, cli.format).and_then(|paths| {
            let manifest = RunManifest {
                command: cli.command.name(),
                config: &cli.command,
                seed: cli.command.seed(),
                git_describe: output::GIT_DESCRIBE,
                outputs: paths.iter().map(|p| p.display().to_string()).collect(),
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            output::write_manifest(dir, &manifest).map(|_| ())
        }),
    };
    if let Err(e) = io {
        eprintln!("error: writing output failed: {e}");
        return ExitCode::from(1);
    }
    if out.failed {
        eprintln!("verification failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
