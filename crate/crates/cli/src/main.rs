mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use palmcheck::axb::Window;
use palmcheck::instance::Mutation;
use palmcheck::suite::Suite;

use crate::error::CliError;

/// Exact verification of Palm-pair and mass-transport identities.
///
/// Exit status: 0 all selected checks pass, 1 a check failed, 2 input error,
/// 3 resource cap exceeded.
#[derive(Debug, Parser)]
#[command(name = "palmcheck", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest group order an instance may enumerate.
    #[arg(long, global = true, default_value_t = 48)]
    pub max_group_order: usize,
    /// Gauss-Legendre order for the ax+b checks.
    #[arg(long, global = true, default_value_t = 64)]
    pub axb_order: usize,
    /// Quadrature window `a_min,a_max,b_min,b_max`.
    #[arg(long, global = true, default_value = "0.125,8,-8,8", allow_hyphen_values = true)]
    pub axb_window: Window,
    /// Relative tolerance for the ax+b checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
}

/// Where an instance comes from: a file, `-` for standard input, or a seed of
/// the standard generator.
#[derive(Debug, Args)]
pub struct Source {
    /// Instance JSON file, or `-` for standard input.
    pub instance: Option<PathBuf>,
    /// Generate the standard instance for this seed instead of reading one.
    #[arg(long, conflicts_with = "instance")]
    pub seed: Option<u64>,
    /// Apply a mutation before running.
    #[arg(long)]
    pub mutation: Option<Mutation>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orbit decomposition, Δ* and symmetric sets.
    Orbits {
        #[command(flatten)]
        source: Source,
        /// How many symmetric sets to list.
        #[arg(long, default_value_t = 8)]
        sets: usize,
    },
    /// Disintegration kernel tables κ_{s,t}.
    Kernel {
        #[command(flatten)]
        source: Source,
    },
    /// Run a check suite and emit reports.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write instance files.
    Gen {
        /// First seed of the standard generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Generate from this spec file instead of the standard table.
        #[arg(long, conflicts_with = "count")]
        spec: Option<PathBuf>,
        #[arg(long)]
        mutation: Option<Mutation>,
        /// Output file (single instance) or directory (several); stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate JSON reports written by `check`.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Orbits { source, sets } => commands::orbits(g, &source, sets),
        Command::Kernel { source } => commands::kernel(g, &source),
        Command::Check { source, suite, out } => commands::check(g, &source, suite, out.as_deref()),
        Command::Gen { seed, count, spec, mutation, out } => {
            commands::gen(seed, count, spec.as_deref(), mutation, out.as_deref())
        }
        Command::Report { files } => commands::report(g, &files),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("palmcheck: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
