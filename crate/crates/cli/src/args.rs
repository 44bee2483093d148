use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entpath", version, about = "Path sums, entanglement trajectories and state-complexity experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Root seed; overrides the configured one.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads. Outputs do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Entanglement measure for trajectories.
    #[arg(long, global = true, value_enum)]
    pub measure: Option<MeasureArg>,

    /// Qubits on one side of the von Neumann cut, as a bitmask (bit q = qubit q).
    #[arg(long, global = true, value_parser = parse_mask)]
    pub cut: Option<u64>,

    /// Progress messages on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Geometric,
    Vonneumann,
}

fn parse_mask(s: &str) -> Result<u64, String> {
    let parsed = if let Some(bin) = s.strip_prefix("0b") {
        u64::from_str_radix(bin, 2)
    } else if let Some(hex) = s.strip_prefix("0x") {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("bad bitmask {s:?}: {e}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run circuits and write their entanglement trajectories.
    Simulate,
    /// Enumerate Feynman paths and check path sums against direct simulation.
    Paths,
    /// Path table and interference summary for Deutsch's algorithm.
    Deutsch {
        /// Oracle: not, identity, zero or one.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Minimum entanglement-path experiment.
    Conjecture,
    /// Fixture checks; nonzero exit on any failure.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Paths => "paths",
            Command::Deutsch { .. } => "deutsch",
            Command::Conjecture => "conjecture",
            Command::Selftest => "selftest",
        }
    }
}
