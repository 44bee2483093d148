mod args;
mod commands;
mod config;
mod error;
mod output;
mod selftest;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, GlobalArgs};
use error::CliError;
use output::OutDir;

/// Runs `f` on a pool of `jobs` workers, or rayon's default pool.
/// Zero was rejected earlier.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None | Some(0) => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Serialize)]
struct SelftestSummary<'a> {
    checks: &'a [selftest::Check],
    failed: usize,
}

fn run(command: &Command, g: &GlobalArgs) -> Result<(), CliError> {
    if g.jobs == Some(0) {
        return Err(CliError::Config("--jobs: must be at least 1".into()));
    }
    let verbose = g.verbose > 0;
    match command {
        Command::Simulate => {
            let cfg = config::resolve_simulate(g)?;
            let out = OutDir::create(&g.out)?;
            with_jobs(g.jobs, || commands::simulate(&cfg, &out, verbose))??;
            out.write_manifest(command.name(), &cfg)?;
        }
        Command::Paths => {
            let cfg = config::resolve_paths(g)?;
            let out = OutDir::create(&g.out)?;
            let pass = with_jobs(g.jobs, || commands::paths(&cfg, &out))??;
            out.write_manifest(command.name(), &cfg)?;
            println!("path sums {}", if pass { "agree with direct simulation" } else { "DISAGREE with direct simulation" });
        }
        Command::Deutsch { variant } => {
            let cfg = config::resolve_deutsch(g, variant.as_deref())?;
            let out = OutDir::create(&g.out)?;
            let p = commands::deutsch(&cfg.variant, &out)?;
            out.write_manifest(command.name(), &cfg)?;
            println!("{}: P(first qubit = 1) = {p:.15}", cfg.variant);
        }
        Command::Conjecture => {
            let cfg = config::resolve_conjecture(g)?;
            let out = OutDir::create(&g.out)?;
            with_jobs(g.jobs.or(cfg.parallelism), || commands::conjecture(&cfg, &out, verbose))??;
            out.write_manifest(command.name(), &cfg)?;
        }
        Command::Selftest => {
            let checks = with_jobs(g.jobs, selftest::run_checks)??;
            selftest::print_table(&checks);
            let failed = checks.iter().filter(|c| !c.pass).count();
            let out = OutDir::create(&g.out)?;
            out.write_json("selftest.json", &SelftestSummary { checks: &checks, failed })?;
            out.write_manifest(command.name(), &serde_json::json!({}))?;
            if failed > 0 {
                return Err(CliError::SelftestFailed(failed));
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli.command, &cli.global) {
        eprintln!("entpath: {e}");
        std::process::exit(e.exit_code());
    }
}
