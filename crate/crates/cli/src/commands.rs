use std::path::Path;

use entpath_core::canonical::format_f64;
use entpath_core::harness::{prepare_targets, resolve_measure, sample_target, test_conjecture, ConjectureConfig};
use entpath_core::paths::deutsch::{deutsch_path_table, DeutschOracle};
use entpath_core::paths::{decompose_amplitude, enumerate_paths, path_count, verify_path_sum, write_amplitude_csv, Endpoint};
use entpath_core::quantum::{run_circuit, BasisConfiguration, Circuit, CircuitDocument, StateVector};
use entpath_core::seed::derive_seed;
use entpath_core::trajectory::{export_trajectories, trajectory, RunSummary};
use serde::Serialize;

use crate::config::{PathsConfig, RandomCircuits, SimulateConfig};
use crate::error::CliError;
use crate::output::OutDir;

/// Path sums agreeing with direct simulation to this are reported as passing.
pub const PATH_SUM_TOLERANCE: f64 = 1e-9;

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    entpath_core::Error::Csv {
        path: path.to_path_buf(),
        source: e,
    }
    .into()
}

fn random_circuit(random: &RandomCircuits, seed: u64) -> Result<Circuit<f64>, CliError> {
    if random.gates == 0 {
        return Err(CliError::Config("random.gates: must be at least 1".into()));
    }
    if random.n < 2 {
        return Err(CliError::Config("random.n: must be at least 2".into()));
    }
    Ok(sample_target(random.n, random.gates, seed)?.1)
}

fn parse_config(field: &str, s: &str, n: usize) -> Result<BasisConfiguration, CliError> {
    let q = BasisConfiguration::parse(s).map_err(|e| CliError::Config(format!("{field}: {e}")))?;
    if q.num_qubits() != n {
        return Err(CliError::Config(format!("{field}: {s:?} has {} qubits, circuit has {n}", q.num_qubits())));
    }
    Ok(q)
}

pub fn simulate(cfg: &SimulateConfig, out: &OutDir, verbose: bool) -> Result<(), CliError> {
    let mut runs: Vec<(String, Circuit<f64>)> = Vec::new();
    for (i, p) in cfg.circuits.iter().enumerate() {
        runs.push((format!("file-{i}"), CircuitDocument::read(p)?.to_circuit()?));
    }
    if let Some(random) = &cfg.random {
        for i in 0..random.count {
            let c = random_circuit(random, derive_seed(cfg.seed, &[i as u64]))?;
            out.write_json(&format!("circuits/random-{i}.json"), &CircuitDocument::from_circuit(&c))?;
            runs.push((format!("random-{i}"), c));
        }
    }
    let mut trajectories = Vec::with_capacity(runs.len());
    let mut summaries = Vec::with_capacity(runs.len());
    for (id, circuit) in runs {
        let n = circuit.num_qubits();
        let measure = resolve_measure(cfg.measure, cfg.cut, n).map_err(|e| CliError::Config(e.to_string()))?;
        let initial = match &cfg.initial {
            Some(s) => StateVector::basis(parse_config("initial", s, n)?)?,
            None => StateVector::zero(n)?,
        };
        let path = run_circuit(&circuit, &initial)?;
        let traj = trajectory(&path, &measure)?;
        if verbose {
            eprintln!("{id}: {} gates", circuit.len());
        }
        summaries.push(RunSummary::from_trajectory(id.clone(), &traj));
        trajectories.push((id, traj));
    }
    export_trajectories(&out.path("trajectories.csv"), &trajectories)?;
    out.write_json("summary.json", &summaries)?;
    Ok(())
}

#[derive(Serialize)]
struct PathsReport {
    num_qubits: usize,
    gates: usize,
    start: String,
    path_count: u64,
    enumerated_paths: u64,
    endpoints_checked: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

pub fn paths(cfg: &PathsConfig, out: &OutDir) -> Result<bool, CliError> {
    let circuit = match (&cfg.circuit, &cfg.random) {
        (Some(p), _) => CircuitDocument::read(p)?.to_circuit()?,
        (None, Some(random)) => {
            let c = random_circuit(random, cfg.seed)?;
            out.write_json("circuit.json", &CircuitDocument::from_circuit(&c))?;
            c
        }
        (None, None) => return Err(CliError::Config("circuit: missing".into())),
    };
    let n = circuit.num_qubits();
    let cap = cfg.cap as u128;
    let start = match &cfg.start {
        Some(s) => parse_config("start", s, n)?,
        None => BasisConfiguration::new(n, 0)?,
    };
    let ends: Vec<BasisConfiguration> = if cfg.ends.is_empty() {
        (0..1usize << n).map(|i| BasisConfiguration::new(n, i)).collect::<Result<_, _>>()?
    } else {
        cfg.ends.iter().map(|s| parse_config("ends", s, n)).collect::<Result<_, _>>()?
    };

    let list_path = out.path("paths.csv");
    let mut w = csv_writer(&list_path)?;
    w.write_record(["path", "configurations", "amplitude_re", "amplitude_im", "magnitude", "phase"])
        .map_err(|e| csv_error(&list_path, e))?;
    let mut enumerated = 0u64;
    for (i, p) in enumerate_paths(&circuit, start, Endpoint::All, cap)?.enumerate() {
        let configs: Vec<String> = p.path.configs().iter().map(|q| q.to_string()).collect();
        let (mag, phase) = decompose_amplitude(p.amplitude);
        w.write_record([
            i.to_string(),
            configs.join(">"),
            format_f64(p.amplitude.re),
            format_f64(p.amplitude.im),
            format_f64(mag),
            format_f64(phase),
        ])
        .map_err(|e| csv_error(&list_path, e))?;
        enumerated += 1;
    }
    w.flush().map_err(|e| entpath_core::Error::Io {
        path: list_path.clone(),
        source: e,
    })?;

    let pairs: Vec<_> = ends.iter().map(|&e| (start, e)).collect();
    let rows = verify_path_sum(&circuit, &pairs, cap)?;
    let res_path = out.path("residuals.csv");
    let mut w = csv_writer(&res_path)?;
    w.write_record(["start", "end", "path_sum_re", "path_sum_im", "direct_re", "direct_im", "residual"])
        .map_err(|e| csv_error(&res_path, e))?;
    for r in &rows {
        w.write_record([
            r.start.to_string(),
            r.end.to_string(),
            format_f64(r.path_sum.re),
            format_f64(r.path_sum.im),
            format_f64(r.direct.re),
            format_f64(r.direct.im),
            format_f64(r.residual),
        ])
        .map_err(|e| csv_error(&res_path, e))?;
    }
    w.flush().map_err(|e| entpath_core::Error::Io {
        path: res_path.clone(),
        source: e,
    })?;

    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass = max_residual < PATH_SUM_TOLERANCE && enumerated as u128 == path_count(circuit.len());
    out.write_json(
        "report.json",
        &PathsReport {
            num_qubits: n,
            gates: circuit.len(),
            start: start.to_string(),
            path_count: path_count(circuit.len()) as u64,
            enumerated_paths: enumerated,
            endpoints_checked: rows.len(),
            max_residual,
            tolerance: PATH_SUM_TOLERANCE,
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct DeutschSummary {
    variant: &'static str,
    balanced: bool,
    probability_first_one: f64,
    cancelled_configurations: Vec<String>,
}

pub fn deutsch(variant: &str, out: &OutDir) -> Result<f64, CliError> {
    let v = DeutschOracle::parse(variant).map_err(|e| CliError::Config(format!("variant: {e}")))?;
    let report = deutsch_path_table(v)?;
    write_amplitude_csv(&out.path("amplitudes.csv"), &report.rows())?;
    let ipath = out.path("interference.csv");
    let mut w = csv_writer(&ipath)?;
    w.write_record(["configuration", "paths", "positive", "negative", "net_re", "net_im", "cancelled"])
        .map_err(|e| csv_error(&ipath, e))?;
    for c in &report.final_interference {
        w.write_record([
            c.config.to_string(),
            c.paths.to_string(),
            format_f64(c.positive),
            format_f64(c.negative),
            format_f64(c.net.re),
            format_f64(c.net.im),
            c.is_cancelled().to_string(),
        ])
        .map_err(|e| csv_error(&ipath, e))?;
    }
    w.flush().map_err(|e| entpath_core::Error::Io {
        path: ipath.clone(),
        source: e,
    })?;
    out.write_json(
        "summary.json",
        &DeutschSummary {
            variant: v.name(),
            balanced: v.is_balanced(),
            probability_first_one: report.probability_first_one,
            cancelled_configurations: report
                .final_interference
                .iter()
                .filter(|c| c.is_cancelled())
                .map(|c| c.config.to_string())
                .collect(),
        },
    )?;
    Ok(report.probability_first_one)
}

pub fn conjecture(cfg: &ConjectureConfig, out: &OutDir, verbose: bool) -> Result<(), CliError> {
    // file targets were made absolute when the config was resolved
    let targets = prepare_targets(cfg, Path::new(""))?;
    if verbose {
        eprintln!("{} targets", targets.len());
    }
    let report = test_conjecture(cfg, &targets)?;
    report.write_json(&out.path("report.json"))?;
    report.write_records_csv(&out.path("records.csv"))?;
    let s = &report.all_targets;
    match (s.empirical_success_rate, s.interval) {
        (Some(rate), Some([lo, hi])) => println!(
            "success rate {rate:.4} (95% interval {lo:.4}..{hi:.4}) over {} synthesized targets, {} degenerate, {} excluded",
            s.targets, report.degenerate_targets, report.excluded_synthesis_failed
        ),
        _ => println!("no target could be synthesized"),
    }
    Ok(())
}
