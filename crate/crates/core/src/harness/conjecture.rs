//! The minimum entanglement-path experiment: per target, find the optimal
//! gate count, collect path families at and above it, and check whether an
//! optimal circuit lies in the lowest entanglement-sum bin.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::architecture::qubit_pairs;
use super::complexity::{estimate_state_complexity, Exhaustiveness, SynthesisProblem};
use super::families::{collect_families, record_for_circuit, FamilySettings, PathFamilyRecord};
use super::optimizer::OptimizerBudget;
use super::stats::{spearman, wilson_interval, Z95};
use super::DEFAULT_ARCHITECTURE_CAP;
use crate::canonical::to_canonical_json;
use crate::entanglement::{geometric_entanglement, GeometricOptions, Measure, QubitSet};
use crate::error::{Error, Result};
use crate::quantum::{haar_random_su4, Circuit, StateDocument, StateVector, TwoQubitGate, MAX_QUBITS};
use crate::seed::{derive_seed, rng_from_seed};

/// Targets whose geometric entanglement is below this are degenerate.
pub const DEGENERATE_THRESHOLD: f64 = 1e-6;

/// Random target: `r_gen` Haar SU(4) gates on uniformly drawn qubit pairs
/// applied to `|0...0>`. The generating circuit is returned alongside.
pub fn sample_target(n: usize, r_gen: usize, seed: u64) -> Result<(StateVector<f64>, Circuit<f64>)> {
    if r_gen < 1 {
        return Err(Error::invalid("r_gen must be at least 1"));
    }
    if n < 2 {
        return Err(Error::invalid("targets need at least two qubits"));
    }
    let pairs = qubit_pairs(n);
    let mut rng = rng_from_seed(derive_seed(seed, &[0]));
    let gates = (0..r_gen)
        .map(|i| {
            let pair = pairs[rng.random_range(0..pairs.len())];
            TwoQubitGate::new(pair, haar_random_su4(derive_seed(seed, &[1, i as u64])))
        })
        .collect::<Result<Vec<_>>>()?;
    let circuit = Circuit::from_gates(n, gates)?;
    let state = circuit.apply(&StateVector::zero(n)?)?;
    Ok((state, circuit))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureName {
    #[default]
    Geometric,
    Vonneumann,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    /// `count` random targets; each draws its generator depth uniformly from
    /// `1..=r_gen`.
    Random { count: usize, r_gen: usize, seed: u64 },
    /// State files in the `StateDocument` format.
    Files { files: Vec<PathBuf> },
}

fn default_fidelity_tol() -> f64 {
    1e-4
}
fn default_r_max() -> usize {
    4
}
fn default_delta() -> f64 {
    1e-3
}
fn default_samples() -> usize {
    4
}
fn default_extra() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureConfig {
    pub n: usize,
    pub targets: TargetSpec,
    #[serde(default = "default_fidelity_tol")]
    pub fidelity_tol: f64,
    #[serde(default = "default_r_max")]
    pub r_max: usize,
    #[serde(rename = "delta_E_bin", default = "default_delta")]
    pub delta_e_bin: f64,
    #[serde(default)]
    pub measure: MeasureName,
    /// Qubits kept on one side of the cut (bitmask), von Neumann only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<u64>,
    #[serde(default)]
    pub budget: OptimizerBudget,
    /// Worker count hint; outputs never depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    /// Synthesis attempts per gate count when collecting families.
    #[serde(default = "default_samples")]
    pub samples_per_r: usize,
    /// Families are collected for `r_star..=r_star + extra_gates`.
    #[serde(default = "default_extra")]
    pub extra_gates: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ConjectureConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_QUBITS {
            return Err(Error::invalid(format!("n: must lie in 2..={MAX_QUBITS}, got {}", self.n)));
        }
        match &self.targets {
            TargetSpec::Random { count, r_gen, .. } => {
                if *count == 0 {
                    return Err(Error::invalid("targets.count: at least one target required"));
                }
                if *r_gen == 0 {
                    return Err(Error::invalid("targets.r_gen: must be at least 1"));
                }
            }
            TargetSpec::Files { files } => {
                if files.is_empty() {
                    return Err(Error::invalid("targets.files: at least one target required"));
                }
            }
        }
        if !(self.fidelity_tol > 0.0 && self.fidelity_tol < 1.0) {
            return Err(Error::invalid("fidelity_tol: must lie in (0, 1)"));
        }
        if self.r_max == 0 {
            return Err(Error::invalid("r_max: must be at least 1"));
        }
        if !(self.delta_e_bin > 0.0 && self.delta_e_bin.is_finite()) {
            return Err(Error::invalid("delta_E_bin: must be positive"));
        }
        if self.budget.restarts == 0 {
            return Err(Error::invalid("budget.restarts: must be at least 1"));
        }
        if !(self.budget.fd_step > 0.0 && self.budget.fd_step.is_finite()) {
            return Err(Error::invalid("budget.fd_step: must be positive"));
        }
        if self.samples_per_r == 0 {
            return Err(Error::invalid("samples_per_r: must be at least 1"));
        }
        if self.parallelism == Some(0) {
            return Err(Error::invalid("parallelism: must be at least 1"));
        }
        self.measure()?;
        Ok(())
    }

    pub fn measure(&self) -> Result<Measure> {
        resolve_measure(self.measure, self.cut, self.n)
    }
}

/// Measure for `n`-qubit states. A cut is required for (and only allowed
/// with) the von Neumann measure and must be a proper nonempty subset.
pub fn resolve_measure(name: MeasureName, cut: Option<u64>, n: usize) -> Result<Measure> {
    match (name, cut) {
        (MeasureName::Geometric, None) => Ok(Measure::default()),
        (MeasureName::Geometric, Some(_)) => Err(Error::invalid("cut: only valid with the vonneumann measure")),
        (MeasureName::Vonneumann, None) => Err(Error::invalid("cut: required with the vonneumann measure")),
        (MeasureName::Vonneumann, Some(mask)) => {
            let full = (1u64 << n) - 1;
            if mask == 0 || mask & full == full || mask & !full != 0 {
                return Err(Error::invalid(format!("cut: {mask:#b} is not a proper nonempty subset of {n} qubits")));
            }
            Ok(Measure::VonNeumann { cut: QubitSet(mask) })
        }
    }
}

#[derive(Clone, Debug)]
pub struct TargetInput {
    pub label: String,
    pub state: StateVector<f64>,
    pub r_gen: Option<usize>,
}

/// Materializes the configured targets. Relative file paths resolve against
/// `base_dir`.
pub fn prepare_targets(config: &ConjectureConfig, base_dir: &Path) -> Result<Vec<TargetInput>> {
    match &config.targets {
        TargetSpec::Random { count, r_gen, seed } => (0..*count)
            .map(|i| {
                let tseed = derive_seed(*seed, &[i as u64]);
                let depth = rng_from_seed(tseed).random_range(1..=*r_gen);
                let (state, _) = sample_target(config.n, depth, derive_seed(tseed, &[1]))?;
                Ok(TargetInput {
                    label: format!("random-{i}"),
                    state,
                    r_gen: Some(depth),
                })
            })
            .collect(),
        TargetSpec::Files { files } => files
            .iter()
            .map(|f| {
                let state = StateDocument::read(&base_dir.join(f))?.to_state()?;
                if state.num_qubits() != config.n {
                    return Err(Error::invalid(format!(
                        "targets.files: {} has {} qubits, config says {}",
                        f.display(),
                        state.num_qubits(),
                        config.n
                    )));
                }
                Ok(TargetInput {
                    label: f.display().to_string(),
                    state,
                    r_gen: None,
                })
            })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetStatus {
    Synthesized,
    SynthesisFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetOutcome {
    pub index: usize,
    pub label: String,
    pub r_gen: Option<usize>,
    pub status: TargetStatus,
    pub target_geometric_entanglement: f64,
    pub degenerate: bool,
    pub r_star: Option<usize>,
    pub achieved_fidelity: Option<f64>,
    pub exhaustiveness: Option<Exhaustiveness>,
    /// Best fidelity at each gate count that failed the tolerance.
    pub failed_fidelity_per_r: Vec<f64>,
    pub records: usize,
    pub min_bin: Option<i64>,
    pub success: Option<bool>,
    /// Minimum bin over records with `r >= r_star` only.
    pub min_bin_restricted: Option<i64>,
    pub success_restricted: Option<bool>,
    /// Spearman correlation of entanglement sum against gate count.
    pub rank_correlation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub target: usize,
    #[serde(flatten)]
    pub record: PathFamilyRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub targets: usize,
    pub successes: usize,
    pub empirical_success_rate: Option<f64>,
    pub interval: Option<[f64; 2]>,
    pub epsilon_hat: Option<f64>,
    pub epsilon_interval: Option<[f64; 2]>,
}

impl RateSummary {
    pub fn new(successes: usize, targets: usize) -> Self {
        let rate = (targets > 0).then(|| successes as f64 / targets as f64);
        let interval = wilson_interval(successes, targets, Z95).map(|(lo, hi)| [lo, hi]);
        Self {
            targets,
            successes,
            empirical_success_rate: rate,
            interval,
            epsilon_hat: rate.map(|r| 1.0 - r),
            epsilon_interval: interval.map(|[lo, hi]| [1.0 - hi, 1.0 - lo]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollarySummary {
    /// Spearman correlation of family bin against gate count over all records.
    pub pooled_rank_correlation: Option<f64>,
    pub mean_target_rank_correlation: Option<f64>,
    pub targets_with_statistic: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub config: ConjectureConfig,
    pub targets: Vec<TargetOutcome>,
    pub records: Vec<ReportRecord>,
    pub synthesized_targets: usize,
    pub excluded_synthesis_failed: usize,
    pub degenerate_targets: usize,
    /// Over synthesized targets, degenerate ones included.
    pub all_targets: RateSummary,
    pub excluding_degenerate: RateSummary,
    pub restricted_all_targets: RateSummary,
    pub restricted_excluding_degenerate: RateSummary,
    pub corollary: CorollarySummary,
}

impl ConjectureReport {
    pub fn to_canonical_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    /// Records sorted by target, family bin, gate count and id.
    pub fn ranking(&self) -> Vec<&ReportRecord> {
        let mut v: Vec<&ReportRecord> = self.records.iter().collect();
        v.sort_by(|a, b| {
            (a.target, a.record.family_bin, a.record.r, &a.record.circuit_id).cmp(&(
                b.target,
                b.record.family_bin,
                b.record.r,
                &b.record.circuit_id,
            ))
        });
        v
    }

    /// Writes the ranking as CSV.
    pub fn write_records_csv(&self, path: &Path) -> Result<()> {
        let csv_err = |e| Error::Csv {
            path: path.into(),
            source: e,
        };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record(["target", "circuit_id", "r", "sum_value", "family_bin", "is_optimal_r", "fidelity"])
            .map_err(csv_err)?;
        for rec in self.ranking() {
            let r = &rec.record;
            w.write_record([
                rec.target.to_string(),
                r.circuit_id.clone(),
                r.r.to_string(),
                crate::canonical::format_f64(r.sum_value),
                r.family_bin.to_string(),
                r.is_optimal_r.to_string(),
                crate::canonical::format_f64(r.fidelity),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_canonical_json()?).map_err(|e| Error::io(path, e))
    }
}

/// Minimum family bin among `records`, independent of their order.
pub fn minimum_bin<'a>(records: impl IntoIterator<Item = &'a PathFamilyRecord>) -> Option<i64> {
    records.into_iter().map(|r| r.family_bin).min()
}

fn evaluate_target(
    index: usize,
    input: &TargetInput,
    config: &ConjectureConfig,
    settings: &FamilySettings,
) -> Result<(TargetOutcome, Vec<PathFamilyRecord>)> {
    let e_target = geometric_entanglement(&input.state, &GeometricOptions::default())?.value;
    let mut outcome = TargetOutcome {
        index,
        label: input.label.clone(),
        r_gen: input.r_gen,
        status: TargetStatus::SynthesisFailed,
        target_geometric_entanglement: e_target,
        degenerate: e_target < DEGENERATE_THRESHOLD,
        r_star: None,
        achieved_fidelity: None,
        exhaustiveness: None,
        failed_fidelity_per_r: Vec::new(),
        records: 0,
        min_bin: None,
        success: None,
        min_bin_restricted: None,
        success_restricted: None,
        rank_correlation: None,
    };
    let tseed = derive_seed(config.seed, &[index as u64]);
    let mut problem = SynthesisProblem::new(input.state.clone(), config.fidelity_tol, config.r_max, config.budget, derive_seed(tseed, &[1]))?;
    problem.architecture_cap = settings.architecture_cap;
    let estimate = match estimate_state_complexity(&problem) {
        Ok(e) => e,
        Err(Error::SynthesisNotFound { best_fidelity_per_r }) => {
            outcome.failed_fidelity_per_r = best_fidelity_per_r;
            return Ok((outcome, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let r_star = estimate.r_star;
    outcome.status = TargetStatus::Synthesized;
    outcome.r_star = Some(r_star);
    outcome.achieved_fidelity = Some(estimate.achieved_fidelity);
    outcome.exhaustiveness = Some(estimate.exhaustiveness);
    outcome.failed_fidelity_per_r = estimate.failed_fidelity_per_r.clone();

    let mut records = vec![record_for_circuit(
        "witness",
        &estimate.witness,
        estimate.achieved_fidelity,
        settings,
        Some(r_star),
    )?];
    records.extend(collect_families(
        &input.state,
        r_star.max(1)..=r_star + config.extra_gates,
        config.samples_per_r,
        derive_seed(tseed, &[2]),
        settings,
        Some(r_star),
    )?);

    let success_in = |min: Option<i64>, recs: &[&PathFamilyRecord]| {
        min.map(|m| recs.iter().any(|r| r.is_optimal_r && r.family_bin == m))
    };
    let all: Vec<&PathFamilyRecord> = records.iter().collect();
    let restricted: Vec<&PathFamilyRecord> = records.iter().filter(|r| r.r >= r_star).collect();
    outcome.records = records.len();
    outcome.min_bin = minimum_bin(all.iter().copied());
    outcome.success = success_in(outcome.min_bin, &all);
    outcome.min_bin_restricted = minimum_bin(restricted.iter().copied());
    outcome.success_restricted = success_in(outcome.min_bin_restricted, &restricted);
    let sums: Vec<f64> = records.iter().map(|r| r.sum_value).collect();
    let depths: Vec<f64> = records.iter().map(|r| r.r as f64).collect();
    outcome.rank_correlation = spearman(&sums, &depths);
    Ok((outcome, records))
}

/// Runs the experiment over prepared targets. Targets are processed in
/// parallel and reassembled by index, so the report does not depend on the
/// worker count.
pub fn test_conjecture(config: &ConjectureConfig, targets: &[TargetInput]) -> Result<ConjectureReport> {
    config.validate()?;
    if targets.is_empty() {
        return Err(Error::invalid("at least one target required"));
    }
    let settings = FamilySettings {
        fidelity_tol: config.fidelity_tol,
        delta_e_bin: config.delta_e_bin,
        measure: config.measure()?,
        budget: config.budget,
        architecture_cap: DEFAULT_ARCHITECTURE_CAP,
    };
    let evaluated = targets
        .par_iter()
        .enumerate()
        .map(|(i, t)| evaluate_target(i, t, config, &settings))
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = Vec::with_capacity(evaluated.len());
    let mut records = Vec::new();
    for (o, recs) in evaluated {
        records.extend(recs.into_iter().map(|record| ReportRecord { target: o.index, record }));
        outcomes.push(o);
    }

    let synthesized: Vec<&TargetOutcome> = outcomes.iter().filter(|o| o.status == TargetStatus::Synthesized).collect();
    let rate = |filter: &dyn Fn(&TargetOutcome) -> bool, restricted: bool| {
        let pool: Vec<_> = synthesized.iter().filter(|o| filter(o)).collect();
        let wins = pool
            .iter()
            .filter(|o| if restricted { o.success_restricted } else { o.success } == Some(true))
            .count();
        RateSummary::new(wins, pool.len())
    };
    let any = |_: &TargetOutcome| true;
    let nondegenerate = |o: &TargetOutcome| !o.degenerate;

    let per_target: Vec<f64> = outcomes.iter().filter_map(|o| o.rank_correlation).collect();
    let bins: Vec<f64> = records.iter().map(|r| r.record.family_bin as f64).collect();
    let depths: Vec<f64> = records.iter().map(|r| r.record.r as f64).collect();
    let corollary = CorollarySummary {
        pooled_rank_correlation: spearman(&bins, &depths),
        mean_target_rank_correlation: (!per_target.is_empty())
            .then(|| per_target.iter().sum::<f64>() / per_target.len() as f64),
        targets_with_statistic: per_target.len(),
    };

    Ok(ConjectureReport {
        config: config.clone(),
        synthesized_targets: synthesized.len(),
        excluded_synthesis_failed: outcomes.len() - synthesized.len(),
        degenerate_targets: synthesized.iter().filter(|o| o.degenerate).count(),
        all_targets: rate(&any, false),
        excluding_degenerate: rate(&nondegenerate, false),
        restricted_all_targets: rate(&any, true),
        restricted_excluding_degenerate: rate(&nondegenerate, true),
        corollary,
        targets: outcomes,
        records,
    })
}

/// Prepares targets and runs the experiment.
pub fn run_conjecture(config: &ConjectureConfig, base_dir: &Path) -> Result<ConjectureReport> {
    test_conjecture(config, &prepare_targets(config, base_dir)?)
}
