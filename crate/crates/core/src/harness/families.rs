//! Collections of state-paths preparing one target, keyed by entanglement sum.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complexity::architectures_for;
use super::optimizer::{optimize_gates, OptimizerBudget};
use super::DEFAULT_ARCHITECTURE_CAP;
use crate::entanglement::Measure;
use crate::error::{Error, Result};
use crate::quantum::{run_circuit, Circuit, StateVector};
use crate::seed::{derive_seed, rng_from_seed};
use crate::trajectory::{path_entanglement_sum, trajectory};

#[derive(Clone, Copy, Debug)]
pub struct FamilySettings {
    pub fidelity_tol: f64,
    pub delta_e_bin: f64,
    pub measure: Measure,
    pub budget: OptimizerBudget,
    pub architecture_cap: u128,
}

impl Default for FamilySettings {
    fn default() -> Self {
        Self {
            fidelity_tol: 1e-4,
            delta_e_bin: 1e-3,
            measure: Measure::default(),
            budget: OptimizerBudget::default(),
            architecture_cap: DEFAULT_ARCHITECTURE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFamilyRecord {
    pub circuit_id: String,
    pub r: usize,
    pub sum_value: f64,
    pub family_bin: i64,
    pub is_optimal_r: bool,
    pub fidelity: f64,
    pub architecture: Vec<[usize; 2]>,
    pub trajectory: Vec<f64>,
}

/// `floor(sum / delta)`.
pub fn family_bin(sum: f64, delta: f64) -> i64 {
    (sum / delta).floor() as i64
}

/// Record for a circuit already known to prepare the target.
pub fn record_for_circuit(
    circuit_id: impl Into<String>,
    circuit: &Circuit<f64>,
    fidelity: f64,
    settings: &FamilySettings,
    optimal_r: Option<usize>,
) -> Result<PathFamilyRecord> {
    let path = run_circuit(circuit, &StateVector::zero(circuit.num_qubits())?)?;
    let traj = trajectory(&path, &settings.measure)?;
    let sum_value = path_entanglement_sum(&traj).value;
    Ok(PathFamilyRecord {
        circuit_id: circuit_id.into(),
        r: circuit.len(),
        sum_value,
        family_bin: family_bin(sum_value, settings.delta_e_bin),
        is_optimal_r: optimal_r == Some(circuit.len()),
        fidelity,
        architecture: circuit.architecture().slots().iter().map(|&(j, k)| [j, k]).collect(),
        trajectory: traj.values().to_vec(),
    })
}

/// Synthesizes up to `samples_per_r` circuits for each gate count in
/// `r_range`, each on an architecture drawn without replacement (cycling
/// once exhausted), and keeps those reaching the fidelity tolerance.
pub fn collect_families(
    target: &StateVector<f64>,
    r_range: RangeInclusive<usize>,
    samples_per_r: usize,
    seed: u64,
    settings: &FamilySettings,
    optimal_r: Option<usize>,
) -> Result<Vec<PathFamilyRecord>> {
    if !(settings.delta_e_bin > 0.0 && settings.delta_e_bin.is_finite()) {
        return Err(Error::invalid("delta_E_bin must be positive"));
    }
    let n = target.num_qubits();
    let threshold = 1.0 - settings.fidelity_tol;
    let mut jobs = Vec::new();
    for r in r_range.filter(|&r| r >= 1) {
        let rseed = derive_seed(seed, &[r as u64]);
        let (mut archs, _) = architectures_for(n, r, settings.architecture_cap, samples_per_r.max(1), rseed)?;
        archs.shuffle(&mut rng_from_seed(rseed));
        for s in 0..samples_per_r {
            jobs.push((r, s, archs[s % archs.len()].clone()));
        }
    }
    let found: Vec<Option<PathFamilyRecord>> = jobs
        .par_iter()
        .map(|(r, s, arch)| {
            let out = optimize_gates(arch, target, &settings.budget, derive_seed(seed, &[*r as u64, *s as u64]), &[])?;
            if out.fidelity < threshold {
                return Ok(None);
            }
            record_for_circuit(format!("r{r}-s{s}"), &out.circuit, out.fidelity, settings, optimal_r).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
