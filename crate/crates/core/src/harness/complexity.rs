//! Upper-bound estimates of state complexity by increasing-depth synthesis.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::architecture::{canonical_slots, enumerate_architectures, qubit_pairs, raw_sequence_count};
use super::optimizer::{identity_params, optimize_gates, OptimizerBudget};
use super::DEFAULT_ARCHITECTURE_CAP;
use crate::error::{Error, Result};
use crate::quantum::{fidelity, Architecture, Circuit, StateVector};
use crate::seed::{derive_seed, rng_from_seed};

/// Architectures drawn per gate count when enumeration exceeds its cap.
pub const DEFAULT_SAMPLED_ARCHITECTURES: usize = 64;

#[derive(Clone, Debug)]
pub struct SynthesisProblem {
    pub target: StateVector<f64>,
    /// A circuit prepares the target iff its fidelity is at least `1 - fidelity_tol`.
    pub fidelity_tol: f64,
    pub r_max: usize,
    pub budget: OptimizerBudget,
    pub seed: u64,
    pub architecture_cap: u128,
    pub sampled_architectures: usize,
}

impl SynthesisProblem {
    pub fn new(target: StateVector<f64>, fidelity_tol: f64, r_max: usize, budget: OptimizerBudget, seed: u64) -> Result<Self> {
        if !(fidelity_tol > 0.0 && fidelity_tol < 1.0) {
            return Err(Error::invalid(format!("fidelity_tol must lie in (0, 1), got {fidelity_tol}")));
        }
        if r_max < 1 {
            return Err(Error::invalid("r_max must be at least 1"));
        }
        if target.num_qubits() < 2 {
            return Err(Error::invalid("synthesis needs at least two qubits"));
        }
        Ok(Self {
            target,
            fidelity_tol,
            r_max,
            budget,
            seed,
            architecture_cap: DEFAULT_ARCHITECTURE_CAP,
            sampled_architectures: DEFAULT_SAMPLED_ARCHITECTURES,
        })
    }

    pub fn threshold(&self) -> f64 {
        1.0 - self.fidelity_tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exhaustiveness {
    /// Every canonical architecture below `r_star` was searched.
    ArchitectureExhaustive,
    /// Some gate count below `r_star` was searched on a random subset.
    Sampled,
}

impl Exhaustiveness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exhaustiveness::ArchitectureExhaustive => "ARCHITECTURE_EXHAUSTIVE",
            Exhaustiveness::Sampled => "SAMPLED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComplexityEstimate {
    pub r_star: usize,
    pub witness: Circuit<f64>,
    pub achieved_fidelity: f64,
    pub exhaustiveness: Exhaustiveness,
    /// Best fidelity found at each gate count `1..r_star` (all below threshold).
    pub failed_fidelity_per_r: Vec<f64>,
}

/// Canonical architectures at gate count `r`, with whether the list is
/// complete. Past `cap` raw sequences, `samples` random draws are
/// canonicalized and deduplicated instead.
pub(crate) fn architectures_for(n: usize, r: usize, cap: u128, samples: usize, seed: u64) -> Result<(Vec<Architecture>, bool)> {
    if raw_sequence_count(n, r) <= cap {
        return Ok((enumerate_architectures(n, r, cap)?, true));
    }
    let pairs = qubit_pairs(n);
    let mut rng = rng_from_seed(derive_seed(seed, &[0x5a, r as u64]));
    let mut out: Vec<Architecture> = Vec::new();
    for _ in 0..samples {
        let seq: Vec<_> = (0..r).map(|_| pairs[rng.random_range(0..pairs.len())]).collect();
        let arch = Architecture::new(n, canonical_slots(&seq))?;
        if !out.contains(&arch) {
            out.push(arch);
        }
    }
    Ok((out, false))
}

/// Smallest gate count in `1..=r_max` at which some architecture prepares
/// the target. The state `|0...0>` itself has complexity 0.
pub fn estimate_state_complexity(problem: &SynthesisProblem) -> Result<ComplexityEstimate> {
    let n = problem.target.num_qubits();
    let zero = StateVector::zero(n)?;
    let f0 = fidelity(&zero, &problem.target)?;
    if f0 >= problem.threshold() {
        return Ok(ComplexityEstimate {
            r_star: 0,
            witness: Circuit::empty(n)?,
            achieved_fidelity: f0,
            exhaustiveness: Exhaustiveness::ArchitectureExhaustive,
            failed_fidelity_per_r: Vec::new(),
        });
    }

    let mut failed = Vec::new();
    let mut exhaustive = true;
    // Best parameters per architecture at the previous depth, reused as
    // identity-padded warm starts when a deeper architecture extends one.
    let mut previous: HashMap<Architecture, Vec<f64>> = HashMap::new();
    for r in 1..=problem.r_max {
        let (archs, complete) = architectures_for(
            n,
            r,
            problem.architecture_cap,
            problem.sampled_architectures,
            problem.seed,
        )?;
        let mut best_here = 0.0f64;
        let mut current = HashMap::new();
        for (a, arch) in archs.iter().enumerate() {
            let prefix = Architecture::new(n, arch.slots()[..r - 1].to_vec())?;
            let warm: Vec<Vec<f64>> = previous
                .get(&prefix)
                .map(|p| {
                    let mut w = p.clone();
                    w.extend(identity_params(1));
                    vec![w]
                })
                .unwrap_or_default();
            let seed = derive_seed(problem.seed, &[r as u64, a as u64]);
            let out = optimize_gates(arch, &problem.target, &problem.budget, seed, &warm)?;
            if out.fidelity >= problem.threshold() {
                return Ok(ComplexityEstimate {
                    r_star: r,
                    witness: out.circuit,
                    achieved_fidelity: out.fidelity,
                    exhaustiveness: if exhaustive {
                        Exhaustiveness::ArchitectureExhaustive
                    } else {
                        Exhaustiveness::Sampled
                    },
                    failed_fidelity_per_r: failed,
                });
            }
            best_here = best_here.max(out.fidelity);
            current.insert(arch.clone(), out.params);
        }
        exhaustive &= complete;
        failed.push(best_here);
        previous = current;
    }
    Err(Error::SynthesisNotFound {
        best_fidelity_per_r: failed,
    })
}
