//! Path-interference view of Deutsch's algorithm.
//!
//! Circuit on qubits (0, 1) starting from `|01>`: `H (x) H`, the oracle
//! `|x, y> -> |x, y XOR f(x)>`, then `H (x) I`. Qubit 0 reads 1 for balanced
//! `f` and 0 for constant `f`.

use std::fmt;

use num_complex::Complex;

use super::{enumerate_paths, transition_amplitudes_from, Endpoint, DEFAULT_PATH_CAP};
use crate::error::{Error, Result};
use crate::quantum::standard::{hadamard, identity2, local};
use crate::quantum::{BasisConfiguration, Circuit, StateVector, TwoQubitGate};
use crate::scalar::{cone, czero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeutschOracle {
    /// `f(x) = NOT x` (balanced)
    Not,
    /// `f(x) = x` (balanced)
    Identity,
    /// `f(x) = 0`
    Zero,
    /// `f(x) = 1`
    One,
}

impl DeutschOracle {
    pub const ALL: [DeutschOracle; 4] = [Self::Not, Self::Identity, Self::Zero, Self::One];

    pub fn eval(&self, x: u8) -> u8 {
        match self {
            Self::Not => 1 - x,
            Self::Identity => x,
            Self::Zero => 0,
            Self::One => 1,
        }
    }

    pub fn is_balanced(&self) -> bool {
        matches!(self, Self::Not | Self::Identity)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Not => "not",
            Self::Identity => "identity",
            Self::Zero => "zero",
            Self::One => "one",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown oracle variant {s:?} (not, identity, zero, one)")))
    }
}

impl fmt::Display for DeutschOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Permutation matrix of `|x, y> -> |x, y XOR f(x)>`.
pub fn oracle_gate(variant: DeutschOracle) -> TwoQubitGate<f64> {
    let mut m = [[czero(); 4]; 4];
    for x in 0..2u8 {
        for y in 0..2u8 {
            let input = (2 * x + y) as usize;
            let output = (2 * x + (y ^ variant.eval(x))) as usize;
            m[output][input] = cone();
        }
    }
    TwoQubitGate::new((0, 1), m).expect("permutation matrices are unitary")
}

pub fn deutsch_circuit(variant: DeutschOracle) -> Circuit<f64> {
    let h = hadamard::<f64>();
    let gates = vec![
        local((0, 1), &h, &h).expect("H (x) H is unitary"),
        oracle_gate(variant),
        local((0, 1), &h, &identity2()).expect("H (x) I is unitary"),
    ];
    Circuit::from_gates(2, gates).expect("fixed two-qubit circuit")
}

pub fn deutsch_input() -> BasisConfiguration {
    BasisConfiguration::new(2, 0b01).expect("valid configuration")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Positive,
    Negative,
    Zero,
}

pub fn channel(a: Complex<f64>) -> Channel {
    if a.re > 0.0 {
        Channel::Positive
    } else if a.re < 0.0 {
        Channel::Negative
    } else {
        Channel::Zero
    }
}

/// Amplitudes of every configuration after `k` gates.
#[derive(Clone, Debug, PartialEq)]
pub struct StepAmplitudes {
    pub k: usize,
    pub entries: Vec<(BasisConfiguration, Complex<f64>)>,
}

impl StepAmplitudes {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Path contributions arriving at one final configuration, split by sign.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigInterference {
    pub config: BasisConfiguration,
    pub paths: usize,
    pub positive: f64,
    pub negative: f64,
    pub net: Complex<f64>,
}

impl ConfigInterference {
    /// Paths arrived but their contributions cancel exactly.
    pub fn is_cancelled(&self) -> bool {
        self.paths > 0 && self.positive > 0.0 && self.positive + self.negative == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeutschReport {
    pub variant: DeutschOracle,
    pub steps: Vec<StepAmplitudes>,
    pub final_interference: Vec<ConfigInterference>,
    /// Probability that qubit 0 reads 1 at the end.
    pub probability_first_one: f64,
}

impl DeutschReport {
    /// `(step, configuration, amplitude)` rows for CSV export.
    pub fn rows(&self) -> Vec<(usize, BasisConfiguration, Complex<f64>)> {
        self.steps
            .iter()
            .flat_map(|s| s.entries.iter().map(move |(q, a)| (s.k, *q, *a)))
            .collect()
    }
}

/// Builds the per-step amplitude table from path sums over circuit prefixes.
pub fn deutsch_path_table(variant: DeutschOracle) -> Result<DeutschReport> {
    let circuit = deutsch_circuit(variant);
    let start = deutsch_input();
    let mut steps = Vec::with_capacity(circuit.len() + 1);
    for k in 0..=circuit.len() {
        let prefix = Circuit::from_gates(2, circuit.gates()[..k].to_vec())?;
        let amps = transition_amplitudes_from(&prefix, start, DEFAULT_PATH_CAP)?;
        let entries = amps
            .into_iter()
            .enumerate()
            .map(|(i, a)| (BasisConfiguration::new(2, i).expect("2-qubit index"), a))
            .collect();
        steps.push(StepAmplitudes { k, entries });
    }

    let mut final_interference: Vec<ConfigInterference> = (0..4)
        .map(|i| ConfigInterference {
            config: BasisConfiguration::new(2, i).expect("2-qubit index"),
            paths: 0,
            positive: 0.0,
            negative: 0.0,
            net: czero(),
        })
        .collect();
    for p in enumerate_paths(&circuit, start, Endpoint::All, DEFAULT_PATH_CAP)? {
        let slot = &mut final_interference[p.path.end().index()];
        if p.amplitude.norm_sqr() == 0.0 {
            continue;
        }
        slot.paths += 1;
        slot.net += p.amplitude;
        match channel(p.amplitude) {
            Channel::Positive => slot.positive += p.amplitude.re,
            Channel::Negative => slot.negative += p.amplitude.re,
            Channel::Zero => {}
        }
    }

    let final_state = StateVector::new(
        2,
        steps.last().expect("at least one step").entries.iter().map(|(_, a)| *a).collect(),
    )?;
    Ok(DeutschReport {
        variant,
        steps,
        final_interference,
        probability_first_one: final_state.probability_one(0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_truth_tables() {
        assert_eq!(DeutschOracle::Not.eval(0), 1);
        assert_eq!(DeutschOracle::Identity.eval(1), 1);
        assert!(!DeutschOracle::One.is_balanced());
        assert_eq!(DeutschOracle::parse("not").unwrap(), DeutschOracle::Not);
        assert!(DeutschOracle::parse("xor").is_err());
    }

    #[test]
    fn step_table_matches_direct_simulation() {
        for v in DeutschOracle::ALL {
            let report = deutsch_path_table(v).unwrap();
            let circuit = deutsch_circuit(v);
            let path = crate::quantum::run_circuit(&circuit, &StateVector::basis(deutsch_input()).unwrap()).unwrap();
            for (step, state) in report.steps.iter().zip(path.states()) {
                for (q, a) in &step.entries {
                    assert!((state.amplitude(*q) - a).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn every_step_is_normalized() {
        for v in DeutschOracle::ALL {
            let report = deutsch_path_table(v).unwrap();
            for s in &report.steps {
                assert!((s.norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
