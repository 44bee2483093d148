//! JSON documents for circuits and states. Matrices are stored as 32 reals,
//! row-major with interleaved real/imaginary parts.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Circuit, StateVector, TwoQubitGate};
use crate::canonical::to_canonical_json;
use crate::error::{Error, Result};
use crate::scalar::czero;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub pair: [usize; 2],
    pub matrix: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub num_qubits: usize,
    pub gates: Vec<GateRecord>,
}

impl CircuitDocument {
    pub fn from_circuit(circuit: &Circuit<f64>) -> Self {
        let gates = circuit
            .gates()
            .iter()
            .map(|g| GateRecord {
                pair: [g.pair().0, g.pair().1],
                matrix: g.matrix().iter().flatten().flat_map(|z| [z.re, z.im]).collect(),
            })
            .collect();
        Self {
            num_qubits: circuit.num_qubits(),
            gates,
        }
    }

    pub fn to_circuit(&self) -> Result<Circuit<f64>> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                if rec.matrix.len() != 32 {
                    return Err(Error::invalid(format!(
                        "gate {i}: expected 32 matrix values, got {}",
                        rec.matrix.len()
                    )));
                }
                let mut m = [[czero(); 4]; 4];
                for (idx, v) in m.iter_mut().flatten().enumerate() {
                    *v = Complex::new(rec.matrix[2 * idx], rec.matrix[2 * idx + 1]);
                }
                TwoQubitGate::new((rec.pair[0], rec.pair[1]), m)
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(self.num_qubits, gates)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&s)
    }
}

/// State file: amplitudes interleaved as `[re0, im0, re1, im1, ...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub num_qubits: usize,
    pub amplitudes: Vec<f64>,
}

impl StateDocument {
    pub fn from_state(state: &StateVector<f64>) -> Self {
        Self {
            num_qubits: state.num_qubits(),
            amplitudes: state.amplitudes().iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Amplitudes are renormalized, so fixtures may be written unnormalized.
    pub fn to_state(&self) -> Result<StateVector<f64>> {
        if !self.amplitudes.len().is_multiple_of(2) {
            return Err(Error::invalid("odd number of amplitude values"));
        }
        let amps = self
            .amplitudes
            .chunks_exact(2)
            .map(|p| Complex::new(p[0], p[1]))
            .collect();
        StateVector::normalized(self.num_qubits, amps)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&s)?)
    }
}
