use super::gate::{apply_matrix_in_place, TwoQubitGate};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ordered gate slots on `num_qubits` qubits; one topological order of the
/// gate DAG.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Architecture {
    num_qubits: usize,
    slots: Vec<(usize, usize)>,
}

impl Architecture {
    pub fn new(num_qubits: usize, slots: Vec<(usize, usize)>) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::invalid("an architecture needs at least two qubits"));
        }
        for (i, &(j, k)) in slots.iter().enumerate() {
            if j == k || j >= num_qubits || k >= num_qubits {
                return Err(Error::invalid(format!(
                    "slot {i} pair ({j}, {k}) invalid for {num_qubits} qubits"
                )));
            }
        }
        Ok(Self { num_qubits, slots })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// An architecture instantiated with one gate per slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T: Real> {
    architecture: Architecture,
    gates: Vec<TwoQubitGate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(architecture: Architecture, gates: Vec<TwoQubitGate<T>>) -> Result<Self> {
        if gates.len() != architecture.len() {
            return Err(Error::invalid(format!(
                "{} gates for {} slots",
                gates.len(),
                architecture.len()
            )));
        }
        for (i, (g, &slot)) in gates.iter().zip(architecture.slots()).enumerate() {
            if g.pair() != slot {
                return Err(Error::invalid(format!(
                    "gate {i} acts on {:?} but slot expects {:?}",
                    g.pair(),
                    slot
                )));
            }
        }
        Ok(Self {
            architecture,
            gates,
        })
    }

    /// Derives the architecture from the gates' own pairs.
    pub fn from_gates(num_qubits: usize, gates: Vec<TwoQubitGate<T>>) -> Result<Self> {
        let arch = Architecture::new(num_qubits, gates.iter().map(|g| g.pair()).collect())?;
        Self::new(arch, gates)
    }

    pub fn empty(num_qubits: usize) -> Result<Self> {
        Self::new(Architecture::new(num_qubits, Vec::new())?, Vec::new())
    }

    #[inline]
    pub fn architecture(&self) -> &Architecture {
        &self.architecture
    }

    #[inline]
    pub fn gates(&self) -> &[TwoQubitGate<T>] {
        &self.gates
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.architecture.num_qubits()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Final state only, without materializing intermediate states.
    pub fn apply(&self, initial: &StateVector<T>) -> Result<StateVector<T>> {
        check_width(self, initial)?;
        let mut amps = initial.amplitudes().to_vec();
        for g in &self.gates {
            apply_matrix_in_place(&mut amps, initial.num_qubits(), g.pair(), g.matrix());
        }
        Ok(StateVector::from_evolved(initial.num_qubits(), amps))
    }
}

fn check_width<T: Real>(circuit: &Circuit<T>, state: &StateVector<T>) -> Result<()> {
    if circuit.num_qubits() != state.num_qubits() {
        return Err(Error::invalid(format!(
            "circuit has {} qubits, state has {}",
            circuit.num_qubits(),
            state.num_qubits()
        )));
    }
    Ok(())
}

/// The states `psi_0 ... psi_R` visited by a circuit; `psi_0` is the input.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePath<T: Real> {
    states: Vec<StateVector<T>>,
}

impl<T: Real> StatePath<T> {
    pub fn new(states: Vec<StateVector<T>>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::invalid("a state-path needs at least one state"));
        };
        let n = first.num_qubits();
        for (k, s) in states.iter().enumerate() {
            if s.num_qubits() != n {
                return Err(Error::invalid(format!("state {k} has a different qubit count")));
            }
            if (s.norm() - T::one()).abs() > T::TOL {
                return Err(Error::invalid(format!("state {k} is not normalized")));
            }
        }
        Ok(Self { states })
    }

    #[inline]
    pub fn states(&self) -> &[StateVector<T>] {
        &self.states
    }

    /// Number of gate steps `R` (one less than the number of states).
    #[inline]
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    #[inline]
    pub fn last(&self) -> &StateVector<T> {
        self.states.last().expect("state-path is never empty")
    }
}

/// Runs `circuit` on `initial`, capturing the state after every gate.
pub fn run_circuit<T: Real>(circuit: &Circuit<T>, initial: &StateVector<T>) -> Result<StatePath<T>> {
    check_width(circuit, initial)?;
    let n = initial.num_qubits();
    let mut states = Vec::with_capacity(circuit.len() + 1);
    states.push(initial.clone());
    let mut amps = initial.amplitudes().to_vec();
    for g in circuit.gates() {
        apply_matrix_in_place(&mut amps, n, g.pair(), g.matrix());
        states.push(StateVector::from_evolved(n, amps.clone()));
    }
    Ok(StatePath { states })
}
