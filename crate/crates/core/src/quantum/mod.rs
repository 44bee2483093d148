//! Dense statevector simulation of n-qubit registers driven by two-qubit
//! gates.
//!
//! Basis convention, shared by every module of the crate: qubit 0 is the most
//! significant bit of a basis index. For a gate on the ordered pair `(j, k)`
//! the 4x4 matrix is indexed by `2 * bit_j + bit_k`.

mod circuit;
mod gate;
pub(crate) use gate::apply_matrix_in_place;
mod haar;
mod io;
mod state;

pub use circuit::{run_circuit, Architecture, Circuit, StatePath};
pub use gate::{apply_gate, standard, TwoQubitGate};
pub use haar::{haar_random_su4, haar_random_su4_with, haar_random_unitary4_with};
pub use io::{CircuitDocument, GateRecord, StateDocument};
pub use state::{fidelity, BasisConfiguration, StateVector, MAX_QUBITS};
