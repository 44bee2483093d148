//! Sum-over-paths amplitudes, entanglement measures and state-path analytics
//! for circuits of two-qubit gates, plus a synthesis harness that estimates
//! state complexity and compares the path-entanglement sums of the circuits
//! it finds.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the aliases at
//! the crate root fix the common double-precision instances. Trajectory sums
//! also accept exact rationals, see [`RationalTrajectory`].

pub mod canonical;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod paths;
pub mod quantum;
pub mod scalar;
pub mod seed;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;

pub type StateVectorF64 = quantum::StateVector<f64>;
pub type StateVectorF32 = quantum::StateVector<f32>;
pub type TwoQubitGateF64 = quantum::TwoQubitGate<f64>;
pub type TwoQubitGateF32 = quantum::TwoQubitGate<f32>;
pub type CircuitF64 = quantum::Circuit<f64>;
pub type CircuitF32 = quantum::Circuit<f32>;
pub type StatePathF64 = quantum::StatePath<f64>;
pub type DensityMatrixF64 = entanglement::DensityMatrix<f64>;
pub type TrajectoryF64 = trajectory::EntanglementTrajectory<f64>;
/// Trajectory over exact rationals; sums and splits are exact.
pub type RationalTrajectory = trajectory::EntanglementTrajectory<num_rational::BigRational>;
