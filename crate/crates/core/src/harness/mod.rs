//! Circuit synthesis, state complexity estimates and the family experiment.

pub mod architecture;
pub mod complexity;
pub mod conjecture;
pub mod families;
pub mod optimizer;
pub mod stats;
pub mod su4;

pub use architecture::{canonical_form, enumerate_architectures, DEFAULT_ARCHITECTURE_CAP};
pub use complexity::{estimate_state_complexity, ComplexityEstimate, Exhaustiveness, SynthesisProblem};
pub use conjecture::{
    prepare_targets, resolve_measure, run_conjecture, sample_target, test_conjecture, ConjectureConfig, ConjectureReport, MeasureName,
    TargetSpec,
};
pub use families::{collect_families, family_bin, record_for_circuit, FamilySettings, PathFamilyRecord};
pub use optimizer::{circuit_from_params, identity_params, optimize_gates, OptimizationOutcome, OptimizerBudget};
pub use su4::{su4_from_params, SU4_PARAMS};
