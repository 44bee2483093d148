use entpath_core::entanglement::{geometric_entanglement, reduced_density_matrix, von_neumann_entropy, GeometricOptions, QubitSet};
use entpath_core::paths::deutsch::{deutsch_path_table, DeutschOracle};
use entpath_core::paths::{enumerate_paths, path_count, verify_path_sum, Endpoint, DEFAULT_PATH_CAP};
use entpath_core::quantum::{haar_random_su4, BasisConfiguration, StateDocument, StateVector, TwoQubitGate};
use entpath_core::harness::sample_target;
use entpath_core::seed::derive_seed;
use serde::Serialize;

use crate::error::CliError;

const BELL: &str = include_str!("../../core/fixtures/bell.json");
const GHZ3: &str = include_str!("../../core/fixtures/ghz3.json");
const W3: &str = include_str!("../../core/fixtures/w3.json");
const PRODUCT: &str = include_str!("../../core/fixtures/product.json");

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn near(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
        }
    }
}

fn fixture(text: &str) -> Result<StateVector<f64>, CliError> {
    Ok(serde_json::from_str::<StateDocument>(text)
        .map_err(entpath_core::Error::from)?
        .to_state()?)
}

fn eg(s: &StateVector<f64>) -> Result<f64, CliError> {
    Ok(geometric_entanglement(s, &GeometricOptions::default())?.value)
}

fn entropy(s: &StateVector<f64>, keep: &[usize]) -> Result<f64, CliError> {
    Ok(von_neumann_entropy(&reduced_density_matrix(s, QubitSet::from_qubits(keep))?)?.value)
}

/// Largest `|mean |U_ij|^2 - 1/4|` over entries, in units of its standard error,
/// and the largest unitarity residual, over `samples` Haar draws.
fn haar_statistics(samples: usize, seed: u64) -> Result<(f64, f64), CliError> {
    let mut sum = [[0.0f64; 4]; 4];
    let mut sum_sq = [[0.0f64; 4]; 4];
    let mut worst_residual = 0.0f64;
    for i in 0..samples {
        let u = haar_random_su4::<f64>(derive_seed(seed, &[i as u64]));
        worst_residual = worst_residual.max(TwoQubitGate::new((0, 1), u)?.unitarity_residual());
        for r in 0..4 {
            for c in 0..4 {
                let p = u[r][c].norm_sqr();
                sum[r][c] += p;
                sum_sq[r][c] += p * p;
            }
        }
    }
    let n = samples as f64;
    let mut worst_z = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            let mean = sum[r][c] / n;
            let var = (sum_sq[r][c] / n - mean * mean) * n / (n - 1.0);
            worst_z = worst_z.max((mean - 0.25).abs() / (var / n).sqrt());
        }
    }
    Ok((worst_z, worst_residual))
}

pub fn run_checks() -> Result<Vec<Check>, CliError> {
    let bell = fixture(BELL)?;
    let ghz = fixture(GHZ3)?;
    let w = fixture(W3)?;
    let product = fixture(PRODUCT)?;
    let w_marginal = -(2.0f64 / 3.0) * (2.0f64 / 3.0).log2() - (1.0f64 / 3.0) * (1.0f64 / 3.0).log2();

    let mut checks = vec![
        Check::near("geometric product", eg(&product)?, 0.0, 1e-9),
        Check::near("geometric bell", eg(&bell)?, 0.5, 1e-6),
        Check::near("geometric ghz3", eg(&ghz)?, 0.5, 1e-6),
        Check::near("geometric w3", eg(&w)?, 5.0 / 9.0, 1e-4),
        Check::near("entropy bell marginal", entropy(&bell, &[0])?, 1.0, 1e-9),
        Check::near("entropy w3 marginal", entropy(&w, &[0])?, w_marginal, 1e-6),
    ];

    let mut worst = 0.0f64;
    let mut count_ok = true;
    for i in 0..12u64 {
        let n = 2 + i as usize % 2;
        let r = 1 + i as usize % 5;
        let (_, c) = sample_target(n, r, derive_seed(0x5e1f, &[i]))?;
        let start = BasisConfiguration::new(n, (i as usize * 3) % (1 << n))?;
        let ends: Vec<_> = (0..1usize << n)
            .map(|e| BasisConfiguration::new(n, e).map(|e| (start, e)))
            .collect::<Result<_, _>>()?;
        for row in verify_path_sum(&c, &ends, DEFAULT_PATH_CAP)? {
            worst = worst.max(row.residual);
        }
        count_ok &= enumerate_paths(&c, start, Endpoint::All, DEFAULT_PATH_CAP)?.count() as u128 == path_count(r);
    }
    checks.push(Check::near("path sum residual", worst, 0.0, 1e-9));
    checks.push(Check::near("path count 4^R", if count_ok { 1.0 } else { 0.0 }, 1.0, 0.0));

    let (z, residual) = haar_statistics(2000, 0x4a11)?;
    checks.push(Check {
        name: "haar |U_ij|^2 mean (std errors)",
        value: z,
        expected: 0.0,
        tolerance: 3.0,
        pass: z <= 3.0,
    });
    checks.push(Check::near("haar unitarity residual", residual, 0.0, 1e-10));

    checks.push(Check::near(
        "deutsch not, P(first = 1)",
        deutsch_path_table(DeutschOracle::Not)?.probability_first_one,
        1.0,
        1e-12,
    ));
    checks.push(Check::near(
        "deutsch zero, P(first = 1)",
        deutsch_path_table(DeutschOracle::Zero)?.probability_first_one,
        0.0,
        1e-12,
    ));
    Ok(checks)
}

pub fn print_table(checks: &[Check]) {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("{:<width$}  {:>12}  {:>12}  {:>9}  result", "check", "value", "expected", "tolerance");
    for c in checks {
        println!(
            "{:<width$}  {:>12.6e}  {:>12.6e}  {:>9.1e}  {}",
            c.name,
            c.value,
            c.expected,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
}
