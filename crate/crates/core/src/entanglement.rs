//! Entanglement of pure states: von Neumann entropy of reduced density
//! matrices (base-2) and geometric entanglement against fully product states.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::StateVector;
use crate::scalar::{czero, Real};
use crate::seed::{derive_seed, rng_from_seed};

/// Set of qubits as a bitmask; bit `q` (value `1 << q`) selects qubit `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitSet(pub u64);

impl QubitSet {
    pub fn from_qubits(qubits: &[usize]) -> Self {
        Self(qubits.iter().fold(0, |m, &q| m | (1 << q)))
    }

    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        (self.0 >> q) & 1 == 1
    }

    pub fn qubits(&self, num_qubits: usize) -> Vec<usize> {
        (0..num_qubits).filter(|&q| self.contains(q)).collect()
    }

    pub fn complement(&self, num_qubits: usize) -> Self {
        Self(!self.0 & ((1u64 << num_qubits) - 1))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureTag {
    #[serde(rename = "VON_NEUMANN_BITS")]
    VonNeumannBits,
    #[serde(rename = "GEOMETRIC")]
    Geometric,
}

impl MeasureTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureTag::VonNeumannBits => "VON_NEUMANN_BITS",
            MeasureTag::Geometric => "GEOMETRIC",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "VON_NEUMANN_BITS" => Ok(MeasureTag::VonNeumannBits),
            "GEOMETRIC" => Ok(MeasureTag::Geometric),
            other => Err(Error::invalid(format!("unknown measure tag {other:?}"))),
        }
    }
}

impl fmt::Display for MeasureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementValue<T> {
    pub value: T,
    pub measure: MeasureTag,
}

/// Unit-trace, Hermitian, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks hermiticity, unit trace and eigenvalues >= -TOL.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("density matrix dimension {dim} not a power of two")));
        }
        if !matrix.is_finite() {
            return Err(Error::invalid("non-finite density matrix entry"));
        }
        let herm = matrix.hermiticity_residual();
        if herm > T::TOL {
            return Err(Error::NumericalDomain(format!("matrix not Hermitian (residual {herm})")));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::TOL || tr.im.abs() > T::TOL {
            return Err(Error::NumericalDomain(format!("trace {tr} differs from 1")));
        }
        let rho = Self { matrix };
        let min = rho.eigenvalues()[0];
        if min < -T::TOL {
            return Err(Error::NumericalDomain(format!("negative eigenvalue {min}")));
        }
        Ok(rho)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.matrix.hermitian_eigen().values
    }
}

/// Partial trace over the complement of `keep`. Kept qubits retain their
/// relative order, lowest-numbered qubit most significant.
pub fn reduced_density_matrix<T: Real>(state: &StateVector<T>, keep: QubitSet) -> Result<DensityMatrix<T>> {
    let n = state.num_qubits();
    if keep.0 >> n != 0 {
        return Err(Error::invalid(format!("keep mask {:#b} names qubits beyond {n}", keep.0)));
    }
    if keep.is_empty() || keep.len() == n {
        return Err(Error::invalid("keep mask must be a nonempty proper subset of the qubits"));
    }
    let kept = keep.qubits(n);
    let traced = keep.complement(n).qubits(n);
    let bit = |q: usize| 1usize << (n - 1 - q);
    // Global index from (kept index, traced index).
    let compose = |a: usize, b: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in kept.iter().enumerate() {
            if (a >> (kept.len() - 1 - pos)) & 1 == 1 {
                idx |= bit(q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if (b >> (traced.len() - 1 - pos)) & 1 == 1 {
                idx |= bit(q);
            }
        }
        idx
    };
    let da = 1usize << kept.len();
    let db = 1usize << traced.len();
    let amps = state.amplitudes();
    let table: Vec<Vec<usize>> = (0..da).map(|a| (0..db).map(|b| compose(a, b)).collect()).collect();
    let mut rho = CMatrix::zeros(da);
    for i in 0..da {
        for j in i..da {
            let s = (0..db).fold(czero::<T>(), |acc, b| acc + amps[table[i][b]] * amps[table[j][b]].conj());
            rho[(i, j)] = s;
            rho[(j, i)] = s.conj();
        }
    }
    DensityMatrix::new(rho)
}

/// `-sum lambda log2 lambda` over the spectrum; eigenvalues in `[-TOL, 0)` are
/// clamped to zero.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<EntanglementValue<T>> {
    let mut s = T::zero();
    for lambda in rho.eigenvalues() {
        if lambda < -T::TOL {
            return Err(Error::NumericalDomain(format!("negative eigenvalue {lambda}")));
        }
        if lambda > T::zero() {
            s -= lambda * lambda.log2();
        }
    }
    Ok(EntanglementValue {
        value: s.max(T::zero()),
        measure: MeasureTag::VonNeumannBits,
    })
}

/// Entropy of entanglement across `keep | complement`.
///
/// For a pure bipartite state the relative entropy of entanglement equals the
/// entropy of either reduced state, so this is an alias rather than an
/// optimization over separable states.
pub fn relative_entropy_pure_bipartite<T: Real>(
    state: &StateVector<T>,
    keep: QubitSet,
) -> Result<EntanglementValue<T>> {
    von_neumann_entropy(&reduced_density_matrix(state, keep)?)
}

/// Settings for the alternating rank-1 fit behind [`geometric_entanglement`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricOptions {
    pub restarts: usize,
    /// Sweep-to-sweep change in squared overlap treated as converged.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            tolerance: 1e-9,
            max_iterations: 1000,
            seed: 0x6765_6f6d,
        }
    }
}

/// Best product-state fit found by the alternating optimization.
#[derive(Clone, Debug)]
pub struct ProductFit<T: Real> {
    /// `max |<phi|psi>|^2` over the restarts.
    pub overlap_sqr: T,
    /// Single-qubit factors of the maximizing product state.
    pub factors: Vec<[Complex<T>; 2]>,
    pub converged_restarts: usize,
}

fn random_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [Complex<T>; 2] {
    let mut v = [czero::<T>(); 2];
    for z in &mut v {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = Complex::new(T::lit(re), T::lit(im));
    }
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / norm, v[1] / norm]
}

/// Contraction of `psi` with `conj(phi_m)` on every site except `site`.
fn site_environment<T: Real>(amps: &[Complex<T>], factors: &[[Complex<T>; 2]], site: usize) -> [Complex<T>; 2] {
    let n = factors.len();
    let mut env = [czero::<T>(); 2];
    for (idx, a) in amps.iter().enumerate() {
        let mut w = *a;
        for (m, f) in factors.iter().enumerate() {
            if m != site {
                w *= f[(idx >> (n - 1 - m)) & 1].conj();
            }
        }
        env[(idx >> (n - 1 - site)) & 1] += w;
    }
    env
}

/// Runs the alternating single-site fit and returns the best product state.
pub fn best_product_fit<T: Real>(state: &StateVector<T>, opts: &GeometricOptions) -> Result<ProductFit<T>> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::invalid("geometric entanglement needs at least two qubits"));
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("at least one restart required"));
    }
    let amps = state.amplitudes();
    let tol = T::lit(opts.tolerance);
    let mut best: Option<(T, Vec<[Complex<T>; 2]>)> = None;
    let mut converged_restarts = 0;

    for restart in 0..opts.restarts {
        let mut rng = rng_from_seed(derive_seed(opts.seed, &[restart as u64]));
        let mut factors: Vec<[Complex<T>; 2]> = (0..n).map(|_| random_qubit(&mut rng)).collect();
        let mut overlap = T::zero();
        let mut converged = false;
        for _ in 0..opts.max_iterations {
            let previous = overlap;
            for site in 0..n {
                let env = site_environment(amps, &factors, site);
                let norm = (env[0].norm_sqr() + env[1].norm_sqr()).sqrt();
                if norm > T::zero() {
                    factors[site] = [env[0] / norm, env[1] / norm];
                    overlap = norm * norm;
                } else {
                    // Orthogonal to every state with this site environment;
                    // reseed the site and keep sweeping.
                    factors[site] = random_qubit(&mut rng);
                    overlap = T::zero();
                }
            }
            if (overlap - previous).abs() < tol {
                converged = true;
                break;
            }
        }
        if converged {
            converged_restarts += 1;
        }
        if best.as_ref().is_none_or(|(b, _)| overlap > *b) {
            best = Some((overlap, factors));
        }
    }

    let (overlap_sqr, factors) = best.expect("at least one restart ran");
    if converged_restarts == 0 {
        return Err(Error::NonConvergence {
            iterations: opts.max_iterations,
            best: (T::one() - overlap_sqr).as_f64(),
        });
    }
    Ok(ProductFit {
        overlap_sqr: overlap_sqr.min(T::one()),
        factors,
        converged_restarts,
    })
}

/// `1 - max |<phi|psi>|^2` over fully product `phi`.
pub fn geometric_entanglement<T: Real>(
    state: &StateVector<T>,
    opts: &GeometricOptions,
) -> Result<EntanglementValue<T>> {
    let fit = best_product_fit(state, opts)?;
    Ok(EntanglementValue {
        value: (T::one() - fit.overlap_sqr).max(T::zero()),
        measure: MeasureTag::Geometric,
    })
}

/// Entanglement measure selector used for trajectories.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure {
    Geometric(GeometricOptions),
    /// Entropy in bits of the reduced state on the given qubits.
    VonNeumann { cut: QubitSet },
}

impl Default for Measure {
    fn default() -> Self {
        Measure::Geometric(GeometricOptions::default())
    }
}

impl Measure {
    pub fn tag(&self) -> MeasureTag {
        match self {
            Measure::Geometric(_) => MeasureTag::Geometric,
            Measure::VonNeumann { .. } => MeasureTag::VonNeumannBits,
        }
    }

    pub fn evaluate<T: Real>(&self, state: &StateVector<T>) -> Result<EntanglementValue<T>> {
        match self {
            Measure::Geometric(opts) => geometric_entanglement(state, opts),
            Measure::VonNeumann { cut } => relative_entropy_pure_bipartite(state, *cut),
        }
    }
}
