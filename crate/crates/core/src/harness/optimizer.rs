//! Multi-start local ascent of preparation fidelity over gate parameters.
//!
//! Each gate carries 15 parameters (see [`super::su4`]). Gradients are central
//! finite differences; the fidelity change from perturbing one gate is
//! computed from the 4x4 contraction of the forward state entering the gate
//! with the back-propagated target leaving it, so a partial derivative costs
//! one 4x4 exponential rather than a full circuit run. Steps are quasi-Newton
//! (BFGS on the inverse Hessian) with backtracking line search.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::su4::{su4_from_params, SU4_PARAMS};
use crate::error::{Error, Result};
use crate::quantum::{fidelity, Architecture, Circuit, StateVector, TwoQubitGate};
use crate::scalar::czero;
use crate::seed::{derive_seed, rng_from_seed};

type M4 = [[Complex<f64>; 4]; 4];

/// Restarts evaluated between checks of the early-stop condition. Fixed so
/// that results do not depend on the worker count.
const RESTART_CHUNK: usize = 8;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 40;
const STALL_LIMIT: usize = 8;
const STALL_DELTA: f64 = 1e-13;
const GRADIENT_FLOOR: f64 = 1e-10;

fn default_fd_step() -> f64 {
    1e-5
}

fn default_early_stop() -> f64 {
    1e-9
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerBudget {
    pub restarts: usize,
    #[serde(rename = "iters")]
    pub max_iterations: usize,
    /// Central-difference step.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// A restart stops once its infidelity is at most this.
    #[serde(default = "default_early_stop")]
    pub early_stop: f64,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 2000,
            fd_step: default_fd_step(),
            early_stop: default_early_stop(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizationOutcome {
    pub circuit: Circuit<f64>,
    pub params: Vec<f64>,
    /// Fidelity of `circuit` applied to `|0...0>`, recomputed from the gates.
    pub fidelity: f64,
    /// False when the best restart stopped on the iteration cap.
    pub converged: bool,
    pub restarts_run: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Target,
    Stationary,
    IterationCap,
}

struct LocalResult {
    x: Vec<f64>,
    f: f64,
    stop: Stop,
}

struct Objective<'a> {
    n: usize,
    slots: &'a [(usize, usize)],
    target: &'a [Complex<f64>],
}

fn adjoint(m: &M4) -> M4 {
    let mut out = [[czero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[j][i] = m[i][j].conj();
        }
    }
    out
}

#[inline]
fn contract(u: &M4, k: &M4) -> Complex<f64> {
    let mut s = czero();
    for a in 0..4 {
        for b in 0..4 {
            s += u[a][b] * k[a][b];
        }
    }
    s
}

impl Objective<'_> {
    fn dim(&self) -> usize {
        SU4_PARAMS * self.slots.len()
    }

    fn gates(&self, x: &[f64]) -> Vec<M4> {
        x.chunks_exact(SU4_PARAMS).map(su4_from_params).collect()
    }

    fn zero_state(&self) -> Vec<Complex<f64>> {
        let mut v = vec![czero(); 1 << self.n];
        v[0] = Complex::new(1.0, 0.0);
        v
    }

    fn overlap(&self, amps: &[Complex<f64>]) -> Complex<f64> {
        self.target
            .iter()
            .zip(amps)
            .fold(czero(), |acc, (t, a)| acc + t.conj() * a)
    }

    /// `1 - |<target|U(x)|0>|^2`.
    fn infidelity(&self, x: &[f64]) -> f64 {
        let mut amps = self.zero_state();
        for (m, &slot) in self.gates(x).iter().zip(self.slots) {
            crate::quantum::apply_matrix_in_place(&mut amps, self.n, slot, m);
        }
        1.0 - self.overlap(&amps).norm_sqr()
    }

    /// `K[a][b] = sum_rest conj(chi[a, rest]) psi[b, rest]`, so that
    /// `<chi|U psi> = sum_ab U[a][b] K[a][b]` for `U` on `slot`.
    fn local_contraction(&self, chi: &[Complex<f64>], psi: &[Complex<f64>], slot: (usize, usize)) -> M4 {
        let bj = 1usize << (self.n - 1 - slot.0);
        let bk = 1usize << (self.n - 1 - slot.1);
        let mut k = [[czero(); 4]; 4];
        for base in 0..psi.len() {
            if base & (bj | bk) != 0 {
                continue;
            }
            let idx = [base, base | bk, base | bj, base | bj | bk];
            for a in 0..4 {
                let ca = chi[idx[a]].conj();
                if ca.re == 0.0 && ca.im == 0.0 {
                    continue;
                }
                for b in 0..4 {
                    k[a][b] += ca * psi[idx[b]];
                }
            }
        }
        k
    }

    fn value_and_gradient(&self, x: &[f64], h: f64) -> (f64, Vec<f64>) {
        let gates = self.gates(x);
        let r = gates.len();
        let mut forward = Vec::with_capacity(r + 1);
        forward.push(self.zero_state());
        for (m, &slot) in gates.iter().zip(self.slots) {
            let mut next = forward.last().expect("seeded").clone();
            crate::quantum::apply_matrix_in_place(&mut next, self.n, slot, m);
            forward.push(next);
        }
        let f = 1.0 - self.overlap(&forward[r]).norm_sqr();

        let mut grad = vec![0.0; self.dim()];
        let mut chi = self.target.to_vec();
        let mut theta = [0.0; SU4_PARAMS];
        for i in (0..r).rev() {
            let slot = self.slots[i];
            let k = self.local_contraction(&chi, &forward[i], slot);
            theta.copy_from_slice(&x[i * SU4_PARAMS..(i + 1) * SU4_PARAMS]);
            for p in 0..SU4_PARAMS {
                let orig = theta[p];
                theta[p] = orig + h;
                let fp = contract(&su4_from_params(&theta), &k).norm_sqr();
                theta[p] = orig - h;
                let fm = contract(&su4_from_params(&theta), &k).norm_sqr();
                theta[p] = orig;
                grad[i * SU4_PARAMS + p] = -(fp - fm) / (2.0 * h);
            }
            crate::quantum::apply_matrix_in_place(&mut chi, self.n, slot, &adjoint(&gates[i]));
        }
        (f, grad)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

/// BFGS descent on the infidelity from `x0`.
fn local_ascent(obj: &Objective<'_>, x0: Vec<f64>, budget: &OptimizerBudget) -> LocalResult {
    let d = obj.dim();
    let mut x = x0;
    let (mut f, mut g) = obj.value_and_gradient(&x, budget.fd_step);
    let mut hinv = identity(d);
    let mut fresh = true;
    let mut stalls = 0;

    for _ in 0..budget.max_iterations {
        if f <= budget.early_stop {
            return LocalResult { x, f, stop: Stop::Target };
        }
        if dot(&g, &g).sqrt() < GRADIENT_FLOOR {
            return LocalResult { x, f, stop: Stop::Stationary };
        }
        let mut dir: Vec<f64> = (0..d).map(|i| -dot(&hinv[i * d..(i + 1) * d], &g)).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            hinv = identity(d);
            fresh = true;
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            let ft = obj.infidelity(&trial);
            if ft <= f + ARMIJO * alpha * slope {
                accepted = Some(trial);
                break;
            }
            alpha *= 0.5;
        }
        let Some(x_new) = accepted else {
            if fresh {
                return LocalResult { x, f, stop: Stop::Stationary };
            }
            hinv = identity(d);
            fresh = true;
            continue;
        };

        let (f_new, g_new) = obj.value_and_gradient(&x_new, budget.fd_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                // Scale the initial inverse Hessian to the observed curvature.
                let scale = sy / dot(&y, &y);
                for v in &mut hinv {
                    *v *= scale;
                }
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..d).map(|i| dot(&hinv[i * d..(i + 1) * d], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..d {
                for j in 0..d {
                    hinv[i * d + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }

        if f - f_new < STALL_DELTA {
            stalls += 1;
            if stalls >= STALL_LIMIT {
                return LocalResult {
                    x: x_new,
                    f: f_new,
                    stop: Stop::Stationary,
                };
            }
        } else {
            stalls = 0;
        }
        x = x_new;
        f = f_new;
        g = g_new;
    }
    let stop = if f <= budget.early_stop { Stop::Target } else { Stop::IterationCap };
    LocalResult { x, f, stop }
}

/// Parameter vector whose gates are all the identity.
pub fn identity_params(gates: usize) -> Vec<f64> {
    vec![0.0; SU4_PARAMS * gates]
}

/// Builds the circuit for a parameter vector on `arch`.
pub fn circuit_from_params(arch: &Architecture, params: &[f64]) -> Result<Circuit<f64>> {
    if params.len() != SU4_PARAMS * arch.len() {
        return Err(Error::invalid(format!(
            "{} parameters for {} gates",
            params.len(),
            arch.len()
        )));
    }
    let gates = params
        .chunks_exact(SU4_PARAMS)
        .zip(arch.slots())
        .map(|(theta, &slot)| TwoQubitGate::new(slot, su4_from_params(theta)))
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(arch.clone(), gates)
}

/// Maximizes the fidelity of `arch` applied to `|0...0>` with `target`.
///
/// Starts are the `warm_starts` followed by the all-identity point and then
/// seeded uniform draws in `[-pi, pi)`, up to `budget.restarts` starts in
/// total. Restarts stop early once one reaches `1 - budget.early_stop`.
pub fn optimize_gates(
    arch: &Architecture,
    target: &StateVector<f64>,
    budget: &OptimizerBudget,
    seed: u64,
    warm_starts: &[Vec<f64>],
) -> Result<OptimizationOutcome> {
    if arch.num_qubits() != target.num_qubits() {
        return Err(Error::invalid(format!(
            "architecture has {} qubits, target has {}",
            arch.num_qubits(),
            target.num_qubits()
        )));
    }
    let dim = SU4_PARAMS * arch.len();
    if let Some(w) = warm_starts.iter().find(|w| w.len() != dim) {
        return Err(Error::invalid(format!("warm start has {} parameters, expected {dim}", w.len())));
    }
    let obj = Objective {
        n: arch.num_qubits(),
        slots: arch.slots(),
        target: target.amplitudes(),
    };
    let total = budget.restarts.max(warm_starts.len()).max(1);
    let start_point = |i: usize| -> Vec<f64> {
        if i < warm_starts.len() {
            warm_starts[i].clone()
        } else if i == warm_starts.len() {
            identity_params(arch.len())
        } else {
            let mut rng = rng_from_seed(derive_seed(seed, &[i as u64]));
            (0..dim)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect()
        }
    };

    let mut best: Option<LocalResult> = None;
    let mut run = 0;
    while run < total {
        let end = (run + RESTART_CHUNK).min(total);
        let results: Vec<LocalResult> = (run..end)
            .into_par_iter()
            .map(|i| local_ascent(&obj, start_point(i), budget))
            .collect();
        for res in results {
            if best.as_ref().is_none_or(|b| res.f < b.f) {
                best = Some(res);
            }
        }
        run = end;
        if best.as_ref().is_some_and(|b| b.f <= budget.early_stop) {
            break;
        }
    }

    let best = best.expect("at least one restart");
    let circuit = circuit_from_params(arch, &best.x)?;
    let achieved = fidelity(&circuit.apply(&StateVector::zero(arch.num_qubits())?)?, target)?;
    Ok(OptimizationOutcome {
        circuit,
        params: best.x,
        fidelity: achieved,
        converged: best.stop != Stop::IterationCap,
        restarts_run: run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::haar_random_su4;

    fn small_budget() -> OptimizerBudget {
        OptimizerBudget {
            restarts: 8,
            max_iterations: 500,
            ..Default::default()
        }
    }

    #[test]
    fn gradient_matches_direct_differences() {
        let arch = Architecture::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let target = StateVector::normalized(
            3,
            (0..8).map(|i| Complex::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect(),
        )
        .unwrap();
        let obj = Objective {
            n: 3,
            slots: arch.slots(),
            target: target.amplitudes(),
        };
        let mut rng = rng_from_seed(4);
        let x: Vec<f64> = (0..45).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (f, g) = obj.value_and_gradient(&x, 1e-5);
        assert!((f - obj.infidelity(&x)).abs() < 1e-14);
        for p in [0, 7, 14, 15, 29, 30, 44] {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[p] += 1e-5;
            xm[p] -= 1e-5;
            let fd = (obj.infidelity(&xp) - obj.infidelity(&xm)) / 2e-5;
            assert!((fd - g[p]).abs() < 1e-8, "param {p}: {fd} vs {}", g[p]);
        }
    }

    #[test]
    fn zero_target_reached_with_identity() {
        let arch = Architecture::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let out = optimize_gates(&arch, &StateVector::zero(3).unwrap(), &small_budget(), 1, &[]).unwrap();
        assert!(out.fidelity >= 1.0 - 1e-6);
    }

    #[test]
    fn bell_reached_with_one_gate() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::new(
            2,
            vec![Complex::new(h, 0.0), czero(), czero(), Complex::new(h, 0.0)],
        )
        .unwrap();
        let arch = Architecture::new(2, vec![(0, 1)]).unwrap();
        let out = optimize_gates(&arch, &bell, &small_budget(), 2, &[]).unwrap();
        assert!(out.fidelity >= 1.0 - 1e-6, "{}", out.fidelity);
        assert!(out.converged);
    }

    #[test]
    fn deterministic_given_seed() {
        let arch = Architecture::new(3, vec![(0, 2), (1, 2)]).unwrap();
        let gen = Circuit::from_gates(
            3,
            vec![
                TwoQubitGate::new((0, 1), haar_random_su4(5)).unwrap(),
                TwoQubitGate::new((1, 2), haar_random_su4(6)).unwrap(),
            ],
        )
        .unwrap();
        let target = gen.apply(&StateVector::zero(3).unwrap()).unwrap();
        let budget = OptimizerBudget {
            restarts: 3,
            max_iterations: 50,
            ..Default::default()
        };
        let a = optimize_gates(&arch, &target, &budget, 9, &[]).unwrap();
        let b = optimize_gates(&arch, &target, &budget, 9, &[]).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.fidelity.to_bits(), b.fidelity.to_bits());
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let arch = Architecture::new(3, vec![(0, 1)]).unwrap();
        let target = StateVector::normalized(3, (0..8).map(|i| Complex::new(1.0 + i as f64, 0.5)).collect()).unwrap();
        let budget = OptimizerBudget {
            restarts: 1,
            max_iterations: 1,
            ..Default::default()
        };
        let out = optimize_gates(&arch, &target, &budget, 0, &[]).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn warm_start_length_checked() {
        let arch = Architecture::new(2, vec![(0, 1)]).unwrap();
        let err = optimize_gates(&arch, &StateVector::zero(2).unwrap(), &small_budget(), 0, &[vec![0.0; 3]]);
        assert!(err.is_err());
    }
}
