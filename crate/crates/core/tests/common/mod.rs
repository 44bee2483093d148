//! Independent reference computations used by the integration tests. None of
//! these call into the library's numerical routines.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C = Complex<f64>;
pub type Dense = Vec<Vec<C>>;
pub type PlacedGate = ((usize, usize), [[C; 4]; 4]);

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Normalized Gaussian random amplitudes.
pub fn random_amplitudes(n: usize, seed: u64) -> Vec<C> {
    let mut r = rng(seed);
    let v: Vec<C> = (0..1usize << n)
        .map(|_| C::new(StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Full `2^n x 2^n` matrix of a 4x4 gate on `(j, k)`, element by element.
pub fn embed(m: &[[C; 4]; 4], n: usize, j: usize, k: usize) -> Dense {
    let d = 1 << n;
    let mask = (1 << (n - 1 - j)) | (1 << (n - 1 - k));
    let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
    for (row, out_row) in out.iter_mut().enumerate() {
        for (col, entry) in out_row.iter_mut().enumerate() {
            if row & !mask != col & !mask {
                continue;
            }
            let a = 2 * bit(row, n, j) + bit(row, n, k);
            let b = 2 * bit(col, n, j) + bit(col, n, k);
            *entry = m[a][b];
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn identity(d: usize) -> Dense {
    (0..d)
        .map(|i| (0..d).map(|j| C::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// `U_R ... U_1` as a dense matrix.
pub fn dense_unitary(n: usize, gates: &[PlacedGate]) -> Dense {
    gates
        .iter()
        .fold(identity(1 << n), |acc, (p, m)| matmul(&embed(m, n, p.0, p.1), &acc))
}

pub fn matvec(m: &Dense, v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Reduced density matrix by explicit double sum over the traced-out bits.
pub fn partial_trace(amps: &[C], n: usize, keep: &[usize]) -> Dense {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1 << keep.len();
    let dt = 1 << traced.len();
    let assemble = |a: usize, b: usize| {
        let mut idx = 0;
        for (i, &q) in keep.iter().enumerate() {
            idx |= ((a >> (keep.len() - 1 - i)) & 1) << (n - 1 - q);
        }
        for (i, &q) in traced.iter().enumerate() {
            idx |= ((b >> (traced.len() - 1 - i)) & 1) << (n - 1 - q);
        }
        idx
    };
    let mut rho = vec![vec![C::new(0.0, 0.0); dk]; dk];
    for a in 0..dk {
        for a2 in 0..dk {
            for b in 0..dt {
                rho[a][a2] += amps[assemble(a, b)] * amps[assemble(a2, b)].conj();
            }
        }
    }
    rho
}

/// Entropy in bits of the Schmidt spectrum of a two-qubit state, from the
/// closed-form singular values of its 2x2 coefficient matrix.
pub fn schmidt_entropy_two_qubit(amps: &[C]) -> f64 {
    let det = amps[0] * amps[3] - amps[1] * amps[2];
    let t: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let disc = (t * t - 4.0 * det.norm_sqr()).max(0.0).sqrt();
    [(t + disc) / 2.0, (t - disc) / 2.0]
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Single-qubit state `cos(t/2)|0> + e^{i f} sin(t/2)|1>`.
fn qubit(t: f64, f: f64) -> [C; 2] {
    [C::new((t / 2.0).cos(), 0.0), C::from_polar((t / 2.0).sin(), f)]
}

/// `|<phi_1 ... phi_n|psi>|^2` for angle pairs `x = [t_1, f_1, t_2, f_2, ...]`.
pub fn product_overlap(amps: &[C], n: usize, x: &[f64]) -> f64 {
    let factors: Vec<[C; 2]> = (0..n).map(|q| qubit(x[2 * q], x[2 * q + 1])).collect();
    let mut s = C::new(0.0, 0.0);
    for (idx, a) in amps.iter().enumerate() {
        let mut p = C::new(1.0, 0.0);
        for (q, f) in factors.iter().enumerate() {
            p *= f[bit(idx, n, q)].conj();
        }
        s += p * a;
    }
    s.norm_sqr()
}

/// Nelder-Mead minimization with an axis-aligned initial simplex.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, iters: usize) -> (Vec<f64>, f64) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = (0..=d)
        .map(|i| {
            let mut x = x0.to_vec();
            if i > 0 {
                x[i - 1] += step;
            }
            let v = f(&x);
            (x, v)
        })
        .collect();
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[d].1 - simplex[0].1).abs() < 1e-15 {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|p| p.0[j]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let xc = along(if fr < simplex[d].1 { 0.5 } else { -0.5 });
            let fc = f(&xc);
            if fc < simplex[d].1.min(fr) {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    for j in 0..d {
                        p.0[j] = best[j] + 0.5 * (p.0[j] - best[j]);
                    }
                    p.1 = f(&p.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Geometric entanglement by exhaustive angle grid followed by Nelder-Mead
/// polishing of the best few grid points.
pub fn geometric_oracle(amps: &[C], n: usize) -> f64 {
    const T_STEPS: usize = 13;
    const F_STEPS: usize = 12;
    let per_qubit: Vec<(f64, f64)> = (0..T_STEPS)
        .flat_map(|i| {
            (0..F_STEPS).map(move |j| {
                (
                    std::f64::consts::PI * i as f64 / (T_STEPS - 1) as f64,
                    2.0 * std::f64::consts::PI * j as f64 / F_STEPS as f64,
                )
            })
        })
        .collect();
    let g = per_qubit.len();
    let total = g.pow(n as u32);
    let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut x = vec![0.0; 2 * n];
    for flat in 0..total {
        let mut rest = flat;
        for q in 0..n {
            let (t, f) = per_qubit[rest % g];
            rest /= g;
            x[2 * q] = t;
            x[2 * q + 1] = f;
        }
        let v = product_overlap(amps, n, &x);
        if best.len() < 5 || v > best[best.len() - 1].0 {
            best.push((v, x.clone()));
            best.sort_by(|a, b| b.0.total_cmp(&a.0));
            best.truncate(5);
        }
    }
    let polished = best
        .iter()
        .map(|(_, x0)| {
            let (x1, _) = nelder_mead(|x| -product_overlap(amps, n, x), x0, 0.2, 4000);
            let (_, v) = nelder_mead(|x| -product_overlap(amps, n, x), &x1, 0.01, 4000);
            -v
        })
        .fold(0.0, f64::max);
    1.0 - polished
}
