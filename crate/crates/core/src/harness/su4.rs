//! SU(4) from 15 real parameters: `U(theta) = exp(i sum_k theta_k G_k)` with
//! `G_k` the non-identity two-qubit Pauli products `sigma_a (x) sigma_b`,
//! ordered lexicographically in `(a, b)` with `a, b` in `I, X, Y, Z`.
//!
//! The generators span the traceless Hermitian matrices, and the exponential
//! map of a compact connected group is onto, so every SU(4) element is
//! reached. `theta = 0` gives the identity.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::linalg::{expm_i_hermitian, kron2, CMatrix};
use crate::quantum::standard::Matrix2;
use crate::scalar::{c, czero};

pub const SU4_PARAMS: usize = 15;

type M4 = [[Complex<f64>; 4]; 4];

fn paulis() -> [Matrix2<f64>; 4] {
    let o = czero();
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        [[one, o], [o, one]],
        [[o, one], [one, o]],
        [[o, -i], [i, o]],
        [[one, o], [o, -one]],
    ]
}

/// The 15 generators in parameter order.
pub fn generators() -> &'static [M4; SU4_PARAMS] {
    static GENS: OnceLock<[M4; SU4_PARAMS]> = OnceLock::new();
    GENS.get_or_init(|| {
        let p = paulis();
        let mut out = [[[czero(); 4]; 4]; SU4_PARAMS];
        let mut idx = 0;
        for a in 0..4 {
            for b in 0..4 {
                if a == 0 && b == 0 {
                    continue;
                }
                out[idx] = kron2(&p[a], &p[b]);
                idx += 1;
            }
        }
        out
    })
}

/// `exp(i sum theta_k G_k)`; panics unless `theta.len() == 15`.
pub fn su4_from_params(theta: &[f64]) -> M4 {
    assert_eq!(theta.len(), SU4_PARAMS, "SU(4) needs 15 parameters");
    let gens = generators();
    let mut h = [[czero::<f64>(); 4]; 4];
    for (t, g) in theta.iter().zip(gens) {
        if *t == 0.0 {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] += g[i][j] * *t;
            }
        }
    }
    expm_i_hermitian(&CMatrix::from_rows(&h)).to_array4()
}
