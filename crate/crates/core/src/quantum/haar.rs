//! Haar-distributed two-qubit unitaries.
//!
//! A complex Ginibre matrix is orthonormalized column by column. Gram-Schmidt
//! leaves the triangular factor with a real positive diagonal, which is the
//! phase convention that makes the orthonormal factor Haar-distributed on
//! U(4). The result is then divided by a fourth root of its determinant.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::gate::{normalize_determinant, Matrix4};
use crate::scalar::{czero, Real};
use crate::seed::rng_from_seed;

fn ginibre_column<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [Complex<T>; 4] {
    let mut col = [czero(); 4];
    for z in &mut col {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = Complex::new(T::lit(re), T::lit(im));
    }
    col
}

/// Haar-random element of U(4).
pub fn haar_random_unitary4_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Matrix4<T> {
    let mut cols: Vec<[Complex<T>; 4]> = Vec::with_capacity(4);
    while cols.len() < 4 {
        let mut v = ginibre_column::<T, R>(rng);
        // Two projection passes keep the basis orthonormal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let proj = q.iter().zip(&v).fold(czero::<T>(), |acc, (a, b)| acc + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        // A Ginibre column in the span of earlier ones has probability zero;
        // redraw if it happens numerically.
        if norm <= T::epsilon().sqrt() {
            continue;
        }
        for z in &mut v {
            *z /= norm;
        }
        cols.push(v);
    }
    let mut m = [[czero(); 4]; 4];
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m[i][j] = z;
        }
    }
    m
}

/// Haar-random U(4) element with its determinant normalized to 1.
pub fn haar_random_su4_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Matrix4<T> {
    normalize_determinant(&haar_random_unitary4_with(rng))
}

/// Deterministic Haar SU(4) sample from a seed.
pub fn haar_random_su4<T: Real>(seed: u64) -> Matrix4<T> {
    haar_random_su4_with(&mut rng_from_seed(seed))
}
