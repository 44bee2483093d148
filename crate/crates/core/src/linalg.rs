//! Small dense complex linear algebra: Hermitian eigendecomposition by cyclic
//! Jacobi rotations, determinants, and exponentials of Hermitian generators.
//!
//! Matrices here are at most a few dozen rows (two-qubit gates, reduced
//! density matrices of desk-scale registers), so plain row-major storage
//! and O(n^3) sweeps are adequate.

use num_complex::Complex;

use crate::scalar::{c, cone, czero, Real};

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![czero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    /// Builds from row-major data; panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must have n*n entries");
        Self { n, data }
    }

    pub fn from_rows<const N: usize>(rows: &[[Complex<T>; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { n: N, data }
    }

    pub fn to_array4(&self) -> [[Complex<T>; 4]; 4] {
        assert_eq!(self.n, 4);
        let mut out = [[czero(); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self[(i, j)];
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(czero(), |a, b| a + b)
    }

    /// Largest entrywise modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `A^dagger A - I`.
    pub fn unitarity_residual(&self) -> T {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.n))
    }

    /// Largest entrywise modulus of `A - A^dagger`.
    pub fn hermiticity_residual(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(crate::scalar::is_finite)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = cone::<T>();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[x * n + col]
                        .norm_sqr()
                        .partial_cmp(&a[y * n + col].norm_sqr())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p.norm_sqr() == T::zero() {
                return czero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= p;
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                if f.norm_sqr() == T::zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Eigendecomposition of a Hermitian matrix. Only the Hermitian part of
    /// `self` is used; callers validate hermiticity beforehand.
    pub fn hermitian_eigen(&self) -> HermitianEigen<T> {
        hermitian_eigen(self)
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues (ascending) and matching eigenvectors stored as the columns
/// of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm_sqr<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn hermitian_eigen<T: Real>(input: &CMatrix<T>) -> HermitianEigen<T> {
    let n = input.dim();
    // Symmetrize so round-off asymmetry in the input never biases rotations.
    let half = T::lit(0.5);
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (input[(i, j)] + input[(j, i)].conj()) * half;
        }
    }
    let mut v = CMatrix::<T>::identity(n);
    let scale: T = a.data.iter().map(|z| z.norm_sqr()).sum();
    let threshold = scale * T::epsilon() * T::epsilon();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                // Unit phase making the (p, q) entry real and positive after
                // conjugation by diag(1, e^{-i phi}).
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (theta * theta + T::one()).sqrt())
                } else {
                    -T::one() / (-theta + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let j_pp = c(cs, T::zero());
                let j_pq = c(sn, T::zero());
                let j_qp = phase.conj() * (-sn);
                let j_qq = phase.conj() * cs;

                // A <- A J  (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J^dagger A  (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[(x, x)]
            .re
            .partial_cmp(&a[(y, y)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    HermitianEigen { values, vectors }
}

/// `exp(i H)` for Hermitian `H`, via its eigendecomposition.
pub fn expm_i_hermitian<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let eig = h.hermitian_eigen();
    let n = h.dim();
    let mut out = CMatrix::zeros(n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let ph = Complex::from_polar(T::one(), lambda);
        for i in 0..n {
            let vik = eig.vectors[(i, k)] * ph;
            for j in 0..n {
                out[(i, j)] += vik * eig.vectors[(j, k)].conj();
            }
        }
    }
    out
}

/// Kronecker product of two 2x2 matrices, first factor on the more
/// significant index bit.
pub fn kron2<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 4]; 4] {
    let mut out = [[czero(); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix<f64> {
        let mut rng = crate::seed::rng_from_seed(seed);
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn jacobi_reconstructs_random_hermitian() {
        for (n, seed) in [(2, 1), (4, 2), (8, 3), (16, 4)] {
            let h = random_hermitian(n, seed);
            let eig = h.hermitian_eigen();
            assert!(eig.vectors.unitarity_residual() < 1e-12);
            let mut d = CMatrix::zeros(n);
            for i in 0..n {
                d[(i, i)] = c(eig.values[i], 0.0);
            }
            let rebuilt = eig.vectors.matmul(&d).matmul(&eig.vectors.adjoint());
            assert!(rebuilt.max_abs_diff(&h) < 1e-12, "n = {n}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_and_diagonal_inputs() {
        let eig = CMatrix::<f64>::identity(4).scale(c(0.25, 0.0)).hermitian_eigen();
        assert!(eig.values.iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn determinant_of_known_matrices() {
        let mut m = CMatrix::<f64>::identity(3);
        m[(0, 0)] = c(2.0, 0.0);
        m[(1, 1)] = c(0.0, 3.0);
        assert!((m.determinant() - c(0.0, 6.0)).norm() < 1e-15);
        // swap rows -> sign flip
        let p = CMatrix::from_rows(&[
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!((p.determinant() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exponential_of_traceless_hermitian_is_special_unitary() {
        let mut h = random_hermitian(4, 9);
        let tr = h.trace().re / 4.0;
        for i in 0..4 {
            h[(i, i)] -= c(tr, 0.0);
        }
        let u = expm_i_hermitian(&h);
        assert!(u.unitarity_residual() < 1e-12);
        assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-12);
    }
}
