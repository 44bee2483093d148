use num_complex::Complex;

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{czero, is_finite, Real};

pub type Matrix4<T> = [[Complex<T>; 4]; 4];

/// A unitary 4x4 matrix bound to an ordered qubit pair `(j, k)`, indexed by
/// `2 * bit_j + bit_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitGate<T: Real> {
    pair: (usize, usize),
    matrix: Matrix4<T>,
}

impl<T: Real> TwoQubitGate<T> {
    /// Accepts any unitary (within `T::TOL` entrywise).
    pub fn new(pair: (usize, usize), matrix: Matrix4<T>) -> Result<Self> {
        if pair.0 == pair.1 {
            return Err(Error::invalid(format!(
                "gate pair ({}, {}) acts twice on one qubit",
                pair.0, pair.1
            )));
        }
        if !matrix.iter().flatten().all(is_finite) {
            return Err(Error::invalid("non-finite gate entry"));
        }
        let residual = CMatrix::from_rows(&matrix).unitarity_residual();
        if residual > T::TOL {
            return Err(Error::invalid(format!(
                "gate matrix not unitary (residual {residual})"
            )));
        }
        Ok(Self { pair, matrix })
    }

    /// Validates unitarity then divides by a fourth root of the determinant so
    /// the stored matrix lies in SU(4).
    pub fn special(pair: (usize, usize), matrix: Matrix4<T>) -> Result<Self> {
        let gate = Self::new(pair, matrix)?;
        Ok(Self {
            pair,
            matrix: normalize_determinant(&gate.matrix),
        })
    }

    #[inline]
    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix4<T> {
        &self.matrix
    }

    pub fn determinant(&self) -> Complex<T> {
        CMatrix::from_rows(&self.matrix).determinant()
    }

    pub fn unitarity_residual(&self) -> T {
        CMatrix::from_rows(&self.matrix).unitarity_residual()
    }

    /// Same matrix on another pair.
    pub fn on_pair(&self, pair: (usize, usize)) -> Result<Self> {
        Self::new(pair, self.matrix)
    }

    /// Rebinds to `(k, j)` with the matrix conjugated by SWAP, so the physical
    /// action is unchanged.
    pub fn reversed(&self) -> Self {
        let swap = |i: usize| ((i & 1) << 1) | (i >> 1);
        let mut m = [[czero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.matrix[swap(i)][swap(j)];
            }
        }
        Self {
            pair: (self.pair.1, self.pair.0),
            matrix: m,
        }
    }
}

pub(crate) fn normalize_determinant<T: Real>(m: &Matrix4<T>) -> Matrix4<T> {
    let det = CMatrix::from_rows(m).determinant();
    let (_, arg) = det.to_polar();
    let correction = Complex::from_polar(T::one(), -arg / T::lit(4.0));
    let mut out = *m;
    for v in out.iter_mut().flatten() {
        *v *= correction;
    }
    out
}

/// In-place application of a 4x4 matrix on qubits `pair` of a register of
/// `num_qubits` qubits.
pub(crate) fn apply_matrix_in_place<T: Real>(
    amps: &mut [Complex<T>],
    num_qubits: usize,
    pair: (usize, usize),
    m: &Matrix4<T>,
) {
    let bj = 1usize << (num_qubits - 1 - pair.0);
    let bk = 1usize << (num_qubits - 1 - pair.1);
    let mask = bj | bk;
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        let idx = [base, base | bk, base | bj, base | bj | bk];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            let row = &m[r];
            amps[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
    }
}

/// Applies `gate` to `state`, returning the new state.
pub fn apply_gate<T: Real>(state: &StateVector<T>, gate: &TwoQubitGate<T>) -> Result<StateVector<T>> {
    let n = state.num_qubits();
    let (j, k) = gate.pair();
    if j >= n || k >= n {
        return Err(Error::invalid(format!(
            "gate pair ({j}, {k}) out of range for {n} qubits"
        )));
    }
    let mut amps = state.amplitudes().to_vec();
    apply_matrix_in_place(&mut amps, n, gate.pair(), gate.matrix());
    Ok(StateVector::from_evolved(n, amps))
}

/// Textbook gates as exact 4x4 matrices.
pub mod standard {
    use super::*;
    use crate::linalg::kron2;
    use crate::scalar::{c, cone};

    pub type Matrix2<T> = [[Complex<T>; 2]; 2];

    pub fn identity2<T: Real>() -> Matrix2<T> {
        [[cone(), czero()], [czero(), cone()]]
    }

    pub fn hadamard<T: Real>() -> Matrix2<T> {
        let h = T::FRAC_1_SQRT_2();
        [[c(h, T::zero()), c(h, T::zero())], [c(h, T::zero()), c(-h, T::zero())]]
    }

    pub fn pauli_x<T: Real>() -> Matrix2<T> {
        [[czero(), cone()], [cone(), czero()]]
    }

    pub fn identity<T: Real>(pair: (usize, usize)) -> Result<TwoQubitGate<T>> {
        TwoQubitGate::new(pair, kron2(&identity2(), &identity2()))
    }

    /// Control on `pair.0`, target on `pair.1`.
    pub fn cnot<T: Real>(pair: (usize, usize)) -> Result<TwoQubitGate<T>> {
        let mut m = [[czero(); 4]; 4];
        m[0][0] = cone();
        m[1][1] = cone();
        m[2][3] = cone();
        m[3][2] = cone();
        TwoQubitGate::new(pair, m)
    }

    /// `a (x) b` with `a` on `pair.0`.
    pub fn local<T: Real>(pair: (usize, usize), a: &Matrix2<T>, b: &Matrix2<T>) -> Result<TwoQubitGate<T>> {
        TwoQubitGate::new(pair, kron2(a, b))
    }
}
