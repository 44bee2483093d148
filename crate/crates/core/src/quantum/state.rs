use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, is_finite, Real};

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 12;

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::invalid(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// A computational-basis label. Qubit 0 is the most significant bit of
/// `index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisConfiguration {
    num_qubits: usize,
    index: usize,
}

impl BasisConfiguration {
    pub fn new(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if index >= 1 << num_qubits {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        Ok(Self { num_qubits, index })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::invalid(format!("bit value {b} is not 0 or 1")));
            }
            index = (index << 1) | b as usize;
        }
        Self::new(bits.len(), index)
    }

    /// Parses a bitstring such as `"101"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::invalid(format!("bad bit character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    #[inline]
    pub(crate) fn new_unchecked(num_qubits: usize, index: usize) -> Self {
        Self { num_qubits, index }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.index
    }

    #[inline]
    pub fn bit(&self, qubit: usize) -> u8 {
        ((self.index >> (self.num_qubits - 1 - qubit)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.num_qubits).map(|q| self.bit(q)).collect()
    }
}

impl fmt::Display for BasisConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits {
            write!(f, "{}", self.bit(q))?;
        }
        Ok(())
    }
}

/// Normalized amplitude vector of an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Validates length, finiteness and unit norm (within `T::TOL`).
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::from_raw(num_qubits, amplitudes)?;
        let norm = state.norm();
        if (norm - T::one()).abs() > T::TOL {
            return Err(Error::invalid(format!("state norm {norm} differs from 1")));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let mut state = Self::from_raw(num_qubits, amplitudes)?;
        let norm = state.norm();
        if norm == T::zero() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        for a in &mut state.amplitudes {
            *a /= norm;
        }
        Ok(state)
    }

    fn from_raw(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::invalid(format!(
                "expected {} amplitudes for {num_qubits} qubits, got {}",
                1usize << num_qubits,
                amplitudes.len()
            )));
        }
        if !amplitudes.iter().all(is_finite) {
            return Err(Error::invalid("non-finite amplitude"));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Internal constructor for amplitudes produced by unitary evolution of a
    /// validated state.
    pub(crate) fn from_evolved(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(BasisConfiguration::new(num_qubits, 0)?)
    }

    pub fn basis(config: BasisConfiguration) -> Result<Self> {
        check_qubit_count(config.num_qubits())?;
        let mut amplitudes = vec![czero(); 1 << config.num_qubits()];
        amplitudes[config.index()] = cone();
        Ok(Self {
            num_qubits: config.num_qubits(),
            amplitudes,
        })
    }

    /// Tensor product; `self` occupies the leading (more significant) qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        check_qubit_count(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self::from_evolved(n, amplitudes))
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        let ph = Complex::from_polar(T::one(), theta);
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * ph).collect(),
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, config: BasisConfiguration) -> Complex<T> {
        self.amplitudes[config.index()]
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::invalid(format!(
                "qubit count mismatch: {} vs {}",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Probability that measuring `qubit` in the computational basis yields 1.
    pub fn probability_one(&self, qubit: usize) -> Result<T> {
        if qubit >= self.num_qubits {
            return Err(Error::invalid(format!("qubit {qubit} out of range")));
        }
        let shift = self.num_qubits - 1 - qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}

/// `|<b|a>|^2`, clamped into [0, 1].
pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let ov = b.inner(a)?;
    Ok(ov.norm_sqr().max(T::zero()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_bit_order_is_msb_first() {
        let q = BasisConfiguration::parse("100").unwrap();
        assert_eq!(q.index(), 4);
        assert_eq!(q.bit(0), 1);
        assert_eq!(q.bits(), vec![1, 0, 0]);
        assert_eq!(q.to_string(), "100");
        assert!(BasisConfiguration::parse("10x").is_err());
        assert!(BasisConfiguration::new(2, 4).is_err());
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        assert!(StateVector::<f64>::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(StateVector::<f64>::new(1, vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(StateVector::<f64>::new(1, vec![c(f64::NAN, 0.0), c(0.0, 0.0)]).is_err());
        assert!(StateVector::<f64>::zero(0).is_err());
        assert!(StateVector::<f64>::zero(MAX_QUBITS + 1).is_err());
        assert!(StateVector::<f64>::normalized(1, vec![c(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn fidelity_fixtures() {
        let psi = StateVector::<f64>::normalized(2, vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.7), c(0.4, 0.0)])
            .unwrap();
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-15);

        let s00 = StateVector::<f64>::basis(BasisConfiguration::parse("00").unwrap()).unwrap();
        let s11 = StateVector::<f64>::basis(BasisConfiguration::parse("11").unwrap()).unwrap();
        assert_eq!(fidelity(&s00, &s11).unwrap(), 0.0);

        let zero = StateVector::<f64>::zero(1).unwrap();
        let plus = StateVector::new(1, vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!((fidelity(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);

        assert!(fidelity(&zero, &s00).is_err());
    }

    #[test]
    fn probability_of_qubit_one() {
        let s = StateVector::<f64>::basis(BasisConfiguration::parse("10").unwrap()).unwrap();
        assert_eq!(s.probability_one(0).unwrap(), 1.0);
        assert_eq!(s.probability_one(1).unwrap(), 0.0);
    }

    #[test]
    fn single_precision_instance() {
        let s = StateVector::<f32>::normalized(1, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }
}
