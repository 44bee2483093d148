//! Discrete-time configuration paths through a circuit.
//!
//! A path visits one basis configuration per time step. At each gate only the
//! two acted qubits may change, so every path branches four ways per gate;
//! all other bits are carried through. The amplitude of a path is the product
//! of the gate matrix elements it traverses, and summing the amplitudes of
//! every path between two endpoints gives the transition amplitude.

use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quantum::{BasisConfiguration, Circuit, StateVector};
use crate::scalar::{cone, czero, Real};

pub mod deutsch;

/// Default enumeration cap: `4^12` paths.
pub const DEFAULT_PATH_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretePath {
    configs: Vec<BasisConfiguration>,
}

impl DiscretePath {
    #[inline]
    pub fn configs(&self) -> &[BasisConfiguration] {
        &self.configs
    }

    pub fn start(&self) -> BasisConfiguration {
        self.configs[0]
    }

    pub fn end(&self) -> BasisConfiguration {
        *self.configs.last().expect("paths have at least one configuration")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathAmplitude<T: Real> {
    pub path: DiscretePath,
    pub amplitude: Complex<T>,
    pub magnitude: T,
    /// In `(-pi, pi]`.
    pub phase: T,
}

/// Polar form with the phase in `(-pi, pi]`; the phase of zero is zero.
pub fn decompose_amplitude<T: Real>(a: Complex<T>) -> (T, T) {
    let magnitude = a.norm();
    if magnitude == T::zero() {
        return (T::zero(), T::zero());
    }
    let mut phase = a.im.atan2(a.re);
    if phase <= -T::PI() {
        phase = T::PI();
    }
    (magnitude, phase)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Fixed(BasisConfiguration),
    All,
}

/// Number of paths enumerated from a fixed start: `4^R`.
pub fn path_count(gates: usize) -> u128 {
    1u128.checked_shl(2 * gates as u32).unwrap_or(u128::MAX)
}

fn check_budget(gates: usize, cap: u128) -> Result<()> {
    let required = path_count(gates);
    if required > cap || gates >= 64 {
        return Err(Error::ResourceCap {
            what: "path enumeration (4^R)",
            required,
            cap,
        });
    }
    Ok(())
}

/// Depth-first stream of paths. Branches at each step are taken in order of
/// the acted pair's output value `2 * bit_j + bit_k`.
pub struct PathIter<'a, T: Real> {
    circuit: &'a Circuit<T>,
    n: usize,
    target: Option<usize>,
    /// Qubits not acted on by any gate after step `i`; they must already
    /// agree with the fixed endpoint.
    frozen_after: Vec<usize>,
    configs: Vec<usize>,
    partial: Vec<Complex<T>>,
    next_branch: Vec<u8>,
    depth: usize,
    done: bool,
}

impl<'a, T: Real> PathIter<'a, T> {
    fn pair_bits(&self, step: usize) -> (usize, usize) {
        let (j, k) = self.circuit.gates()[step].pair();
        (1 << (self.n - 1 - j), 1 << (self.n - 1 - k))
    }

    fn emit(&self) -> PathAmplitude<T> {
        let amplitude = self.partial[self.configs.len() - 1];
        let (magnitude, phase) = decompose_amplitude(amplitude);
        PathAmplitude {
            path: DiscretePath {
                configs: self
                    .configs
                    .iter()
                    .map(|&i| BasisConfiguration::new_unchecked(self.n, i))
                    .collect(),
            },
            amplitude,
            magnitude,
            phase,
        }
    }

    /// Advances to the next complete path, leaving it in `configs`/`partial`.
    fn advance(&mut self) -> bool {
        let r = self.circuit.len();
        if self.done {
            return false;
        }
        if r == 0 {
            self.done = true;
            return self.target.is_none_or(|t| t == self.configs[0]);
        }
        loop {
            // `depth` is the step whose branch is chosen next (0-based gate index).
            if self.next_branch[self.depth] >= 4 {
                if self.depth == 0 {
                    self.done = true;
                    return false;
                }
                self.next_branch[self.depth] = 0;
                self.depth -= 1;
                continue;
            }
            let branch = self.next_branch[self.depth] as usize;
            self.next_branch[self.depth] += 1;

            let step = self.depth;
            let (bj, bk) = self.pair_bits(step);
            let prev = self.configs[step];
            let in_local = (((prev & bj) != 0) as usize) << 1 | ((prev & bk) != 0) as usize;
            let mut next = prev & !(bj | bk);
            if branch & 2 != 0 {
                next |= bj;
            }
            if branch & 1 != 0 {
                next |= bk;
            }
            if let Some(t) = self.target {
                if (next ^ t) & self.frozen_after[step] != 0 {
                    continue;
                }
            }
            let element = self.circuit.gates()[step].matrix()[branch][in_local];
            self.configs[step + 1] = next;
            self.partial[step + 1] = self.partial[step] * element;
            if step + 1 == r {
                return true;
            }
            self.depth += 1;
        }
    }
}

impl<T: Real> Iterator for PathIter<'_, T> {
    type Item = PathAmplitude<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.advance() {
            Some(self.emit())
        } else {
            None
        }
    }
}

fn check_config<T: Real>(circuit: &Circuit<T>, q: &BasisConfiguration, what: &str) -> Result<()> {
    if q.num_qubits() != circuit.num_qubits() {
        return Err(Error::invalid(format!(
            "{what} has {} qubits, circuit has {}",
            q.num_qubits(),
            circuit.num_qubits()
        )));
    }
    Ok(())
}

/// Streams every structurally allowed path from `start`. With
/// [`Endpoint::All`] exactly `4^R` paths are produced; paths whose amplitude
/// happens to be zero are still produced.
pub fn enumerate_paths<'a, T: Real>(
    circuit: &'a Circuit<T>,
    start: BasisConfiguration,
    end: Endpoint,
    cap: u128,
) -> Result<PathIter<'a, T>> {
    check_config(circuit, &start, "start configuration")?;
    if let Endpoint::Fixed(q) = &end {
        check_config(circuit, q, "end configuration")?;
    }
    check_budget(circuit.len(), cap)?;
    let n = circuit.num_qubits();
    let r = circuit.len();
    let all = (1usize << n) - 1;
    let mut frozen_after = vec![all; r];
    let mut touched = 0usize;
    for step in (0..r).rev() {
        frozen_after[step] = all & !touched;
        let (j, k) = circuit.gates()[step].pair();
        touched |= (1 << (n - 1 - j)) | (1 << (n - 1 - k));
    }
    let mut configs = vec![0; r + 1];
    configs[0] = start.index();
    let mut partial = vec![czero(); r + 1];
    partial[0] = cone();
    Ok(PathIter {
        circuit,
        n,
        target: match end {
            Endpoint::Fixed(q) => Some(q.index()),
            Endpoint::All => None,
        },
        frozen_after,
        configs,
        partial,
        next_branch: vec![0; r.max(1)],
        depth: 0,
        done: false,
    })
}

/// `<end|U|start>` as a sum over paths.
pub fn transition_amplitude<T: Real>(
    circuit: &Circuit<T>,
    start: BasisConfiguration,
    end: BasisConfiguration,
    cap: u128,
) -> Result<Complex<T>> {
    let mut it = enumerate_paths(circuit, start, Endpoint::Fixed(end), cap)?;
    let r = circuit.len();
    let mut sum = czero();
    while it.advance() {
        sum += it.partial[r];
    }
    Ok(sum)
}

/// Path-sum amplitude for every endpoint from `start`, indexed by basis index.
pub fn transition_amplitudes_from<T: Real>(
    circuit: &Circuit<T>,
    start: BasisConfiguration,
    cap: u128,
) -> Result<Vec<Complex<T>>> {
    let mut it = enumerate_paths(circuit, start, Endpoint::All, cap)?;
    let r = circuit.len();
    let mut out = vec![czero(); 1 << circuit.num_qubits()];
    while it.advance() {
        out[it.configs[r]] += it.partial[r];
    }
    Ok(out)
}

/// Direct-simulation counterpart of [`transition_amplitude`].
pub fn direct_amplitude<T: Real>(
    circuit: &Circuit<T>,
    start: BasisConfiguration,
    end: BasisConfiguration,
) -> Result<Complex<T>> {
    check_config(circuit, &end, "end configuration")?;
    let out = circuit.apply(&StateVector::basis(start)?)?;
    Ok(out.amplitude(end))
}

/// One row of a path-sum verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointResidual {
    pub start: BasisConfiguration,
    pub end: BasisConfiguration,
    pub path_sum: Complex<f64>,
    pub direct: Complex<f64>,
    pub residual: f64,
}

/// Compares path sums with direct simulation for the given endpoint pairs.
pub fn verify_path_sum(
    circuit: &Circuit<f64>,
    pairs: &[(BasisConfiguration, BasisConfiguration)],
    cap: u128,
) -> Result<Vec<EndpointResidual>> {
    pairs
        .iter()
        .map(|&(start, end)| {
            let path_sum = transition_amplitude(circuit, start, end, cap)?;
            let direct = direct_amplitude(circuit, start, end)?;
            Ok(EndpointResidual {
                start,
                end,
                path_sum,
                direct,
                residual: (path_sum - direct).norm(),
            })
        })
        .collect()
}

/// Writes `(step, configuration, amplitude_re, amplitude_im)` rows.
pub fn write_amplitude_csv(path: &Path, rows: &[(usize, BasisConfiguration, Complex<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Csv {
        path: path.into(),
        source: e,
    })?;
    let csv_err = |e| Error::Csv {
        path: path.into(),
        source: e,
    };
    w.write_record(["step", "configuration", "amplitude_re", "amplitude_im"])
        .map_err(csv_err)?;
    for (k, q, a) in rows {
        w.write_record([
            k.to_string(),
            q.to_string(),
            crate::canonical::format_f64(a.re),
            crate::canonical::format_f64(a.im),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
