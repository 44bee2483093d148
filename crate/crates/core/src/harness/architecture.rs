//! Enumeration of gate architectures up to gate-order equivalence.
//!
//! Pairs are normalized to `j < k` (an SU(4) gate on `(k, j)` is an SU(4) gate
//! on `(j, k)` conjugated by SWAP). Slot sequences that differ only by
//! reordering gates on disjoint pairs describe the same DAG; each class is
//! represented by its lexicographically smallest topological order.

use crate::error::{Error, Result};
use crate::quantum::Architecture;

/// Default cap on raw slot sequences examined (`pairs^r`).
pub const DEFAULT_ARCHITECTURE_CAP: u128 = 1_000_000;

#[inline]
fn normalize(p: (usize, usize)) -> (usize, usize) {
    if p.0 <= p.1 {
        p
    } else {
        (p.1, p.0)
    }
}

#[inline]
fn overlaps(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// Lexicographically smallest slot order among all topological orders of
/// the gate DAG, after pair normalization.
pub fn canonical_slots(slots: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let slots: Vec<_> = slots.iter().map(|&p| normalize(p)).collect();
    let mut used = vec![false; slots.len()];
    let mut out = Vec::with_capacity(slots.len());
    for _ in 0..slots.len() {
        let mut pick: Option<usize> = None;
        for i in 0..slots.len() {
            if used[i] {
                continue;
            }
            // available iff no earlier unplaced slot shares a qubit with it
            let blocked = (0..i).any(|j| !used[j] && overlaps(slots[j], slots[i]));
            if blocked {
                continue;
            }
            if pick.is_none_or(|p| slots[i] < slots[p]) {
                pick = Some(i);
            }
        }
        let p = pick.expect("a DAG always has an available vertex");
        used[p] = true;
        out.push(slots[p]);
    }
    out
}

pub fn canonical_form(arch: &Architecture) -> Architecture {
    Architecture::new(arch.num_qubits(), canonical_slots(arch.slots())).expect("normalization keeps pairs valid")
}

/// All normalized qubit pairs `(j, k)`, `j < k`, in lexicographic order.
pub fn qubit_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect()
}

/// Number of raw slot sequences `pairs^r`, saturating.
pub fn raw_sequence_count(n: usize, r: usize) -> u128 {
    let p = qubit_pairs(n).len() as u128;
    (0..r).try_fold(1u128, |acc, _| acc.checked_mul(p)).unwrap_or(u128::MAX)
}

/// One canonical representative per equivalence class of `r`-gate
/// architectures on `n` qubits, in lexicographic order.
pub fn enumerate_architectures(n: usize, r: usize, cap: u128) -> Result<Vec<Architecture>> {
    if n < 2 {
        return Err(Error::invalid("architectures need at least two qubits"));
    }
    let required = raw_sequence_count(n, r);
    if required > cap {
        return Err(Error::ResourceCap {
            what: "architecture enumeration (pairs^r)",
            required,
            cap,
        });
    }
    let pairs = qubit_pairs(n);
    let mut out = Vec::new();
    let mut digits = vec![0usize; r];
    loop {
        let seq: Vec<_> = digits.iter().map(|&d| pairs[d]).collect();
        if canonical_slots(&seq) == seq {
            out.push(Architecture::new(n, seq)?);
        }
        // odometer, last slot fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < pairs.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        for r in 0..4 {
            assert_eq!(enumerate_architectures(2, r, DEFAULT_ARCHITECTURE_CAP).unwrap().len(), 1);
        }
        let one = enumerate_architectures(3, 1, DEFAULT_ARCHITECTURE_CAP).unwrap();
        let slots: Vec<_> = one.iter().map(|a| a.slots()[0]).collect();
        assert_eq!(slots, vec![(0, 1), (0, 2), (1, 2)]);
        // every pair of 3-qubit pairs overlaps: nothing commutes
        assert_eq!(enumerate_architectures(3, 2, DEFAULT_ARCHITECTURE_CAP).unwrap().len(), 9);
    }

    #[test]
    fn disjoint_pairs_merge() {
        // 36 sequences, 3 disjoint unordered pairs each counted twice
        assert_eq!(enumerate_architectures(4, 2, DEFAULT_ARCHITECTURE_CAP).unwrap().len(), 33);
        let a = canonical_slots(&[(2, 3), (0, 1)]);
        assert_eq!(a, vec![(0, 1), (2, 3)]);
        let b = canonical_slots(&[(3, 2), (1, 2), (0, 1)]);
        assert_eq!(b, vec![(2, 3), (1, 2), (0, 1)]);
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for arch in enumerate_architectures(4, 3, DEFAULT_ARCHITECTURE_CAP).unwrap() {
            assert_eq!(canonical_form(&arch), arch);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_architectures(5, 6, 1000),
            Err(Error::ResourceCap { required: 1_000_000, .. })
        ));
    }
}
