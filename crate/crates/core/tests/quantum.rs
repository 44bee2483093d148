mod common;

use common::{dense_unitary, matvec, PlacedGate, C};
use entpath_core::quantum::{
    fidelity, haar_random_su4, run_circuit, standard, Circuit, CircuitDocument, StateDocument, StateVector,
    TwoQubitGate,
};
use entpath_core::seed::derive_seed;
use proptest::prelude::*;

fn random_circuit(n: usize, r: usize, seed: u64) -> Circuit<f64> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).filter(move |&k| k != j).map(move |k| (j, k))).collect();
    let gates = (0..r)
        .map(|i| {
            let p = pairs[(derive_seed(seed, &[i as u64, 7]) % pairs.len() as u64) as usize];
            TwoQubitGate::new(p, haar_random_su4(derive_seed(seed, &[i as u64]))).unwrap()
        })
        .collect();
    Circuit::from_gates(n, gates).unwrap()
}

fn oracle_gates(c: &Circuit<f64>) -> Vec<PlacedGate> {
    c.gates().iter().map(|g| (g.pair(), *g.matrix())).collect()
}

#[test]
fn run_circuit_matches_dense_product() {
    for seed in 0..30 {
        let n = 2 + (seed as usize % 3);
        let r = 1 + (seed as usize % 5);
        let c = random_circuit(n, r, seed);
        let u = dense_unitary(n, &oracle_gates(&c));
        let init = StateVector::zero(n).unwrap();
        let path = run_circuit(&c, &init).unwrap();
        assert_eq!(path.steps(), r);
        let expect = matvec(&u, init.amplitudes());
        for (a, b) in path.last().amplitudes().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
        // every intermediate state is the corresponding prefix product
        for k in 0..=r {
            let uk = dense_unitary(n, &oracle_gates(&c)[..k]);
            let ek = matvec(&uk, init.amplitudes());
            for (a, b) in path.states()[k].amplitudes().iter().zip(&ek) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn bell_preparation() {
    let h = standard::hadamard::<f64>();
    let c = Circuit::from_gates(
        2,
        vec![
            standard::local((0, 1), &h, &standard::identity2()).unwrap(),
            standard::cnot((0, 1)).unwrap(),
        ],
    )
    .unwrap();
    let out = c.apply(&StateVector::zero(2).unwrap()).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::new(2, vec![C::new(s, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(s, 0.0)]).unwrap();
    assert!((fidelity(&out, &bell).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn reversed_pair_gate_acts_identically() {
    for seed in 0..10 {
        let g = TwoQubitGate::new((0, 2), haar_random_su4(seed)).unwrap();
        let rev = g.reversed();
        assert_eq!(rev.pair(), (2, 0));
        let psi = StateVector::normalized(3, common::random_amplitudes(3, seed)).unwrap();
        let a = Circuit::from_gates(3, vec![g]).unwrap().apply(&psi).unwrap();
        let b = Circuit::from_gates(3, vec![rev]).unwrap().apply(&psi).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn fixtures_load() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (name, n) in [("bell.json", 2), ("ghz3.json", 3), ("w3.json", 3), ("product.json", 2)] {
        let s = StateDocument::read(&dir.join(name)).unwrap().to_state().unwrap();
        assert_eq!(s.num_qubits(), n);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn circuit_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let c = random_circuit(3, 4, 99);
    let doc = CircuitDocument::from_circuit(&c);
    let path = dir.path().join("c.json");
    std::fs::write(&path, doc.to_json().unwrap()).unwrap();
    let back = CircuitDocument::read(&path).unwrap();
    assert_eq!(back, doc);
    let c2 = back.to_circuit().unwrap();
    for (g, h) in c.gates().iter().zip(c2.gates()) {
        assert_eq!(g.pair(), h.pair());
        for (ra, rb) in g.matrix().iter().zip(h.matrix()) {
            for (a, b) in ra.iter().zip(rb) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let c = random_circuit(3, 3, 5);
    let c32 = Circuit::from_gates(
        3,
        c.gates()
            .iter()
            .map(|g| {
                let m = g.matrix().map(|row| row.map(|z| num_complex::Complex::new(z.re as f32, z.im as f32)));
                TwoQubitGate::new(g.pair(), m).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let a = c.apply(&StateVector::zero(3).unwrap()).unwrap();
    let b = c32.apply(&StateVector::<f32>::zero(3).unwrap()).unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        assert!((x.re - y.re as f64).abs() < 1e-5 && (x.im - y.im as f64).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), n in 2usize..5, r in 0usize..6) {
        let c = random_circuit(n, r, seed);
        let psi = StateVector::normalized(n, common::random_amplitudes(n, seed)).unwrap();
        let out = c.apply(&psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_samples_are_special_unitary(seed in any::<u64>()) {
        let g = TwoQubitGate::special((0, 1), haar_random_su4::<f64>(seed)).unwrap();
        prop_assert!(g.unitarity_residual() < 1e-12);
        prop_assert!((g.determinant() - C::new(1.0, 0.0)).norm() < 1e-12);
    }
}
