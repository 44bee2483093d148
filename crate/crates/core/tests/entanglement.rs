mod common;

use common::{geometric_oracle, partial_trace, random_amplitudes, schmidt_entropy_two_qubit, C};
use entpath_core::entanglement::{
    geometric_entanglement, reduced_density_matrix, relative_entropy_pure_bipartite, von_neumann_entropy,
    GeometricOptions, QubitSet,
};
use entpath_core::quantum::{haar_random_su4, standard, Circuit, StateDocument, StateVector, TwoQubitGate};
use proptest::prelude::*;

fn fixture(name: &str) -> StateVector<f64> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    StateDocument::read(&path).unwrap().to_state().unwrap()
}

fn random_state(n: usize, seed: u64) -> StateVector<f64> {
    StateVector::normalized(n, random_amplitudes(n, seed)).unwrap()
}

fn eg(s: &StateVector<f64>) -> f64 {
    geometric_entanglement(s, &GeometricOptions::default()).unwrap().value
}

#[test]
fn fixture_values() {
    assert!(eg(&fixture("product.json")) < 1e-9);
    assert!((eg(&fixture("bell.json")) - 0.5).abs() < 1e-6);
    assert!((eg(&fixture("ghz3.json")) - 0.5).abs() < 1e-6);
    assert!((eg(&fixture("w3.json")) - 5.0 / 9.0).abs() < 1e-4);
}

#[test]
fn fixtures_agree_with_grid_oracle() {
    for (name, n) in [("bell.json", 2), ("ghz3.json", 3), ("w3.json", 3), ("product.json", 2)] {
        let s = fixture(name);
        let oracle = geometric_oracle(s.amplitudes(), n);
        assert!((eg(&s) - oracle).abs() < 1e-4, "{name}: {} vs {oracle}", eg(&s));
    }
}

#[test]
fn random_states_agree_with_grid_oracle() {
    for seed in 0..6 {
        let n = 2 + seed as usize % 2;
        let s = random_state(n, 1000 + seed);
        let oracle = geometric_oracle(s.amplitudes(), n);
        assert!((eg(&s) - oracle).abs() < 1e-4, "seed {seed}: {} vs {oracle}", eg(&s));
    }
}

#[test]
fn w_marginal_entropy() {
    let w = fixture("w3.json");
    let rho = reduced_density_matrix(&w, QubitSet::from_qubits(&[0])).unwrap();
    // marginal is diag(2/3, 1/3): -(2/3)log2(2/3) - (1/3)log2(1/3)
    let expect = -(2.0f64 / 3.0) * (2.0f64 / 3.0).log2() - (1.0f64 / 3.0) * (1.0f64 / 3.0).log2();
    let got = von_neumann_entropy(&rho).unwrap().value;
    assert!((got - expect).abs() < 1e-9);
    assert!((got - 0.91830).abs() < 1e-5);
}

#[test]
fn bell_marginal_is_maximally_mixed() {
    let bell = fixture("bell.json");
    for q in 0..2 {
        let rho = reduced_density_matrix(&bell, QubitSet::from_qubits(&[q])).unwrap();
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-14);
        assert!(rho.entry(0, 1).norm() < 1e-14);
        assert!((von_neumann_entropy(&rho).unwrap().value - 1.0).abs() < 1e-9);
    }
}

#[test]
fn partial_trace_matches_double_loop() {
    for seed in 0..10 {
        let s = random_state(3, seed);
        for keep in [vec![0, 2], vec![1], vec![0, 1], vec![2]] {
            let rho = reduced_density_matrix(&s, QubitSet::from_qubits(&keep)).unwrap();
            let oracle = partial_trace(s.amplitudes(), 3, &keep);
            for (i, row) in oracle.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((rho.entry(i, j) - v).norm() < 1e-13);
                }
            }
        }
    }
}

#[test]
fn pure_bipartite_alias_matches_schmidt_spectrum() {
    for seed in 0..20 {
        let s = random_state(2, 50 + seed);
        let got = relative_entropy_pure_bipartite(&s, QubitSet::from_qubits(&[0])).unwrap().value;
        assert!((got - schmidt_entropy_two_qubit(s.amplitudes())).abs() < 1e-9);
    }
    let bell = fixture("bell.json");
    assert!((relative_entropy_pure_bipartite(&bell, QubitSet::from_qubits(&[1])).unwrap().value - 1.0).abs() < 1e-12);
    let prod = fixture("product.json");
    assert!(relative_entropy_pure_bipartite(&prod, QubitSet::from_qubits(&[0])).unwrap().value.abs() < 1e-12);
}

#[test]
fn invalid_masks_rejected() {
    let s = random_state(3, 1);
    assert!(reduced_density_matrix(&s, QubitSet(0)).is_err());
    assert!(reduced_density_matrix(&s, QubitSet(0b111)).is_err());
}

#[test]
fn single_precision_entropy() {
    let amps: Vec<num_complex::Complex<f32>> = fixture("w3.json")
        .amplitudes()
        .iter()
        .map(|z: &C| num_complex::Complex::new(z.re as f32, z.im as f32))
        .collect();
    let w = StateVector::<f32>::normalized(3, amps).unwrap();
    let rho = reduced_density_matrix(&w, QubitSet::from_qubits(&[2])).unwrap();
    assert!((von_neumann_entropy(&rho).unwrap().value - 0.918_296).abs() < 1e-4);
}

fn local_unitary(pair: (usize, usize), seed: u64) -> TwoQubitGate<f64> {
    // SU(2) element on the first qubit of `pair`, identity on the second
    let a = (seed as f64 * 0.37).sin() * 3.0;
    let b = (seed as f64 * 1.91).cos() * 3.0;
    let c = (seed as f64 * 0.73).sin() * 3.0;
    let u = [
        [C::from_polar((a / 2.0).cos(), b), C::from_polar((a / 2.0).sin(), c)],
        [-C::from_polar((a / 2.0).sin(), -c), C::from_polar((a / 2.0).cos(), -b)],
    ];
    standard::local(pair, &u, &standard::identity2()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn entropy_is_symmetric_across_cut(seed in any::<u64>(), mask in 1u64..7) {
        let s = random_state(3, seed);
        let a = relative_entropy_pure_bipartite(&s, QubitSet(mask)).unwrap().value;
        let b = relative_entropy_pure_bipartite(&s, QubitSet(mask).complement(3)).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9);
        let bound = QubitSet(mask).len().min(3 - QubitSet(mask).len()) as f64;
        prop_assert!(a >= 0.0 && a <= bound + 1e-12);
    }

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>(), q in 0usize..3) {
        let s = random_state(3, seed);
        let pair = if q == 2 { (2, 0) } else { (q, q + 1) };
        let moved = Circuit::from_gates(3, vec![local_unitary(pair, seed)]).unwrap().apply(&s).unwrap();
        prop_assert!((eg(&s) - eg(&moved)).abs() < 1e-6);
        let cut = QubitSet::from_qubits(&[0]);
        let a = relative_entropy_pure_bipartite(&s, cut).unwrap().value;
        let b = relative_entropy_pure_bipartite(&moved, cut).unwrap().value;
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn geometric_value_is_bounded(seed in any::<u64>(), n in 2usize..5) {
        let s = random_state(n, seed);
        let e = eg(&s);
        prop_assert!(e >= 0.0);
        prop_assert!(e <= 1.0 - 0.5f64.powi(n as i32 - 1) + 1e-9);
    }

    #[test]
    fn more_restarts_never_increase_value(seed in any::<u64>()) {
        let gate = TwoQubitGate::new((0, 1), haar_random_su4(seed)).unwrap();
        let s = Circuit::from_gates(3, vec![gate]).unwrap().apply(&random_state(3, seed)).unwrap();
        let few = GeometricOptions { restarts: 4, ..Default::default() };
        let many = GeometricOptions { restarts: 16, ..Default::default() };
        let a = geometric_entanglement(&s, &few).unwrap().value;
        let b = geometric_entanglement(&s, &many).unwrap().value;
        prop_assert!(b <= a);
    }
}
