mod common;

use common::*;
use proptest::prelude::*;
use qpe_core::rng::GaussianSource;
use qpe_core::{Complex64, DenseOperator, RegisterLayout, StateVector};

#[derive(Debug, Clone)]
enum Gate {
    H(usize),
    CPhase(usize, usize, f64),
    Swap(usize, usize),
    CDense(usize, u64),
}

fn random_op(n_mat: usize, seed: u64) -> DenseOperator {
    let mut g = GaussianSource::new(seed);
    DenseOperator::from_fn(1 << n_mat, |_, _| g.next_complex()).unwrap()
}

fn gate_strategy(n_meas: usize, n_mat: usize) -> impl Strategy<Value = Gate> {
    let n = n_meas + n_mat;
    prop_oneof![
        (0..n).prop_map(Gate::H),
        (0..n, 0..n, -6.3f64..6.3)
            .prop_filter("distinct", |(a, b, _)| a != b)
            .prop_map(|(a, b, t)| Gate::CPhase(a, b, t)),
        (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::Swap(a, b)),
        (0..n_meas, any::<u64>()).prop_map(|(c, s)| Gate::CDense(c, s)),
    ]
}

fn apply(state: &mut StateVector, gate: &Gate, n_mat: usize) {
    match *gate {
        Gate::H(q) => state.apply_hadamard(q).unwrap(),
        Gate::CPhase(a, b, t) => state.apply_controlled_phase(a, b, t).unwrap(),
        Gate::Swap(a, b) => state.apply_swap(a, b).unwrap(),
        Gate::CDense(c, s) => state.apply_controlled_dense(c, &random_op(n_mat, s)).unwrap(),
    }
}

fn oracle_matrix(gate: &Gate, n_meas: usize, n_mat: usize) -> Mat {
    let n = n_meas + n_mat;
    match *gate {
        Gate::H(q) => embed_1q(&hadamard(), q, n),
        Gate::CPhase(a, b, t) => controlled_phase(a, b, t, n),
        Gate::Swap(a, b) => swap(a, b, n),
        Gate::CDense(ctl, s) => controlled_dense(ctl, &to_mat(&random_op(n_mat, s)), n_meas),
    }
}

fn layout_strategy() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=2).prop_filter("n_total <= 6", |(a, b)| a + b <= 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_match_tensor_product_matrices(
        (n_meas, n_mat, gate, seed) in layout_strategy()
            .prop_flat_map(|(m, t)| (Just(m), Just(t), gate_strategy(m, t), any::<u64>()))
    ) {
        let layout = RegisterLayout::new(n_meas, n_mat).unwrap();
        let input = random_state(layout.n_total(), seed);
        let mut state = StateVector::from_amplitudes(layout, input.clone()).unwrap();
        apply(&mut state, &gate, n_mat);
        let expected = matvec(&oracle_matrix(&gate, n_meas, n_mat), &input);
        prop_assert!(max_diff(state.amplitudes(), &expected) <= 1e-12);
    }

    #[test]
    fn gates_are_linear(
        (n_meas, n_mat, gate, s1, s2, alpha, beta) in layout_strategy().prop_flat_map(|(m, t)| (
            Just(m), Just(t), gate_strategy(m, t), any::<u64>(), any::<u64>(),
            (-2.0f64..2.0, -2.0f64..2.0), (-2.0f64..2.0, -2.0f64..2.0),
        ))
    ) {
        let layout = RegisterLayout::new(n_meas, n_mat).unwrap();
        let (a, b) = (c(alpha.0, alpha.1), c(beta.0, beta.1));
        let x = random_state(layout.n_total(), s1);
        let y = random_state(layout.n_total(), s2);
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();

        let run = |v: Vec<Complex64>| {
            let mut s = StateVector::from_amplitudes(layout, v).unwrap();
            apply(&mut s, &gate, n_mat);
            s.into_amplitudes()
        };
        let lhs = run(combo);
        let gx = run(x);
        let gy = run(y);
        let rhs: Vec<Complex64> = gx.iter().zip(&gy).map(|(p, q)| a * p + b * q).collect();
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn controlled_identity_is_identity(n_meas in 1usize..=5, n_mat in 1usize..=3, ctl_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let layout = RegisterLayout::new(n_meas, n_mat).unwrap();
        let control = ((n_meas as f64) * ctl_frac) as usize;
        let input = random_state(layout.n_total(), seed);
        let mut s = StateVector::from_amplitudes(layout, input.clone()).unwrap();
        s.apply_controlled_dense(control, &DenseOperator::identity(1 << n_mat).unwrap()).unwrap();
        prop_assert!(max_diff(s.amplitudes(), &input) <= 1e-15);
    }
}

/// Long random gate sequences with unitary operators keep the norm.
pub fn norm_drift(n_meas: usize, n_mat: usize, steps: usize, seed: u64) -> f64 {
    let layout = RegisterLayout::new(n_meas, n_mat).unwrap();
    let mut s = StateVector::from_amplitudes(layout, random_state(layout.n_total(), seed)).unwrap();
    let u = qpe_core::problems::haar_unitary(1 << n_mat, seed).unwrap();
    let mut g = GaussianSource::new(seed ^ 0xabc);
    let n = layout.n_total();
    let pick = |g: &mut GaussianSource, k: usize| ((g.next_gaussian().abs() * 1e6) as usize) % k;
    for _ in 0..steps {
        match pick(&mut g, 4) {
            0 => s.apply_hadamard(pick(&mut g, n)).unwrap(),
            1 => {
                let a = pick(&mut g, n);
                let b = (a + 1 + pick(&mut g, n - 1)) % n;
                s.apply_controlled_phase(a, b, g.next_gaussian()).unwrap();
            }
            2 => {
                let a = pick(&mut g, n);
                let b = (a + 1 + pick(&mut g, n - 1)) % n;
                s.apply_swap(a, b).unwrap();
            }
            _ => s.apply_controlled_dense(pick(&mut g, n_meas), &u).unwrap(),
        }
    }
    (s.norm() - 1.0).abs()
}

#[test]
fn norm_conserved_small_and_large() {
    for (n_meas, n_mat, seed) in [(2, 1, 1), (3, 3, 2), (6, 4, 3), (10, 2, 4)] {
        assert!(norm_drift(n_meas, n_mat, 200, seed) <= 1e-10);
    }
    // n_total = 20
    assert!(norm_drift(16, 4, 40, 5) <= 1e-10);
}

#[test]
fn hadamard_layer_gives_uniform_register() {
    let layout = RegisterLayout::bare(6).unwrap();
    let mut s = StateVector::new_basis_state(layout, 0).unwrap();
    for q in 0..6 {
        s.apply_hadamard(q).unwrap();
    }
    for a in s.amplitudes() {
        assert!((a - c(0.125, 0.)).norm() < 1e-15);
    }
}
