mod common;

use common::*;
use proptest::prelude::*;
use qpe_core::bench::least_squares_slope;
use qpe_core::extraction::spectrum_errors;
use qpe_core::{
    extract_max_norm, gen_analytic, gen_random_unitary, marginal_distribution, mean_spectrum_error, phase_error,
    run_qpe, DenseOperator, ExtractionMethod, MeasurementDistribution, PowerMode, QpeConfig, SpectralProblem,
};

fn cfg(n_meas: usize, mode: PowerMode) -> QpeConfig {
    QpeConfig::new(n_meas, mode).unwrap()
}

#[test]
fn kernel_peak_for_one_third() {
    let d = MeasurementDistribution::new(3, qpe_kernel(1.0 / 3.0, 3)).unwrap();
    let e = extract_max_norm(&d).unwrap();
    assert_eq!(e.peak_index, Some(3));
    assert_eq!(e.value, 0.375);
}

#[test]
fn probability_is_conserved() {
    let p = gen_random_unitary(3, 5).unwrap();
    let run = run_qpe(&p, 2, &cfg(6, PowerMode::RepeatedSquaring)).unwrap();
    let d = marginal_distribution(&run.state);
    assert!((d.total() - run.state.norm().powi(2)).abs() <= 1e-10);
    assert!(d.probs.iter().all(|&x| x >= 0.0));
}

#[test]
fn mean_error_examples() {
    let p = gen_analytic(3).unwrap();
    for n_meas in 3..=6 {
        let e = mean_spectrum_error(&p, &cfg(n_meas, PowerMode::RepeatedApplication), ExtractionMethod::MaxNorm).unwrap();
        assert!(e <= 1e-9);
    }

    let z = SpectralProblem {
        n_mat: 1,
        matrix: DenseOperator::diagonal(&[c(1., 0.), c(-1., 0.)]).unwrap(),
        eigenvectors: vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]],
        reference_phases: Some(vec![0.0, 0.5]),
        provenance: qpe_core::Provenance::External,
        seed: None,
    };
    assert_eq!(mean_spectrum_error(&z, &cfg(3, PowerMode::RepeatedApplication), ExtractionMethod::MaxNorm).unwrap(), 0.0);

    let r = gen_random_unitary(4, 12345).unwrap();
    let e8 = mean_spectrum_error(&r, &cfg(8, PowerMode::RepeatedSquaring), ExtractionMethod::MaxNorm).unwrap();
    let e9 = mean_spectrum_error(&r, &cfg(9, PowerMode::RepeatedSquaring), ExtractionMethod::MaxNorm).unwrap();
    let ratio = e9 / e8;
    assert!((0.3..=0.7).contains(&ratio), "ratio {ratio}");
}

#[test]
fn max_norm_error_bound_when_peak_is_large() {
    let threshold = 4.0 / std::f64::consts::PI.powi(2);
    let mut checked = 0;
    for seed in 0..20 {
        let p = gen_random_unitary(2, seed).unwrap();
        for n_meas in [3, 5, 7] {
            for j in 0..4 {
                let run = run_qpe(&p, j, &cfg(n_meas, PowerMode::RepeatedSquaring)).unwrap();
                let d = marginal_distribution(&run.state);
                let e = extract_max_norm(&d).unwrap();
                if d.probs[e.peak_index.unwrap()] > threshold {
                    checked += 1;
                    let err = phase_error(e.value, p.reference_phases.as_ref().unwrap()[j]);
                    assert!(err <= ((1u64 << n_meas) as f64).recip() + 1e-12);
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn accuracy_improves_with_measurement_qubits() {
    let p = gen_random_unitary(4, 12345).unwrap();
    let ns: Vec<usize> = (4..=12).collect();
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| mean_spectrum_error(&p, &cfg(n, PowerMode::RepeatedSquaring), ExtractionMethod::MaxNorm).unwrap())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] <= 1.5 * w[0], "{errs:?}");
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
    let slope = least_squares_slope(&xs, &ys);
    assert!((-1.3..=-0.7).contains(&slope), "slope {slope}");
}

#[test]
fn weighted_versus_max_norm_observation() {
    // Qualitative only: report where the naive weighted average overtakes
    // max-norm, if anywhere in range.
    let p = gen_random_unitary(4, 12345).unwrap();
    let methods = [ExtractionMethod::MaxNorm, ExtractionMethod::WeightedAverage, ExtractionMethod::WeightedCircular];
    for n_meas in [4, 8, 12] {
        let errs = spectrum_errors(&p, &cfg(n_meas, PowerMode::RepeatedSquaring), &methods).unwrap();
        let means: Vec<f64> = errs.iter().map(|e| e.iter().sum::<f64>() / e.len() as f64).collect();
        println!("n_meas={n_meas} max={:.3e} weighted={:.3e} circular={:.3e}", means[0], means[1], means[2]);
        assert!(means.iter().all(|m| m.is_finite()));
    }
}

proptest! {
    #[test]
    fn max_norm_scale_invariant(probs in prop::collection::vec(0.0f64..1.0, 16), scale in 1e-6f64..1e6) {
        prop_assume!(probs.iter().any(|&p| p > 0.0));
        let a = MeasurementDistribution::new(4, probs.clone()).unwrap();
        let b = MeasurementDistribution::new(4, probs.iter().map(|p| p * scale).collect()).unwrap();
        prop_assert_eq!(extract_max_norm(&a).unwrap().peak_index, extract_max_norm(&b).unwrap().peak_index);
    }

    #[test]
    fn estimates_stay_in_unit_interval(probs in prop::collection::vec(0.0f64..1.0, 8)) {
        prop_assume!(probs.iter().any(|&p| p > 0.0));
        let d = MeasurementDistribution::new(3, probs).unwrap();
        for m in ExtractionMethod::ALL {
            if let Ok(e) = qpe_core::extract(&d, m) {
                prop_assert!((0.0..1.0).contains(&e.value));
            }
        }
    }
}
