//! Recover every eigenphase of the analytic test matrix exactly.
//!
//! The analytic family has eigenphases j / 2^n_mat, so once the measurement
//! register has at least n_mat qubits the max-norm estimate is exact.

use qpe_core::{extract_max_norm, gen_analytic, marginal_distribution, run_qpe, PowerMode, QpeConfig};

fn main() -> qpe_core::Result<()> {
    let n_mat = 3;
    let problem = gen_analytic(n_mat)?;
    let config = QpeConfig::new(5, PowerMode::RepeatedApplication)?;

    let report = problem.matrix.check_unitary(1e-10);
    println!("unitary: {} (max deviation {:.3})", report.is_unitary, report.max_deviation);
    println!("max eigen-residual: {:.2e}", problem.max_eigen_residual().unwrap_or(f64::NAN));

    println!("{:>3} {:>10} {:>10} {:>10}", "j", "reference", "estimate", "peak");
    for j in 0..problem.dim() {
        let run = run_qpe(&problem, j, &config)?;
        let dist = marginal_distribution(&run.state);
        let est = extract_max_norm(&dist)?;
        let reference = problem.reference_phases.as_ref().map_or(f64::NAN, |p| p[j]);
        let peak = dist.probs[est.peak_index.unwrap_or(0)];
        println!("{j:>3} {reference:>10.6} {:>10.6} {peak:>10.6}", est.value);
    }
    Ok(())
}
