//! Accuracy of the three extraction methods on a seeded Haar-random unitary
//! as the measurement register grows.

use qpe_core::bench::{accuracy_sweep, least_squares_slope};
use qpe_core::{gen_random_unitary, ExtractionMethod, PowerMode};

fn main() -> qpe_core::Result<()> {
    let problem = gen_random_unitary(4, 12345)?;
    let n_meas: Vec<usize> = (4..=12).collect();
    let records = accuracy_sweep(&problem, &n_meas, &ExtractionMethod::ALL, PowerMode::RepeatedSquaring)?;

    println!("{:>6} {:>10} {:>12} {:>12}", "n_meas", "method", "mean_error", "max_error");
    for r in &records {
        println!("{:>6} {:>10} {:>12.3e} {:>12.3e}", r.n_meas, r.method, r.mean_error, r.max_error);
    }

    for method in ExtractionMethod::ALL {
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.n_meas as f64, r.mean_error.log2()))
            .unzip();
        println!("{method}: log2(error) slope per qubit {:.3}", least_squares_slope(&xs, &ys));
    }
    Ok(())
}
