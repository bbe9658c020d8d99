//! Repeated application and repeated squaring produce the same final state,
//! but with very different numbers of controlled-unitary launches.

use qpe_core::{gen_random_unitary, run_qpe, PowerMode, QpeConfig};

fn main() -> qpe_core::Result<()> {
    let problem = gen_random_unitary(3, 7)?;
    for n_meas in [4, 8, 11] {
        let a = run_qpe(&problem, 0, &QpeConfig::new(n_meas, PowerMode::RepeatedApplication)?)?;
        let b = run_qpe(&problem, 0, &QpeConfig::new(n_meas, PowerMode::RepeatedSquaring)?)?;
        let diff = a
            .state
            .amplitudes()
            .iter()
            .zip(b.state.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        println!(
            "n_meas={n_meas:>2}  launches repeat={:>5} square={:>2}  max amplitude diff {diff:.2e}",
            a.controlled_applications, b.controlled_applications
        );
    }
    Ok(())
}
