//! Time the controlled-unitary kernel and full circuits across register
//! sizes, then fit the per-qubit growth.
//!
//! Pass `--csv <path>` to also write the records.

use qpe_core::bench::{bench_kernel, bench_qpe, fit_scaling, write_csv, BenchScope};
use qpe_core::PowerMode;

fn main() -> qpe_core::Result<()> {
    let csv_path = std::env::args().skip_while(|a| a != "--csv").nth(1);

    let mut records = Vec::new();
    for n_meas in 12..=18 {
        records.push(bench_kernel(4, n_meas, 5)?);
    }
    for n_meas in [4, 6, 8, 10] {
        records.push(bench_qpe(4, n_meas, PowerMode::RepeatedApplication, 3)?);
    }

    println!("{:>7} {:>6} {:>7} {:>12} {:>14}", "scope", "n_meas", "n_total", "wall_s", "state_bytes");
    for r in &records {
        println!("{:>7?} {:>6} {:>7} {:>12.6} {:>14}", r.scope, r.n_meas, r.n_total, r.wall_seconds, r.peak_state_bytes);
    }

    let kernel: Vec<_> = records.iter().filter(|r| r.scope == BenchScope::Kernel).cloned().collect();
    if let Some(fit) = fit_scaling(&kernel, 1e-3) {
        println!("kernel: {:.2} doublings per added qubit over {} points", fit.log2_time_per_qubit, fit.points);
    }

    if let Some(path) = csv_path {
        write_csv(std::fs::File::create(&path)?, &records)?;
        println!("wrote {path}");
    }
    Ok(())
}
