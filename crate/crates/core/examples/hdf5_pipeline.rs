//! Write a problem to HDF5, read it back, run phase estimation on it and
//! store the final statevector.

use qpe_core::io::{read_problem, read_statevector, write_problem, write_statevector};
use qpe_core::{extract, gen_random_unitary, marginal_distribution, phase_error, run_qpe, ExtractionMethod, PowerMode, QpeConfig};

fn main() -> qpe_core::Result<()> {
    let dir = std::env::temp_dir().join(format!("qpe-hdf5-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let problem = gen_random_unitary(2, 99)?;
    let problem_path = dir.join("problem.h5");
    write_problem(&problem_path, &problem, 2)?;

    let loaded = read_problem(&problem_path)?;
    let reference = loaded.reference_phases.as_ref().map(|p| p[0]);
    println!("loaded {}x{} matrix, reference phase {reference:?}", loaded.dim(), loaded.dim());

    let run = run_qpe(&loaded, 0, &QpeConfig::new(10, PowerMode::RepeatedSquaring)?)?;
    let state_path = dir.join("state.h5");
    write_statevector(&state_path, &run.state)?;

    let state = read_statevector(&state_path)?;
    assert_eq!(state, run.state);
    let dist = marginal_distribution(&state);
    for method in ExtractionMethod::ALL {
        let est = extract(&dist, method)?;
        let err = reference.map(|r| phase_error(est.value, r));
        println!("{method:>9}: {:.8} error {err:?}", est.value);
    }

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
