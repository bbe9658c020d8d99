//! Gate-level use of the statevector: build the Fourier state of phase 5/8,
//! undo it with the inverse QFT, and apply a few individual gates.
//!
//! Qubit q is bit q of the amplitude index on input. Outcomes read qubit 0
//! as the most significant bit, which is why the inverse QFT needs no swap gates.

use std::f64::consts::PI;

use qpe_core::{inverse_qft, marginal_distribution, Complex64, RegisterLayout, StateVector};

fn main() -> qpe_core::Result<()> {
    let n = 3;
    let phi = 5.0 / 8.0;
    let layout = RegisterLayout::bare(n)?;
    let amp = 1.0 / (layout.dim() as f64).sqrt();

    // qubit q carries the phase 2^q * phi, as after a controlled U^(2^q)
    let amps = (0..layout.dim())
        .map(|k| Complex64::from_polar(amp, 2.0 * PI * phi * k as f64))
        .collect();
    let mut state = StateVector::from_amplitudes(layout, amps)?;
    inverse_qft(&mut state, &[0, 1, 2])?;

    let dist = marginal_distribution(&state);
    for (m, p) in dist.probs.iter().enumerate() {
        println!("m={m} phase={:.3} p={p:.6}", dist.grid_phase(m));
    }

    // start in |010>, H on qubit 0, a controlled phase of pi between qubits
    // 0 and 1 flips the sign of |011>, then swap qubits 0 and 2
    let mut bell = StateVector::new_basis_state(layout, 0b010)?;
    bell.apply_hadamard(0)?;
    bell.apply_controlled_phase(0, 1, PI)?;
    bell.apply_swap(0, 2)?;
    for (i, a) in bell.amplitudes().iter().enumerate().filter(|(_, a)| a.norm() > 0.0) {
        println!("|{i:03b}> {a:.4}");
    }
    Ok(())
}
