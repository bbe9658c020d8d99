//! The phase-estimation circuit: Hadamard layer on the measurement register,
//! the ladder of controlled `U^(2^j)`, then the inverse QFT.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::layout::RegisterLayout;
use crate::operator::DenseOperator;
use crate::problems::SpectralProblem;
use crate::state::StateVector;

/// Input vectors within this distance of unit norm are renormalized;
/// anything further away is rejected.
pub const INPUT_NORM_TOL: f64 = 1e-6;

/// How `controlled-U^(2^j)` is realized on wire `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PowerMode {
    /// Apply controlled-U `2^j` times. Total cost grows with `2^n_meas`.
    #[serde(rename = "repeat")]
    RepeatedApplication,
    /// Precompute `U^(2^j)` by `j` squarings and apply it once.
    #[serde(rename = "square")]
    RepeatedSquaring,
}

impl PowerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PowerMode::RepeatedApplication => "repeat",
            PowerMode::RepeatedSquaring => "square",
        }
    }

    /// Number of controlled-dense kernel launches for `n_meas` wires.
    pub fn controlled_applications(&self, n_meas: usize) -> u64 {
        match self {
            PowerMode::RepeatedApplication => (1u64 << n_meas) - 1,
            PowerMode::RepeatedSquaring => n_meas as u64,
        }
    }
}

impl fmt::Display for PowerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PowerMode {
    type Err = crate::QpeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "repeat" | "repeated-application" => Ok(PowerMode::RepeatedApplication),
            "square" | "repeated-squaring" => Ok(PowerMode::RepeatedSquaring),
            other => Err(invalid(format!("unknown power mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QpeConfig {
    pub n_meas: usize,
    pub power_mode: PowerMode,
    pub timers_enabled: bool,
}

impl QpeConfig {
    pub fn new(n_meas: usize, power_mode: PowerMode) -> Result<Self> {
        if n_meas == 0 {
            return Err(invalid("n_meas must be at least 1"));
        }
        Ok(Self {
            n_meas,
            power_mode,
            timers_enabled: true,
        })
    }

    pub fn with_timers(mut self, enabled: bool) -> Self {
        self.timers_enabled = enabled;
        self
    }
}

/// Wall-clock time spent in each phase of one run, in seconds.
///
/// `host_to_device_seconds` is the portable stand-in for an accelerator
/// upload: the time to write the input vector into the statevector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseTimers {
    pub alloc_seconds: f64,
    pub host_to_device_seconds: f64,
    pub unitary_apply_seconds: f64,
    pub iqft_seconds: f64,
    pub total_seconds: f64,
}

impl PhaseTimers {
    pub const CSV_HEADER: &'static str =
        "alloc_seconds,host_to_device_seconds,unitary_apply_seconds,iqft_seconds,total_seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.alloc_seconds,
            self.host_to_device_seconds,
            self.unitary_apply_seconds,
            self.iqft_seconds,
            self.total_seconds
        )
    }
}

/// Result of [`run_qpe`].
#[derive(Debug, Clone)]
pub struct QpeRun {
    /// Final statevector before measurement.
    pub state: StateVector,
    pub timers: PhaseTimers,
    /// Controlled-dense kernel launches performed.
    pub controlled_applications: u64,
}

struct Stopwatch {
    enabled: bool,
}

impl Stopwatch {
    fn time<T>(&self, slot: &mut f64, f: impl FnOnce() -> T) -> T {
        if !self.enabled {
            return f();
        }
        let start = Instant::now();
        let out = f();
        *slot += secs(start.elapsed());
        out
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Inverse QFT on `qubits`.
///
/// `qubits[0]` carries the least significant bit of the Fourier index `k`
/// on input and the most significant bit of the outcome `m` on output, so
/// `Σ_k exp(2πi·m·k/2^n)|k⟩/√2^n` maps to the basis state that
/// [`RegisterLayout::decode`] reads as `m`. The bit reversal is absorbed by
/// that reading and no swap gates are emitted.
pub fn inverse_qft(state: &mut StateVector, qubits: &[usize]) -> Result<()> {
    let n_total = state.layout().n_total();
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_total {
            return Err(invalid(format!("qubit {q} out of range for {n_total} qubits")));
        }
        if qubits[..i].contains(&q) {
            return Err(invalid(format!("qubit {q} listed twice")));
        }
    }
    let n = qubits.len();
    for a in (0..n).rev() {
        for b in a + 1..n {
            let angle = -2.0 * PI / (1u64 << (b - a + 1)) as f64;
            state.apply_controlled_phase(qubits[a], qubits[b], angle)?;
        }
        state.apply_hadamard(qubits[a])?;
    }
    Ok(())
}

fn normalized_input(layout: RegisterLayout, eigenvector: &[Complex64]) -> Result<Vec<Complex64>> {
    if eigenvector.len() != layout.target_dim() {
        return Err(invalid(format!(
            "eigenvector length {} does not match target register dimension {}",
            eigenvector.len(),
            layout.target_dim()
        )));
    }
    let norm = eigenvector.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(invalid("eigenvector has zero or non-finite norm"));
    }
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(invalid(format!(
            "eigenvector norm {norm} deviates from 1 by more than {INPUT_NORM_TOL}"
        )));
    }
    Ok(eigenvector.iter().map(|a| a / norm).collect())
}

fn load_input(state: &mut StateVector, psi: &[Complex64]) {
    let layout = state.layout();
    let amps = state.amplitudes_mut();
    for (t, a) in psi.iter().enumerate() {
        amps[layout.encode(0, t)] = *a;
    }
}

/// `|0…0⟩_meas ⊗ |ψ⟩`. `ψ` is renormalized if its norm is within
/// [`INPUT_NORM_TOL`] of 1.
pub fn prepare_input(layout: RegisterLayout, eigenvector: &[Complex64]) -> Result<StateVector> {
    let psi = normalized_input(layout, eigenvector)?;
    let mut state = StateVector::from_amplitudes(layout, vec![Complex64::new(0.0, 0.0); layout.dim()])?;
    load_input(&mut state, &psi);
    Ok(state)
}

/// Runs phase estimation of `matrix` on `eigenvector`.
pub fn run_qpe_on(matrix: &DenseOperator, eigenvector: &[Complex64], config: &QpeConfig) -> Result<QpeRun> {
    if config.n_meas == 0 {
        return Err(invalid("n_meas must be at least 1"));
    }
    let n_mat = matrix.n_qubits();
    let layout = RegisterLayout::new(config.n_meas, n_mat)?;
    let psi = normalized_input(layout, eigenvector)?;

    let clock = Stopwatch {
        enabled: config.timers_enabled,
    };
    let mut timers = PhaseTimers::default();
    let start = Instant::now();

    let mut state = clock.time(&mut timers.alloc_seconds, || {
        StateVector::from_amplitudes(layout, vec![Complex64::new(0.0, 0.0); layout.dim()])
    })?;
    clock.time(&mut timers.host_to_device_seconds, || load_input(&mut state, &psi));

    for q in 0..config.n_meas {
        state.apply_hadamard(q)?;
    }

    let mut launches = 0u64;
    clock.time(&mut timers.unitary_apply_seconds, || -> Result<()> {
        match config.power_mode {
            PowerMode::RepeatedApplication => {
                for wire in 0..config.n_meas {
                    for _ in 0..(1u64 << wire) {
                        state.apply_controlled_dense(wire, matrix)?;
                        launches += 1;
                    }
                }
            }
            PowerMode::RepeatedSquaring => {
                let mut power = matrix.clone();
                for wire in 0..config.n_meas {
                    state.apply_controlled_dense(wire, &power)?;
                    launches += 1;
                    if wire + 1 < config.n_meas {
                        power = power.matrix_multiply(&power)?;
                    }
                }
            }
        }
        Ok(())
    })?;

    let qubits = layout.measurement_qubits();
    clock.time(&mut timers.iqft_seconds, || inverse_qft(&mut state, &qubits))?;

    if config.timers_enabled {
        timers.total_seconds = secs(start.elapsed());
    }
    Ok(QpeRun {
        state,
        timers,
        controlled_applications: launches,
    })
}

/// Runs phase estimation on eigenvector `eigenvector_index` of `problem`.
pub fn run_qpe(problem: &SpectralProblem, eigenvector_index: usize, config: &QpeConfig) -> Result<QpeRun> {
    let v = problem.eigenvectors.get(eigenvector_index).ok_or_else(|| {
        invalid(format!(
            "eigenvector index {eigenvector_index} out of range ({} available)",
            problem.eigenvectors.len()
        ))
    })?;
    run_qpe_on(&problem.matrix, v, config)
}
