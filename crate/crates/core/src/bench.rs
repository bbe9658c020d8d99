//! Runtime, memory and accuracy sweeps with CSV output.
//!
//! Timing follows one warm-up run and then the median of `reps` timed runs.
//! Two scopes exist:
//!
//! * `qpe`: the whole circuit, one record per `(n_mat, n_meas)`;
//! * `kernel`: a single controlled-U application on a statevector of the
//!   same size, the per-launch cost that doubles with each added qubit.
//!
//! Peak memory is modeled rather than sampled: the statevector, plus the
//! running power of `U` and its square in squaring mode.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::circuit::{prepare_input, run_qpe, PowerMode, QpeConfig};
use crate::error::{invalid, QpeError, Result};
use crate::extraction::{spectrum_errors, ExtractionMethod};
use crate::layout::RegisterLayout;
use crate::problems::{gen_analytic, SpectralProblem};

/// Default cap on modeled memory per configuration: 8 GiB.
pub const DEFAULT_MEM_CAP_BYTES: u64 = 8 << 30;

/// Fixed allowance added to the modeled peak before comparing it with the
/// cap, covering the operator copies, tile buffers and process overhead.
pub const OVERHEAD_ALLOWANCE_BYTES: u64 = 64 << 20;

const AMPLITUDE_BYTES: u64 = 16;

/// Bytes needed to hold `2^n_total` double-precision complex amplitudes.
pub fn memory_model(n_total: usize) -> u64 {
    1u64.checked_shl(n_total as u32)
        .filter(|x| x.leading_zeros() >= 4)
        .map(|x| x * AMPLITUDE_BYTES)
        .unwrap_or(u64::MAX)
}

/// Modeled peak bytes of one circuit run.
pub fn modeled_peak_bytes(n_meas: usize, n_mat: usize, mode: PowerMode) -> u64 {
    let state = memory_model(n_meas + n_mat);
    match mode {
        PowerMode::RepeatedApplication => state,
        PowerMode::RepeatedSquaring => {
            let op = memory_model(2 * n_mat);
            state.saturating_add(op.saturating_mul(2))
        }
    }
}

/// Fails with [`QpeError::MemoryCap`] if the configuration plus the fixed
/// allowance would exceed `cap`.
pub fn check_memory(n_meas: usize, n_mat: usize, mode: PowerMode, cap: u64) -> Result<u64> {
    let peak = modeled_peak_bytes(n_meas, n_mat, mode);
    let needed = peak.saturating_add(OVERHEAD_ALLOWANCE_BYTES);
    if needed > cap {
        return Err(QpeError::MemoryCap {
            needed: needed as u128,
            cap: cap as u128,
        });
    }
    Ok(peak)
}

/// Peak resident set size of this process, from `/proc/self/status`.
/// Process-lifetime high-water mark; informational only.
pub fn os_peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BenchScope {
    #[serde(rename = "qpe")]
    Qpe,
    #[serde(rename = "kernel")]
    Kernel,
}

impl FromStr for BenchScope {
    type Err = QpeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qpe" => Ok(BenchScope::Qpe),
            "kernel" => Ok(BenchScope::Kernel),
            other => Err(invalid(format!("unknown bench scope '{other}'"))),
        }
    }
}

/// One benchmark configuration. Serialized field order is the CSV column
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRecord {
    pub n_mat: usize,
    pub n_meas: usize,
    pub n_total: usize,
    pub power_mode: PowerMode,
    pub wall_seconds: f64,
    pub alloc_seconds: f64,
    pub host_to_device_seconds: f64,
    pub unitary_apply_seconds: f64,
    pub iqft_seconds: f64,
    pub peak_state_bytes: u64,
    pub repetitions: usize,
    pub controlled_applications: u64,
    pub unitary_apply_per_op_seconds: f64,
    pub os_peak_rss_bytes: Option<u64>,
    pub scope: BenchScope,
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub n_mat: Vec<usize>,
    pub n_meas: Vec<usize>,
    pub mode: PowerMode,
    pub reps: usize,
    pub mem_cap_bytes: u64,
    pub scope: BenchScope,
}

impl BenchPlan {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(invalid("reps must be at least 1"));
        }
        if self.n_mat.is_empty() || self.n_meas.is_empty() {
            return Err(invalid("n_mat and n_meas lists must be non-empty"));
        }
        if self.n_mat.contains(&0) || self.n_meas.contains(&0) {
            return Err(invalid("register sizes must be at least 1"));
        }
        for &n_mat in &self.n_mat {
            for &n_meas in &self.n_meas {
                let mode = match self.scope {
                    BenchScope::Qpe => self.mode,
                    BenchScope::Kernel => PowerMode::RepeatedApplication,
                };
                check_memory(n_meas, n_mat, mode, self.mem_cap_bytes)?;
            }
        }
        Ok(())
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Times the full circuit on eigenvector 1 of the analytic problem.
pub fn bench_qpe(n_mat: usize, n_meas: usize, mode: PowerMode, reps: usize) -> Result<BenchmarkRecord> {
    if reps == 0 {
        return Err(invalid("reps must be at least 1"));
    }
    let problem = gen_analytic(n_mat)?;
    let config = QpeConfig::new(n_meas, mode)?;
    run_qpe(&problem, 1, &config)?;

    let mut runs = Vec::with_capacity(reps);
    let mut launches = 0;
    for _ in 0..reps {
        let run = run_qpe(&problem, 1, &config)?;
        launches = run.controlled_applications;
        runs.push(run.timers);
    }
    let col = |f: fn(&crate::PhaseTimers) -> f64| median(&runs.iter().map(f).collect::<Vec<_>>());
    let unitary = col(|t| t.unitary_apply_seconds);
    Ok(BenchmarkRecord {
        n_mat,
        n_meas,
        n_total: n_mat + n_meas,
        power_mode: mode,
        wall_seconds: col(|t| t.total_seconds),
        alloc_seconds: col(|t| t.alloc_seconds),
        host_to_device_seconds: col(|t| t.host_to_device_seconds),
        unitary_apply_seconds: unitary,
        iqft_seconds: col(|t| t.iqft_seconds),
        peak_state_bytes: modeled_peak_bytes(n_meas, n_mat, mode),
        repetitions: reps,
        controlled_applications: launches,
        unitary_apply_per_op_seconds: unitary / launches as f64,
        os_peak_rss_bytes: os_peak_rss_bytes(),
        scope: BenchScope::Qpe,
    })
}

/// Times one controlled-U launch on an `(n_meas, n_mat)` statevector after
/// the Hadamard layer. The controlling wire is the top one.
pub fn bench_kernel(n_mat: usize, n_meas: usize, reps: usize) -> Result<BenchmarkRecord> {
    if reps == 0 {
        return Err(invalid("reps must be at least 1"));
    }
    let problem = gen_analytic(n_mat)?;
    let layout = RegisterLayout::new(n_meas, n_mat)?;

    let t0 = Instant::now();
    let mut state = prepare_input(layout, &problem.eigenvectors[1])?;
    let setup = t0.elapsed().as_secs_f64();
    for q in 0..n_meas {
        state.apply_hadamard(q)?;
    }

    state.apply_controlled_dense(0, &problem.matrix)?;
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        state.apply_controlled_dense(0, &problem.matrix)?;
        samples.push(t.elapsed().as_secs_f64());
    }
    let per_op = median(&samples);
    Ok(BenchmarkRecord {
        n_mat,
        n_meas,
        n_total: n_mat + n_meas,
        power_mode: PowerMode::RepeatedApplication,
        wall_seconds: per_op,
        alloc_seconds: setup,
        host_to_device_seconds: 0.0,
        unitary_apply_seconds: per_op,
        iqft_seconds: 0.0,
        peak_state_bytes: memory_model(n_mat + n_meas),
        repetitions: reps,
        controlled_applications: 1,
        unitary_apply_per_op_seconds: per_op,
        os_peak_rss_bytes: os_peak_rss_bytes(),
        scope: BenchScope::Kernel,
    })
}

/// Runs every `(n_mat, n_meas)` pair of the plan, one at a time. The whole
/// plan is checked against the memory cap before anything runs.
pub fn run_bench(plan: &BenchPlan, mut on_record: impl FnMut(&BenchmarkRecord)) -> Result<Vec<BenchmarkRecord>> {
    plan.validate()?;
    let mut out = Vec::new();
    for &n_mat in &plan.n_mat {
        for &n_meas in &plan.n_meas {
            let rec = match plan.scope {
                BenchScope::Qpe => bench_qpe(n_mat, n_meas, plan.mode, plan.reps)?,
                BenchScope::Kernel => bench_kernel(n_mat, n_meas, plan.reps)?,
            };
            on_record(&rec);
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Two readings of runtime growth against `n_total`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    /// Slope of `ln t` vs `ln n_total` (power-law exponent).
    pub power_law_exponent: f64,
    /// Slope of `log2 t` vs `n_total` (doublings per added qubit).
    pub log2_time_per_qubit: f64,
    pub points: usize,
}

/// Fits records with `wall_seconds >= min_seconds`; `None` with fewer than
/// two distinct `n_total`.
pub fn fit_scaling(records: &[BenchmarkRecord], min_seconds: f64) -> Option<ScalingFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.wall_seconds >= min_seconds && r.wall_seconds > 0.0)
        .map(|r| (r.n_total as f64, r.wall_seconds))
        .collect();
    let distinct = pts
        .iter()
        .map(|p| p.0 as usize)
        .collect::<std::collections::BTreeSet<_>>();
    if distinct.len() < 2 {
        return None;
    }
    let n: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ln_n: Vec<f64> = n.iter().map(|x| x.ln()).collect();
    let ln_t: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let log2_t: Vec<f64> = pts.iter().map(|p| p.1.log2()).collect();
    Some(ScalingFit {
        power_law_exponent: least_squares_slope(&ln_n, &ln_t),
        log2_time_per_qubit: least_squares_slope(&n, &log2_t),
        points: pts.len(),
    })
}

/// Mean (and worst) phase error of one method at one `n_meas`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRecord {
    pub provenance: String,
    pub n_mat: usize,
    pub seed: Option<u64>,
    pub n_meas: usize,
    pub power_mode: PowerMode,
    pub method: ExtractionMethod,
    pub mean_error: f64,
    pub max_error: f64,
}

/// Mean phase error over every eigenpair of `problem` for each `n_meas`
/// and method. Each circuit run is shared by all methods.
pub fn accuracy_sweep(
    problem: &SpectralProblem,
    n_meas_values: &[usize],
    methods: &[ExtractionMethod],
    mode: PowerMode,
) -> Result<Vec<AccuracyRecord>> {
    if n_meas_values.is_empty() {
        return Err(invalid("n_meas range is empty"));
    }
    if methods.is_empty() {
        return Err(invalid("no extraction methods given"));
    }
    let mut out = Vec::new();
    for &n_meas in n_meas_values {
        let config = QpeConfig::new(n_meas, mode)?;
        let errors = spectrum_errors(problem, &config, methods)?;
        for (method, errs) in methods.iter().zip(errors) {
            out.push(AccuracyRecord {
                provenance: problem.provenance.to_string(),
                n_mat: problem.n_mat,
                seed: problem.seed,
                n_meas,
                power_mode: mode,
                method: *method,
                mean_error: errs.iter().sum::<f64>() / errs.len() as f64,
                max_error: errs.iter().cloned().fold(0.0, f64::max),
            });
        }
    }
    Ok(out)
}
