//! Eigenphase estimates from the final statevector.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{run_qpe, QpeConfig};
use crate::error::{invalid, QpeError, Result};
use crate::problems::SpectralProblem;
use crate::state::StateVector;

/// Below this resultant length the circular mean has no defined direction.
pub const CIRCULAR_RESULTANT_MIN: f64 = 1e-12;

/// Probability of each measurement outcome `m`, marginalized over the target
/// register.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    pub n_meas: usize,
    pub probs: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn new(n_meas: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n_meas {
            return Err(QpeError::Dimension(format!(
                "{} probabilities for {n_meas} measurement qubits",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(invalid("probabilities must be non-negative"));
        }
        Ok(Self { n_meas, probs })
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Phase value of outcome `m`.
    pub fn grid_phase(&self, m: usize) -> f64 {
        m as f64 / self.probs.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExtractionMethod {
    #[serde(rename = "max")]
    MaxNorm,
    #[serde(rename = "weighted")]
    WeightedAverage,
    #[serde(rename = "circular")]
    WeightedCircular,
}

impl ExtractionMethod {
    pub const ALL: [ExtractionMethod; 3] = [
        ExtractionMethod::MaxNorm,
        ExtractionMethod::WeightedAverage,
        ExtractionMethod::WeightedCircular,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExtractionMethod::MaxNorm => "max",
            ExtractionMethod::WeightedAverage => "weighted",
            ExtractionMethod::WeightedCircular => "circular",
        }
    }
}

impl fmt::Display for ExtractionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for ExtractionMethod {
    type Err = QpeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(ExtractionMethod::MaxNorm),
            "weighted" => Ok(ExtractionMethod::WeightedAverage),
            "circular" => Ok(ExtractionMethod::WeightedCircular),
            other => Err(invalid(format!("unknown extraction method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    pub method: ExtractionMethod,
    /// Estimated eigenphase in `[0, 1)`.
    pub value: f64,
    /// Winning outcome for [`ExtractionMethod::MaxNorm`].
    pub peak_index: Option<usize>,
}

pub fn marginal_distribution(state: &StateVector) -> MeasurementDistribution {
    let layout = state.layout();
    let mut probs = vec![0.0; layout.meas_dim()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let (m, _) = layout.decode(i);
        probs[m] += a.norm_sqr();
    }
    MeasurementDistribution {
        n_meas: layout.n_meas(),
        probs,
    }
}

fn require_mass(dist: &MeasurementDistribution) -> Result<f64> {
    let total = dist.total();
    if !(total > 0.0) {
        return Err(invalid("distribution has no probability mass"));
    }
    Ok(total)
}

/// Most probable outcome; the smallest `m` wins ties.
pub fn extract_max_norm(dist: &MeasurementDistribution) -> Result<PhaseEstimate> {
    require_mass(dist)?;
    let mut best = 0;
    for (m, &p) in dist.probs.iter().enumerate() {
        if p > dist.probs[best] {
            best = m;
        }
    }
    Ok(PhaseEstimate {
        method: ExtractionMethod::MaxNorm,
        value: dist.grid_phase(best),
        peak_index: Some(best),
    })
}

/// Probability-weighted mean of the outcome phases. The linear mean
/// (`circular = false`) is biased near the 0/1 wrap point; the circular mean
/// takes the argument of `Σ p(m)·exp(2πi·m/2^n)`.
pub fn extract_weighted(dist: &MeasurementDistribution, circular: bool) -> Result<PhaseEstimate> {
    let total = require_mass(dist)?;
    let value = if circular {
        let resultant: Complex64 = dist
            .probs
            .iter()
            .enumerate()
            .map(|(m, &p)| Complex64::from_polar(p, 2.0 * PI * dist.grid_phase(m)))
            .sum();
        if resultant.norm() < CIRCULAR_RESULTANT_MIN {
            return Err(QpeError::DegenerateDistribution(format!(
                "circular resultant {} below {CIRCULAR_RESULTANT_MIN}",
                resultant.norm()
            )));
        }
        crate::problems::eigenvalue_to_phase(resultant)
    } else {
        dist.probs
            .iter()
            .enumerate()
            .map(|(m, &p)| dist.grid_phase(m) * p)
            .sum::<f64>()
            / total
    };
    Ok(PhaseEstimate {
        method: if circular {
            ExtractionMethod::WeightedCircular
        } else {
            ExtractionMethod::WeightedAverage
        },
        value,
        peak_index: None,
    })
}

pub fn extract(dist: &MeasurementDistribution, method: ExtractionMethod) -> Result<PhaseEstimate> {
    match method {
        ExtractionMethod::MaxNorm => extract_max_norm(dist),
        ExtractionMethod::WeightedAverage => extract_weighted(dist, false),
        ExtractionMethod::WeightedCircular => extract_weighted(dist, true),
    }
}

/// Distance on the unit circle of phases: `min(|Δ|, 1 − |Δ|)`.
pub fn phase_error(estimate: f64, reference: f64) -> f64 {
    let d = (estimate - reference).abs();
    d.min(1.0 - d)
}

/// Plain `|estimate − reference|`, without wrap-around.
pub fn absolute_phase_error(estimate: f64, reference: f64) -> f64 {
    (estimate - reference).abs()
}

/// Runs the circuit once per eigenvector and returns `errors[k][j]`: the
/// phase error of `methods[k]` on eigenvector `j`. Eigenvectors run in
/// parallel on independent states.
pub fn spectrum_errors(
    problem: &SpectralProblem,
    config: &QpeConfig,
    methods: &[ExtractionMethod],
) -> Result<Vec<Vec<f64>>> {
    let phases = problem
        .reference_phases
        .as_ref()
        .ok_or_else(|| invalid("problem has no reference phases"))?;
    let config = config.with_timers(false);
    let per_vector: Vec<Vec<f64>> = (0..problem.eigenvectors.len())
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let run = run_qpe(problem, j, &config)?;
            let dist = marginal_distribution(&run.state);
            methods
                .iter()
                .map(|&m| Ok(phase_error(extract(&dist, m)?.value, phases[j])))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..methods.len())
        .map(|k| per_vector.iter().map(|errs| errs[k]).collect())
        .collect())
}

/// Mean phase error of `method` over every eigenpair of `problem`.
pub fn mean_spectrum_error(problem: &SpectralProblem, config: &QpeConfig, method: ExtractionMethod) -> Result<f64> {
    let errs = spectrum_errors(problem, config, &[method])?.remove(0);
    Ok(errs.iter().sum::<f64>() / errs.len() as f64)
}
