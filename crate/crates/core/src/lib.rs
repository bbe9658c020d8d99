//! Full-statevector quantum phase estimation.
//!
//! The crate emulates the phase-estimation circuit on a dense double
//! precision statevector, generates analytic and Haar-random test problems,
//! extracts eigenphases from the final state, exchanges problems and states
//! through HDF5, and benchmarks runtime and memory scaling.
//!
//! ```
//! use qpe_core::{gen_analytic, run_qpe, marginal_distribution, extract_max_norm, PowerMode, QpeConfig};
//!
//! let problem = gen_analytic(2)?;
//! let config = QpeConfig::new(4, PowerMode::RepeatedApplication)?;
//! let run = run_qpe(&problem, 3, &config)?;
//! let estimate = extract_max_norm(&marginal_distribution(&run.state))?;
//! assert_eq!(estimate.value, 0.75);
//! # Ok::<(), qpe_core::QpeError>(())
//! ```

pub mod backend;
pub mod bench;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod extraction;
pub mod io;
pub mod layout;
pub mod operator;
pub mod problems;
pub mod rng;
pub mod state;

pub use circuit::{inverse_qft, prepare_input, run_qpe, run_qpe_on, PhaseTimers, PowerMode, QpeConfig, QpeRun};
pub use error::{QpeError, Result};
pub use extraction::{
    extract, extract_max_norm, extract_weighted, marginal_distribution, mean_spectrum_error, phase_error,
    ExtractionMethod, MeasurementDistribution, PhaseEstimate,
};
pub use layout::RegisterLayout;
pub use operator::{DenseOperator, UnitarityReport};
pub use problems::{gen_analytic, gen_random_unitary, reference_spectrum, Provenance, ReferenceSpectrum, SpectralProblem};
pub use state::StateVector;

pub use num_complex::Complex64;
