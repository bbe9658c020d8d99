//! Dense statevector and in-place gate application.

use num_complex::Complex64;

use crate::backend::{Backend, PORTABLE};
use crate::error::{invalid, QpeError, Result};
use crate::layout::RegisterLayout;
use crate::operator::DenseOperator;

/// `2^n_total` complex amplitudes in double precision.
///
/// Gates mutate the amplitudes in place. The state is exclusively owned
/// while a gate runs; independent states may be evolved on separate threads.
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
    backend: &'static dyn Backend,
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.amplitudes == other.amplitudes
    }
}

impl StateVector {
    /// All amplitude on basis state `index`.
    pub fn new_basis_state(layout: RegisterLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(invalid(format!(
                "basis index {index} out of range for {} qubits",
                layout.n_total()
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self::from_parts(layout, amplitudes))
    }

    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(QpeError::Dimension(format!(
                "{} amplitudes supplied, layout with {} qubits needs {}",
                amplitudes.len(),
                layout.n_total(),
                layout.dim()
            )));
        }
        Ok(Self::from_parts(layout, amplitudes))
    }

    fn from_parts(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Self {
        Self {
            layout,
            amplitudes,
            backend: &PORTABLE,
        }
    }

    /// Routes subsequent gates through `backend`.
    pub fn with_backend(mut self, backend: &'static dyn Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn backend(&self) -> &'static dyn Backend {
        self.backend
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Bytes held by the amplitude buffer.
    pub fn size_bytes(&self) -> usize {
        self.amplitudes.len() * std::mem::size_of::<Complex64>()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.layout.n_total() {
            return Err(invalid(format!(
                "qubit {qubit} out of range for {} qubits",
                self.layout.n_total()
            )));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(invalid(format!("two-qubit gate needs distinct qubits, got {a} twice")));
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        self.backend.hadamard(&mut self.amplitudes, qubit);
        Ok(())
    }

    pub fn apply_controlled_phase(&mut self, control: usize, target: usize, angle: f64) -> Result<()> {
        self.check_pair(control, target)?;
        self.backend
            .controlled_phase(&mut self.amplitudes, control, target, angle);
        Ok(())
    }

    pub fn apply_swap(&mut self, q1: usize, q2: usize) -> Result<()> {
        self.check_pair(q1, q2)?;
        self.backend.swap(&mut self.amplitudes, q1, q2);
        Ok(())
    }

    /// Applies `op` to the target register wherever measurement qubit
    /// `control` is 1. The operator need not be unitary.
    pub fn apply_controlled_dense(&mut self, control: usize, op: &DenseOperator) -> Result<()> {
        if !self.layout.is_measurement_qubit(control) {
            return Err(invalid(format!(
                "control qubit {control} is not in the measurement register"
            )));
        }
        if self.layout.n_mat() == 0 || op.dim() != self.layout.target_dim() {
            return Err(invalid(format!(
                "operator dimension {} does not match target register dimension {}",
                op.dim(),
                self.layout.target_dim()
            )));
        }
        self.backend
            .controlled_dense(&mut self.amplitudes, self.layout.n_meas(), control, op);
        Ok(())
    }
}
