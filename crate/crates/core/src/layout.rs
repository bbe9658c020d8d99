//! Qubit bookkeeping for the measurement and target registers.
//!
//! Qubit `q` is bit `q` of an amplitude index. The measurement register
//! occupies qubits `0..n_meas` (the low bits) and the target register
//! occupies `n_meas..n_total`. Qubit 0 is the top wire of the circuit and
//! controls `U^(2^0)`.
//!
//! A measurement outcome `m` is read from the measurement bits with qubit 0
//! as the *most* significant bit, so a phase `φ` lands on `m = φ·2^n_meas`.

use crate::error::{invalid, Result};

/// Human-readable statement of the outcome decoding rule, stored alongside
/// written statevectors.
pub const BIT_CONVENTION: &str = "index bit q = qubit q; qubits 0..n_meas are the measurement \
register, qubits n_meas..n_meas+n_mat the target register; outcome m reads measurement qubit 0 \
as the most significant bit of m (m = bitreverse(index mod 2^n_meas, n_meas)); target value \
t = index >> n_meas";

/// Largest supported total qubit count. Indices are `usize` and a state of
/// this size would already need 2^40 amplitudes.
pub const MAX_QUBITS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    n_meas: usize,
    n_mat: usize,
}

impl RegisterLayout {
    /// Layout for a phase-estimation circuit. Both registers need at least
    /// one qubit.
    pub fn new(n_meas: usize, n_mat: usize) -> Result<Self> {
        if n_meas == 0 {
            return Err(invalid("n_meas must be at least 1"));
        }
        if n_mat == 0 {
            return Err(invalid("n_mat must be at least 1"));
        }
        Self::checked(n_meas, n_mat)
    }

    /// A plain register of `n_qubits` with no target register. All qubits
    /// count as measurement qubits; useful for gate-level work such as a
    /// standalone inverse QFT.
    pub fn bare(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(invalid("register needs at least one qubit"));
        }
        Self::checked(n_qubits, 0)
    }

    fn checked(n_meas: usize, n_mat: usize) -> Result<Self> {
        if n_meas + n_mat > MAX_QUBITS {
            return Err(invalid(format!(
                "{} qubits exceeds the supported maximum of {MAX_QUBITS}",
                n_meas + n_mat
            )));
        }
        Ok(Self { n_meas, n_mat })
    }

    pub fn n_meas(&self) -> usize {
        self.n_meas
    }

    pub fn n_mat(&self) -> usize {
        self.n_mat
    }

    pub fn n_total(&self) -> usize {
        self.n_meas + self.n_mat
    }

    /// Number of amplitudes, `2^n_total`.
    pub fn dim(&self) -> usize {
        1 << self.n_total()
    }

    /// Number of measurement outcomes, `2^n_meas`.
    pub fn meas_dim(&self) -> usize {
        1 << self.n_meas
    }

    /// Dimension of the target register, `2^n_mat`.
    pub fn target_dim(&self) -> usize {
        1 << self.n_mat
    }

    pub fn is_measurement_qubit(&self, qubit: usize) -> bool {
        qubit < self.n_meas
    }

    /// Qubit indices of the measurement register, top wire first.
    pub fn measurement_qubits(&self) -> Vec<usize> {
        (0..self.n_meas).collect()
    }

    /// Decodes an amplitude index into `(m, t)`: the measurement outcome and
    /// the target-register basis value.
    pub fn decode(&self, index: usize) -> (usize, usize) {
        let raw = index & (self.meas_dim() - 1);
        (reverse_bits(raw, self.n_meas), index >> self.n_meas)
    }

    /// Inverse of [`decode`](Self::decode).
    pub fn encode(&self, outcome: usize, target: usize) -> usize {
        reverse_bits(outcome, self.n_meas) | (target << self.n_meas)
    }
}

/// Reverses the low `width` bits of `value`.
pub fn reverse_bits(value: usize, width: usize) -> usize {
    if width == 0 {
        return 0;
    }
    value.reverse_bits() >> (usize::BITS as usize - width)
}
