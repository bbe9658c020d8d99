//! Dense complex operators on the target register.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, QpeError, Result};

/// Default tolerance for [`DenseOperator::check_unitary`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// A `dim × dim` complex matrix stored row-major. Entry `(r, c)` maps input
/// basis state `c` to output basis state `r`.
///
/// Unitarity is not required: the analytic test matrix is similar to a
/// diagonal unitary but not itself unitary. Use [`check_unitary`] when it
/// matters.
///
/// [`check_unitary`]: DenseOperator::check_unitary
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Outcome of [`DenseOperator::check_unitary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    pub is_unitary: bool,
    /// Largest entry of `|U†U − I|`.
    pub max_deviation: f64,
}

impl DenseOperator {
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QpeError::Dimension(format!(
                "operator dimension {dim} is not a power of two"
            )));
        }
        if entries.len() != dim * dim {
            return Err(QpeError::Dimension(format!(
                "expected {} entries for a {dim}x{dim} operator, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self::from_row_major(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the operator acts on.
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// Dense product `self · rhs`.
    pub fn matrix_multiply(&self, rhs: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != rhs.dim {
            return Err(invalid(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            let out_row = &mut out[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseOperator { dim: n, entries: out })
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.entries[c * n + r].conj());
            }
        }
        DenseOperator { dim: n, entries }
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(invalid(format!(
                "vector of length {} does not match operator dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok((0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect())
    }

    /// Computes the largest entry of `|U†U − I|` and compares it to `tol`.
    pub fn check_unitary(&self, tol: f64) -> UnitarityReport {
        let n = self.dim;
        let mut max_deviation = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // (U†U)_{ij} = Σ_k conj(U_{ki}) U_{kj}
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[k * n + i].conj() * self.entries[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                max_deviation = max_deviation.max(acc.norm());
            }
        }
        UnitarityReport {
            is_unitary: max_deviation <= tol,
            max_deviation,
        }
    }

    /// `self^(2^k)` by `k` successive squarings.
    pub fn power_of_two(&self, k: usize) -> DenseOperator {
        let mut acc = self.clone();
        for _ in 0..k {
            acc = acc.matrix_multiply(&acc).expect("square of a square matrix");
        }
        acc
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QpeError::Dimension("operator must be square".into()));
        }
        Self::from_fn(m.nrows(), |r, c| m[(r, c)])
    }
}
