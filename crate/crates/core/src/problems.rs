//! Test-problem families and reference spectra.
//!
//! * [`gen_analytic`]: `U = P Λ P⁻¹` with eigenphases `j/2^n` and
//!   non-orthogonal eigenvectors `x_j = (1,…,1,0,…,0)/√(j+1)` (`j+1` ones).
//! * [`gen_random_unitary`]: Haar-random unitary from a seeded complex
//!   Gaussian matrix, with a reference spectrum from a dense eigensolver.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{invalid, QpeError, Result};
use crate::operator::DenseOperator;
use crate::rng::GaussianSource;

/// Largest `n_mat` the dense generators accept.
pub const MAX_GENERATED_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Random,
    External,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Random => "random",
            Provenance::External => "external",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// A matrix together with eigenvectors to feed the circuit and, when known,
/// the eigenphase of each eigenvector (`reference_phases[j]` belongs to
/// `eigenvectors[j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProblem {
    pub n_mat: usize,
    pub matrix: DenseOperator,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub reference_phases: Option<Vec<f64>>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

impl SpectralProblem {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `max_j ‖U x_j − exp(2πi φ_j) x_j‖`, or `None` without reference phases.
    pub fn max_eigen_residual(&self) -> Option<f64> {
        let phases = self.reference_phases.as_ref()?;
        let mut worst = 0.0f64;
        for (v, &phi) in self.eigenvectors.iter().zip(phases) {
            worst = worst.max(eigen_residual(&self.matrix, v, phase_to_eigenvalue(phi)));
        }
        Some(worst)
    }
}

/// Reference eigenphases of an operator with matching unit eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpectrum {
    /// Ascending phases in `[0, 1)`.
    pub phases: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `pairing[i]` is the index in `phases` belonging to `eigenvectors[i]`.
    pub pairing: Vec<usize>,
}

impl ReferenceSpectrum {
    /// Matches externally supplied eigenvectors of `op` to reference phases
    /// by their eigenvalue (Rayleigh quotient), nearest on the circle first.
    pub fn pair_with(&self, op: &DenseOperator, vectors: &[Vec<Complex64>]) -> Result<Vec<usize>> {
        if vectors.len() > self.phases.len() {
            return Err(invalid("more vectors than reference phases"));
        }
        let mut used = vec![false; self.phases.len()];
        let mut out = Vec::with_capacity(vectors.len());
        for v in vectors {
            let uv = op.apply(v)?;
            let num: Complex64 = v.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
            let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            if den == 0.0 {
                return Err(invalid("cannot pair a zero vector"));
            }
            let phi = eigenvalue_to_phase(num / den);
            let best = (0..self.phases.len())
                .filter(|&i| !used[i])
                .min_by(|&a, &b| {
                    circular_distance(self.phases[a], phi)
                        .total_cmp(&circular_distance(self.phases[b], phi))
                })
                .ok_or_else(|| invalid("no unpaired reference phase left"))?;
            used[best] = true;
            out.push(best);
        }
        Ok(out)
    }
}

pub fn phase_to_eigenvalue(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * phi)
}

/// `arg(λ)/2π` wrapped into `[0, 1)`.
pub fn eigenvalue_to_phase(lambda: Complex64) -> f64 {
    let mut phi = lambda.arg() / (2.0 * PI);
    if phi < 0.0 {
        phi += 1.0;
    }
    if phi >= 1.0 {
        phi = 0.0;
    }
    phi
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// `‖U v − λ v‖₂`.
pub fn eigen_residual(op: &DenseOperator, v: &[Complex64], lambda: Complex64) -> f64 {
    match op.apply(v) {
        Ok(uv) => uv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt(),
        Err(_) => f64::INFINITY,
    }
}

fn check_size(n_mat: usize) -> Result<()> {
    if !(1..=MAX_GENERATED_QUBITS).contains(&n_mat) {
        return Err(invalid(format!(
            "n_mat must be in 1..={MAX_GENERATED_QUBITS}, got {n_mat}"
        )));
    }
    Ok(())
}

/// The analytically tractable problem on `n_mat` qubits.
///
/// Eigenphases are `φ_j = j/2^n_mat`. `P` has columns `x_j` and is
/// upper-triangular; its inverse is bidiagonal with `√(j+1)` on the
/// diagonal and `−√(j+1)` on the superdiagonal, so `U = P Λ P⁻¹` is formed
/// without a generic solve. `U` is not unitary.
pub fn gen_analytic(n_mat: usize) -> Result<SpectralProblem> {
    check_size(n_mat)?;
    let dim = 1usize << n_mat;
    let phases: Vec<f64> = (0..dim).map(|j| j as f64 / dim as f64).collect();
    let lambda: Vec<Complex64> = phases.iter().map(|&p| phase_to_eigenvalue(p)).collect();
    let scale: Vec<f64> = (0..dim).map(|j| ((j + 1) as f64).sqrt()).collect();

    // P[r][j] = [r ≤ j] / √(j+1)
    let p = |r: usize, j: usize| if r <= j { 1.0 / scale[j] } else { 0.0 };
    // P⁻¹[j][c] is nonzero only for c = j (√(j+1)) and c = j+1 (−√(j+1)).
    let matrix = DenseOperator::from_fn(dim, |r, c| {
        let mut acc = lambda[c] * (p(r, c) * scale[c]);
        if c > 0 {
            acc -= lambda[c - 1] * (p(r, c - 1) * scale[c - 1]);
        }
        acc
    })?;

    let eigenvectors = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| Complex64::new(p(k, j), 0.0))
                .collect::<Vec<_>>()
        })
        .collect();

    Ok(SpectralProblem {
        n_mat,
        matrix,
        eigenvectors,
        reference_phases: Some(phases),
        provenance: Provenance::Analytic,
        seed: None,
    })
}

/// Haar-random unitary on `n_mat` qubits, deterministic in `seed`.
///
/// Entries of a `2^n × 2^n` matrix `Z` are drawn row by row from
/// [`GaussianSource`]; `Z = QR` by Householder QR and the result is
/// `Q·diag(r_ii/|r_ii|)`. Eigenvectors and phases come from
/// [`reference_spectrum`], sorted by phase.
pub fn gen_random_unitary(n_mat: usize, seed: u64) -> Result<SpectralProblem> {
    check_size(n_mat)?;
    let dim = 1usize << n_mat;
    let matrix = haar_unitary(dim, seed)?;
    let spectrum = reference_spectrum(&matrix)?;
    Ok(SpectralProblem {
        n_mat,
        matrix,
        eigenvectors: spectrum.eigenvectors,
        reference_phases: Some(spectrum.phases),
        provenance: Provenance::Random,
        seed: Some(seed),
    })
}

/// Haar-random `dim × dim` unitary without the spectrum.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<DenseOperator> {
    let mut gauss = GaussianSource::new(seed);
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(gauss.next_complex());
    }
    let z = DenseOperator::from_row_major(dim, entries)?.to_nalgebra();
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm == 0.0 {
            return Err(QpeError::NumericFailure("singular Gaussian sample".into()));
        }
        let phase = d / norm;
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    DenseOperator::from_nalgebra(&q)
}

const SCHUR_EPS: f64 = f64::EPSILON;
const SCHUR_MAX_ITER: usize = 0; // 0 = no limit

/// Eigendecomposition by complex Schur form `A = Q T Q*`.
///
/// Eigenvectors of `T` are found by back substitution and mapped through
/// `Q`; for normal matrices `T` is diagonal and these are the Schur vectors.
/// Each eigenvector is unit-normalized with its largest component real and
/// positive. Results are sorted by phase ascending, ties broken by the
/// argument of the first differing eigenvector component.
pub fn reference_spectrum(op: &DenseOperator) -> Result<ReferenceSpectrum> {
    let n = op.dim();
    let schur = Schur::try_new(op.to_nalgebra(), SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| QpeError::NumericFailure("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = t.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1.0);

    let mut pairs: Vec<(f64, Complex64, Vec<Complex64>)> = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in i + 1..=k {
                acc += t[(i, l)] * y[l];
            }
            let mut den = t[(i, i)] - lambda;
            if den.norm() < f64::EPSILON * scale {
                den = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            y[i] = -acc / den;
        }
        let mut v: Vec<Complex64> = (0..n)
            .map(|r| (0..=k).map(|c| q[(r, c)] * y[c]).sum())
            .collect();
        normalize_gauge(&mut v)?;
        let phi = eigenvalue_to_phase(lambda);
        pairs.push((phi, lambda, v));
    }

    pairs.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| {
            a.2.iter()
                .zip(&b.2)
                .map(|(x, y)| x.arg().total_cmp(&y.arg()))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });

    let mut phases = Vec::with_capacity(n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (phi, lambda, v) in pairs {
        phases.push(phi);
        eigenvalues.push(lambda);
        eigenvectors.push(v);
    }
    Ok(ReferenceSpectrum {
        phases,
        eigenvalues,
        eigenvectors,
        pairing: (0..n).collect(),
    })
}

fn normalize_gauge(v: &mut [Complex64]) -> Result<()> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(QpeError::NumericFailure("degenerate eigenvector".into()));
    }
    let (mut best, mut best_mag) = (0, 0.0);
    for (i, a) in v.iter().enumerate() {
        if a.norm() > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = a.norm();
        }
    }
    let gauge = v[best].conj() / (v[best].norm() * norm);
    for a in v.iter_mut() {
        *a *= gauge;
    }
    v[best] = Complex64::new(v[best].re, 0.0);
    Ok(())
}
