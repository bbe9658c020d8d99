//! Independent dense-matrix oracles for the integration tests.
//!
//! Everything here builds full `2^n × 2^n` matrices from tensor products and
//! never calls the crate's gate kernels.

#![allow(dead_code)]

use std::f64::consts::PI;

use qpe_core::rng::GaussianSource;
use qpe_core::{Complex64, DenseOperator};

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|r| (0..n).map(|col| if r == col { c(1., 0.) } else { c(0., 0.) }).collect())
        .collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|r| (0..m).map(|col| (0..b.len()).map(|k| a[r][k] * b[k][col]).sum()).collect())
        .collect()
}

pub fn matvec(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `a ⊗ b` with `b` acting on the low-order index bits.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![c(0., 0.); na * nb]; na * nb];
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Single-qubit gate `g` on qubit `q` of `n`, qubit 0 = least significant bit.
pub fn embed_1q(g: &Mat, q: usize, n: usize) -> Mat {
    let mut out = identity(1);
    for k in (0..n).rev() {
        let f = if k == q { g.clone() } else { identity(2) };
        out = kron(&out, &f);
    }
    out
}

pub fn hadamard() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h, 0.), c(h, 0.)], vec![c(h, 0.), c(-h, 0.)]]
}

pub fn proj(bit: usize) -> Mat {
    if bit == 0 {
        vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(0., 0.)]]
    } else {
        vec![vec![c(0., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]]
    }
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Controlled phase as `I − P1⊗P1 + e^{iθ} P1⊗P1`.
pub fn controlled_phase(control: usize, target: usize, angle: f64, n: usize) -> Mat {
    let both = matmul(&embed_1q(&proj(1), control, n), &embed_1q(&proj(1), target, n));
    let k = Complex64::from_polar(1.0, angle) - 1.0;
    let scaled: Mat = both.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
    add(&identity(1 << n), &scaled)
}

/// Swap as a permutation matrix.
pub fn swap(q1: usize, q2: usize, n: usize) -> Mat {
    let dim = 1 << n;
    let mut out = vec![vec![c(0., 0.); dim]; dim];
    for i in 0..dim {
        let (b1, b2) = ((i >> q1) & 1, (i >> q2) & 1);
        let j = if b1 != b2 { i ^ (1 << q1) ^ (1 << q2) } else { i };
        out[j][i] = c(1., 0.);
    }
    out
}

/// `|0⟩⟨0|_control ⊗ I + |1⟩⟨1|_control ⊗ U` with `U` on the top `n_mat`
/// qubits and the control among the low `n_meas` qubits.
pub fn controlled_dense(control: usize, u: &Mat, n_meas: usize) -> Mat {
    let n_mat = u.len().trailing_zeros() as usize;
    let meas_off = embed_1q(&proj(0), control, n_meas);
    let meas_on = embed_1q(&proj(1), control, n_meas);
    add(&kron(&identity(1 << n_mat), &meas_off), &kron(&u, &meas_on))
}

/// Expected inverse-QFT action on an `n`-qubit register: the Fourier state
/// `Σ_k e^{2πi·m·k/2^n}|k⟩/√2^n` (k read with qubit 0 as LSB) goes to the
/// basis index whose bits spell `m` with qubit 0 as MSB.
pub fn inverse_qft_matrix(n: usize) -> Mat {
    let dim = 1usize << n;
    let norm = (dim as f64).sqrt().recip();
    let mut out = vec![vec![c(0., 0.); dim]; dim];
    for m in 0..dim {
        let row = bit_reverse(m, n);
        for k in 0..dim {
            out[row][k] = Complex64::from_polar(norm, -2.0 * PI * (m * k) as f64 / dim as f64);
        }
    }
    out
}

pub fn bit_reverse(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | (((x >> b) & 1) << (n - 1 - b)))
}

pub fn to_mat(op: &DenseOperator) -> Mat {
    (0..op.dim()).map(|r| (0..op.dim()).map(|col| op.get(r, col)).collect()).collect()
}

/// Whole phase-estimation circuit as one dense matrix.
pub fn qpe_matrix(op: &DenseOperator, n_meas: usize) -> Mat {
    let n_mat = op.n_qubits();
    let n = n_meas + n_mat;
    let mut circuit = identity(1 << n);
    for q in 0..n_meas {
        circuit = matmul(&embed_1q(&hadamard(), q, n), &circuit);
    }
    let mut power = to_mat(op);
    for wire in 0..n_meas {
        circuit = matmul(&controlled_dense(wire, &power, n_meas), &circuit);
        power = matmul(&power, &power);
    }
    let iqft = kron(&identity(1 << n_mat), &inverse_qft_matrix(n_meas));
    matmul(&iqft, &circuit)
}

/// Closed-form outcome distribution of phase estimation on an exact
/// eigenvector with phase `phi`:
/// `p(m) = sin²(2^n π δ) / (2^{2n} sin²(π δ))`, `δ = φ − m/2^n`.
pub fn qpe_kernel(phi: f64, n_meas: usize) -> Vec<f64> {
    let dim = (1usize << n_meas) as f64;
    (0..1usize << n_meas)
        .map(|m| {
            let delta = phi - m as f64 / dim;
            let den = (PI * delta).sin();
            if den.abs() < 1e-15 {
                1.0
            } else {
                ((dim * PI * delta).sin() / (dim * den)).powi(2)
            }
        })
        .collect()
}

pub fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
    let mut g = GaussianSource::new(seed);
    let v: Vec<Complex64> = (0..1usize << n).map(|_| g.next_complex()).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Marginal over the top `n_mat` qubits, outcome decoded with qubit 0 as MSB.
pub fn marginal(amps: &[Complex64], n_meas: usize) -> Vec<f64> {
    let mut p = vec![0.0; 1 << n_meas];
    for (i, a) in amps.iter().enumerate() {
        p[bit_reverse(i & ((1 << n_meas) - 1), n_meas)] += a.norm_sqr();
    }
    p
}
