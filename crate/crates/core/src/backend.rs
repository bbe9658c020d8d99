//! Gate kernels behind a single dispatch boundary.
//!
//! [`StateVector`](crate::StateVector) validates arguments and then hands the
//! raw amplitude slice to a [`Backend`]. Only the portable CPU backend exists;
//! an accelerator backend would implement the same trait.

use std::fmt::Debug;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::operator::DenseOperator;

/// Kernels operate on a slice of `2^n` amplitudes where qubit `q` is bit `q`
/// of the index. Callers guarantee that qubit indices are in range and
/// distinct where required.
pub trait Backend: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn hadamard(&self, amps: &mut [Complex64], qubit: usize);

    /// Multiplies every amplitude whose `control` and `target` bits are both
    /// set by `exp(i·angle)`.
    fn controlled_phase(&self, amps: &mut [Complex64], control: usize, target: usize, angle: f64);

    fn swap(&self, amps: &mut [Complex64], q1: usize, q2: usize);

    /// Applies `op` to the target register (bits `n_meas..`) of every
    /// amplitude block whose `control` bit is set.
    fn controlled_dense(
        &self,
        amps: &mut [Complex64],
        n_meas: usize,
        control: usize,
        op: &DenseOperator,
    );
}

/// Portable CPU backend.
#[derive(Debug, Default, Clone, Copy)]
pub struct Portable;

pub static PORTABLE: Portable = Portable;

// Below this many amplitudes the rayon split costs more than it saves.
const PAR_MIN_AMPS: usize = 1 << 14;

// Columns of the measurement index processed per tile in the dense kernel.
const TILE: usize = 64;

impl Backend for Portable {
    fn name(&self) -> &'static str {
        "portable-cpu"
    }

    fn hadamard(&self, amps: &mut [Complex64], qubit: usize) {
        let stride = 1usize << qubit;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let butterfly = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = (x + y) * h;
                *a1 = (x - y) * h;
            }
        };
        if amps.len() >= PAR_MIN_AMPS && amps.len() / (2 * stride) > 1 {
            amps.par_chunks_mut(2 * stride).for_each(butterfly);
        } else {
            amps.chunks_mut(2 * stride).for_each(butterfly);
        }
    }

    fn controlled_phase(&self, amps: &mut [Complex64], control: usize, target: usize, angle: f64) {
        let mask = (1usize << control) | (1usize << target);
        let phase = Complex64::from_polar(1.0, angle);
        let kernel = |(i, a): (usize, &mut Complex64)| {
            if i & mask == mask {
                *a *= phase;
            }
        };
        if amps.len() >= PAR_MIN_AMPS {
            amps.par_iter_mut().enumerate().for_each(kernel);
        } else {
            amps.iter_mut().enumerate().for_each(kernel);
        }
    }

    fn swap(&self, amps: &mut [Complex64], q1: usize, q2: usize) {
        let (lo, hi) = (q1.min(q2), q1.max(q2));
        let (lo_bit, hi_bit) = (1usize << lo, 1usize << hi);
        for i in 0..amps.len() {
            // visit each exchanged pair once, from the side with only `hi` set
            if i & hi_bit != 0 && i & lo_bit == 0 {
                amps.swap(i, i ^ hi_bit ^ lo_bit);
            }
        }
    }

    fn controlled_dense(
        &self,
        amps: &mut [Complex64],
        n_meas: usize,
        control: usize,
        op: &DenseOperator,
    ) {
        // View the amplitudes as a dim × meas_dim row-major matrix: row t is
        // the target value, column the raw measurement bits. The controlled
        // operator multiplies every column with the control bit set by `op`.
        let meas_dim = 1usize << n_meas;
        let dim = op.dim();
        let ctrl = 1usize << control;
        let width = meas_dim.min(TILE);

        let cols: Vec<usize> = if ctrl >= width {
            (0..width).collect()
        } else {
            (0..width).filter(|k| k & ctrl != 0).collect()
        };
        let nc = cols.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut input = vec![zero; dim * nc];
        let mut output = vec![zero; dim * nc];

        for start in (0..meas_dim).step_by(width) {
            if ctrl >= width && start & ctrl == 0 {
                continue;
            }
            for t in 0..dim {
                let base = t * meas_dim + start;
                let dst = &mut input[t * nc..(t + 1) * nc];
                for (d, &k) in dst.iter_mut().zip(&cols) {
                    *d = amps[base + k];
                }
            }
            output.fill(zero);
            for r in 0..dim {
                let out_row = &mut output[r * nc..(r + 1) * nc];
                for (c, &u) in op.row(r).iter().enumerate() {
                    if u == zero {
                        continue;
                    }
                    let in_row = &input[c * nc..(c + 1) * nc];
                    for (o, x) in out_row.iter_mut().zip(in_row) {
                        *o += u * x;
                    }
                }
            }
            for t in 0..dim {
                let base = t * meas_dim + start;
                let src = &output[t * nc..(t + 1) * nc];
                for (s, &k) in src.iter().zip(&cols) {
                    amps[base + k] = *s;
                }
            }
        }
    }
}
