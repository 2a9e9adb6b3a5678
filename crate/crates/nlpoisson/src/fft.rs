//! Internal n-dimensional FFT plumbing on row-major arrays.
//!
//! Plans are cached per thread; workers never share FFT state mutably.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry((len, forward))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if forward {
                    planner.plan_fft_forward(len)
                } else {
                    planner.plan_fft_inverse(len)
                }
            })
            .clone()
    })
}

/// Sign `(-1)^(j_0 + ... + j_{n-1})` of the multi-index behind a flat
/// row-major index, for power-of-two axis length. The parity of each digit
/// is the lowest bit of that digit, so the multi-index parity is the
/// popcount of the flat index masked at the digit boundaries.
pub(crate) fn parity_mask(points_per_dim: usize, n_dim: usize) -> usize {
    let shift = points_per_dim.trailing_zeros();
    let mut mask = 0usize;
    for a in 0..n_dim {
        mask |= 1usize << (a as u32 * shift);
    }
    mask
}

pub(crate) fn apply_parity(data: &mut [Complex64], mask: usize) {
    for (flat, v) in data.iter_mut().enumerate() {
        if (flat & mask).count_ones() & 1 == 1 {
            *v = -*v;
        }
    }
}

/// Unnormalized DFT (`forward`: `sum f_j e^{-2 pi i jk/N}`, else the
/// conjugate sum) applied along every axis of a row-major `n_dim`-cube.
pub(crate) fn dft_all_axes(data: &mut [Complex64], n_per_dim: usize, n_dim: usize, forward: bool) {
    let fft = plan(n_per_dim, forward);
    let total = data.len();
    debug_assert_eq!(total, n_per_dim.pow(n_dim as u32));
    let mut scratch = vec![Complex64::default(); n_per_dim];
    for axis in 0..n_dim {
        // stride between consecutive elements along `axis`
        let stride = n_per_dim.pow((n_dim - 1 - axis) as u32);
        if stride == 1 {
            for line in data.chunks_exact_mut(n_per_dim) {
                fft.process(line);
            }
        } else {
            let lines = total / n_per_dim;
            for line in 0..lines {
                // base offset of this line: distribute `line` over the
                // non-axis dimensions
                let block = line / stride; // index over slower dims
                let within = line % stride; // index over faster dims
                let base = block * stride * n_per_dim + within;
                for (i, s) in scratch.iter_mut().enumerate() {
                    *s = data[base + i * stride];
                }
                fft.process(&mut scratch);
                for (i, s) in scratch.iter().enumerate() {
                    data[base + i * stride] = *s;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_direct_dft_1d() {
        let n = 16;
        let data: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let mut out = data.clone();
        dft_all_axes(&mut out, n, 1, true);
        for k in 0..n {
            let mut direct = Complex64::default();
            for (j, v) in data.iter().enumerate() {
                let ang = -2.0 * PI * (j * k) as f64 / n as f64;
                direct += v * Complex64::new(ang.cos(), ang.sin());
            }
            assert!((out[k] - direct).norm() < 1e-11);
        }
    }

    #[test]
    fn axes_transform_is_separable_2d() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        dft_all_axes(&mut fast, n, 2, true);
        for k0 in 0..n {
            for k1 in 0..n {
                let mut direct = Complex64::default();
                for j0 in 0..n {
                    for j1 in 0..n {
                        let ang = -2.0 * PI * ((j0 * k0 + j1 * k1) as f64) / n as f64;
                        direct += data[j0 * n + j1] * Complex64::new(ang.cos(), ang.sin());
                    }
                }
                assert!((fast[k0 * n + k1] - direct).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn forward_then_inverse_scales_by_total() {
        let n = 8;
        for dim in 1..=3usize {
            let total = n_usize_pow(n, dim);
            let data: Vec<Complex64> = (0..total)
                .map(|j| Complex64::new(j as f64, (j as f64).sqrt()))
                .collect();
            let mut round = data.clone();
            dft_all_axes(&mut round, n, dim, true);
            dft_all_axes(&mut round, n, dim, false);
            let scale = total as f64;
            for (a, b) in round.iter().zip(&data) {
                assert!((a / scale - b).norm() < 1e-10);
            }
        }
    }

    fn n_usize_pow(n: usize, d: usize) -> usize {
        n.pow(d as u32)
    }

    #[test]
    fn parity_sign_matches_digit_sum() {
        let n = 8;
        let mask = parity_mask(n, 2);
        for flat in 0..n * n {
            let (j0, j1) = (flat / n, flat % n);
            let expect = (j0 + j1) % 2 == 1;
            assert_eq!((flat & mask).count_ones() & 1 == 1, expect);
        }
    }
}
