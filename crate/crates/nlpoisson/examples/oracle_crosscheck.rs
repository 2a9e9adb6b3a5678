//! The two independent computational routes for the direct-side integrand
//! `e^{it|xi|^2/2} F(|U(t) g_a|^{p-1} U(t) g_a)`:
//! the closed form and the full FFT pipeline (propagate, nonlinearity,
//! transform, phase). Also shows the large-time envelope and the small-time
//! limit of the transform-side core.
//!
//! Run with: cargo run --release --example oracle_crosscheck

use nlpoisson::gaussian::{
    lhs_asymptote, lhs_integrand_gaussian, rhs_core_gaussian, GaussianState,
};
use nlpoisson::grid::{sample, SpatialGrid};
use nlpoisson::nonlinearity::power_nonlinearity;
use nlpoisson::operators::{fourier, propagate, PropagatorPath};
use num_complex::Complex64;

fn main() {
    let (a, p, n) = (1.0, 4.0, 1usize);
    let grid = SpatialGrid::self_dual(n, 512).expect("valid grid");
    let state = GaussianState::isotropic(a).expect("positive width");

    // FFT pipeline at t = 1 versus the closed form, over the whole lattice
    let t = 1.0;
    let phi = sample(|x| state.evaluate(x), &grid).expect("sample");
    let u = propagate(&phi, t, PropagatorPath::Symbol).expect("propagate");
    let w = power_nonlinearity(&u, p).expect("nonlinearity");
    let hat = fourier(&w).expect("transform");
    let mut max_dev: f64 = 0.0;
    for (flat, v) in hat.samples().iter().enumerate() {
        let xi = grid.freq_coord(flat);
        let pipeline = v * Complex64::from_polar(1.0, t * xi * xi / 2.0);
        let oracle = lhs_integrand_gaussian(a, p, n, t, &[xi]);
        max_dev = max_dev.max((pipeline - oracle).norm());
    }
    println!("FFT pipeline vs closed form at t = 1: max abs deviation {max_dev:.3e}");

    // modulus of the integrand against its large-time envelope
    println!("{:>10} {:>16}", "a*t", "| |I|/envelope - 1 |");
    for at in [10.0, 100.0, 1e3, 1e4] {
        let tt = at / a;
        let v = lhs_integrand_gaussian(a, p, n, tt, &[1.0]).norm();
        let env = lhs_asymptote(a, p, n, tt, &[1.0]);
        println!("{at:>10} {:>16.3e}", (v / env - 1.0).abs());
    }

    // transform-side core at small times approaches |F g_a|^{p-1} F g_a
    let t0 = 1e-4;
    let mut lim_dev: f64 = 0.0;
    for k in 0..=64 {
        let xi = -4.0 + 0.125 * k as f64;
        let v = rhs_core_gaussian(a, p, n, t0, &[xi]).norm();
        let lim = a.powf(-(n as f64) * p / 2.0) * (-p * xi * xi / (2.0 * a)).exp();
        lim_dev = lim_dev.max((v - lim).abs());
    }
    println!("|core(t = 1e-4)| vs small-time limit: max deviation {lim_dev:.3e}");

    assert!(max_dev < 1e-9 && lim_dev < 1e-6);
    println!("closed-form and FFT oracles agree");
}
