//! Norm-bound ratios: ||F||_2 of the assembled profile against the
//! regime's norm combination, across widths and amplitudes. Pure amplitude
//! scalings must leave the ratio exactly constant (degree-p homogeneity);
//! the spread across widths is what a uniform constant has to cover.
//!
//! Run with: cargo run --release --example norm_bounds

use nlpoisson::gaussian::GaussianState;
use nlpoisson::grid::make_grid;
use nlpoisson::params::make_params;
use nlpoisson::quadrature::QuadratureSpec;
use nlpoisson::verifier::{bound_check, FrequencySet, ProfileData, lhs_profile};
use num_complex::Complex64;

fn main() {
    let grid = make_grid(1, 512, 20.0).expect("valid grid");
    let xi = FrequencySet::uniform(1, 4.0, 65);
    let spec = QuadratureSpec::default();

    for (p, label) in [(4.0, "subcritical"), (5.0, "critical"), (6.0, "supercritical")] {
        let params = make_params(1, p).expect("admissible parameters");
        let mut family = Vec::new();
        for width in [0.25, 1.0, 4.0] {
            for amplitude in [0.1, 1.0, 10.0] {
                family.push(
                    GaussianState::new(
                        Complex64::new(amplitude, 0.0),
                        Complex64::new(width, 0.0),
                    )
                    .expect("valid state"),
                );
            }
        }
        let report = bound_check(&family, &params, &xi, &spec, &grid).expect("bound check");
        println!("n = 1, p = {p} ({label}):");
        println!(
            "{:>8} {:>10} {:>16} {:>16} {:>12}",
            "width", "amplitude", "||F||_2", "combination", "ratio"
        );
        for m in &report.members {
            println!(
                "{:>8} {:>10} {:>16.8e} {:>16.8e} {:>12.8}",
                m.width, m.amplitude, m.f_l2, m.xp_combination, m.ratio
            );
        }
        println!(
            "ratio range [{:.8}, {:.8}] -> any C >= {:.8} works for this family\n",
            report.min_ratio, report.max_ratio, report.max_ratio
        );
    }

    // the direct-side profile is homogeneous of degree p in the data
    let params = make_params(1, 4.0).expect("admissible parameters");
    let base = lhs_profile(
        &ProfileData::Gaussian(GaussianState::isotropic(1.0).unwrap()),
        &params,
        &xi,
        &spec,
    )
    .expect("profile");
    let lam = 2.0;
    let scaled = lhs_profile(
        &ProfileData::Gaussian(
            GaussianState::new(Complex64::new(lam, 0.0), Complex64::new(1.0, 0.0)).unwrap(),
        ),
        &params,
        &xi,
        &spec,
    )
    .expect("profile");
    let mut dev: f64 = 0.0;
    for i in 0..xi.len() {
        dev = dev.max((scaled.values[i] - base.values[i] * lam.powf(params.p)).norm());
    }
    println!("homogeneity |F[2 phi] - 2^p F[phi]| over the window: {dev:.3e}");
}
