//! The long-range dichotomy at p = 1 + 2/n: partial integrals of the
//! Gaussian integrand magnitude over [1/T, T] grow like ln T exactly at the
//! threshold, while a power just above it saturates.
//!
//! Run with: cargo run --release --example long_range_divergence

use nlpoisson::quadrature::QuadratureSpec;
use nlpoisson::verifier::{convergence_scan, divergence_scan};

fn main() {
    let cutoffs = [10.0, 1e2, 1e3, 1e4];
    let spec = QuadratureSpec::default();

    let scan = divergence_scan(1.0, 1, &cutoffs, &spec).expect("scan");
    println!("n = 1, p = {} (long-range threshold):", scan.p);
    println!("{:>10} {:>18}", "T", "partial integral");
    for (t, m) in scan.cutoffs.iter().zip(&scan.partial_magnitudes) {
        println!("{t:>10} {m:>18.10}");
    }
    println!(
        "fit against c ln T + d: c = {:.6}, d = {:.6}, relative RMS {:.3}%",
        scan.fitted_slope,
        scan.fit_intercept,
        100.0 * scan.relative_fit_residual
    );
    assert!(scan.fitted_slope > 0.0 && scan.relative_fit_residual < 0.02);

    let p_short = 1.0 + 2.0 + 0.1; // 1 + 2/n + 0.1 at n = 1
    let companion = convergence_scan(1.0, 1, p_short, &cutoffs, &spec).expect("companion scan");
    let incs = companion.increments();
    println!("\ncompanion p = {p_short}:");
    println!("{:>10} {:>18}", "T", "partial integral");
    for (t, m) in companion.cutoffs.iter().zip(&companion.partial_magnitudes) {
        println!("{t:>10} {m:>18.10}");
    }
    println!("increments per decade: {incs:?}");
    let decreasing = incs.windows(2).all(|w| w[1] < w[0]);
    println!(
        "increments decreasing: {decreasing}; total decrease factor {:.3}",
        incs[0] / incs[incs.len() - 1]
    );
    assert!(decreasing && incs[0] / incs[incs.len() - 1] >= 1.2);

    println!("\nlogarithmic growth at the threshold, saturation above it");
}
