//! Riemann zeta at real arguments, used by the endpoint corrections of the
//! singular-weight lattice sums in `nonlinearity`.

/// Zeta on `sigma > 1` by Euler-Maclaurin: partial sum to `K`, then the
/// integral tail with Bernoulli corrections through `B_6`.
fn zeta_gt_one(sigma: f64) -> f64 {
    debug_assert!(sigma > 1.0);
    const K: usize = 100;
    let kf = K as f64;
    let mut sum = 0.0;
    for k in 1..K {
        sum += (k as f64).powf(-sigma);
    }
    // integral_K^inf + boundary + B_2/2! f' + B_4/4! f''' + B_6/6! f^(5)
    sum += kf.powf(1.0 - sigma) / (sigma - 1.0);
    sum += 0.5 * kf.powf(-sigma);
    sum += sigma / 12.0 * kf.powf(-sigma - 1.0);
    sum -= sigma * (sigma + 1.0) * (sigma + 2.0) / 720.0 * kf.powf(-sigma - 3.0);
    sum += sigma * (sigma + 1.0) * (sigma + 2.0) * (sigma + 3.0) * (sigma + 4.0) / 30240.0
        * kf.powf(-sigma - 5.0);
    sum
}

/// Riemann zeta for real `s` with `s > 1` or `s < 0`. Negative arguments go
/// through the functional equation
/// `zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)`.
pub(crate) fn riemann_zeta(s: f64) -> f64 {
    if s > 1.0 {
        zeta_gt_one(s)
    } else {
        assert!(s < 0.0, "zeta evaluated only for s > 1 or s < 0, got {s}");
        let factor = 2.0f64.powf(s) * std::f64::consts::PI.powf(s - 1.0);
        factor
            * (std::f64::consts::FRAC_PI_2 * s).sin()
            * libm::tgamma(1.0 - s)
            * zeta_gt_one(1.0 - s)
    }
}
