//! Nonlinearity regimes and the scaling exponents attached to them.
//!
//! For dimension `n` and power `p > 1` the relevant thresholds are
//! `p = 1 + 2/n` (long-range threshold), `p = 1 + 4/n` (L^2-critical power)
//! and, for `n >= 3`, `p = 1 + 4/(n-2)` (energy-critical power). The decay
//! exponent is `delta(r) = n/2 - n/r`, and the interpolation exponents are
//!
//! ```text
//! theta = 4 / (n (p - 1)) - 1
//! sigma = (n + 4 - (n - 4) p) / (n p (p - 1))
//! ```
//!
//! Useful equivalences, all exact rational identities:
//! `0 < theta < 1` iff `1 + 2/n < p < 1 + 4/n`; `theta = 0` iff `p = 1 + 4/n`;
//! `sigma = 1` iff `p = 1 + 4/n` and `sigma < 1` iff `p > 1 + 4/n`
//! (solve `n p^2 - 4 p - (n + 4) = 0`; the positive root is `p = 1 + 4/n`);
//! `sigma > 0` throughout the admissible range since `(n - 2) p <= n + 2`.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("nonlinearity power must satisfy p > 1, got {0}")]
    PowerTooSmall(f64),
    #[error("dimension must be 1, 2, or 3, got {0}")]
    BadDimension(usize),
    #[error("p = {p} exceeds the energy-critical power 1 + 4/(n-2) = {limit} for n = {n}")]
    AboveEnergyCritical { n: usize, p: f64, limit: f64 },
}

/// Classification of the power `p` relative to the scattering thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    /// `p <= 1 + 2/n`: both half-line integrals diverge.
    LongRange,
    /// `1 + 2/n < p < 1 + 4/n`: weighted-L^2 data space.
    Subcritical,
    /// `p = 1 + 4/n`: plain L^2 data space.
    L2Critical,
    /// `p > 1 + 4/n` (up to `1 + 4/(n-2)` when `n >= 3`): Sobolev data space.
    Supercritical,
    /// `p` above the energy-critical power for `n >= 3`.
    OutOfRange,
}

impl RegimeTag {
    /// True for the regimes in which both sides of the time-integrated
    /// identity are finite.
    pub fn admits_verification(self) -> bool {
        matches!(
            self,
            RegimeTag::Subcritical | RegimeTag::L2Critical | RegimeTag::Supercritical
        )
    }
}

/// `delta(r) = n/2 - n/r`, the L^r decay rate of the free evolution.
pub fn delta(n: usize, r: f64) -> f64 {
    let n = n as f64;
    n / 2.0 - n / r
}

/// `theta = 4/(n(p-1)) - 1`, defined for all `p > 1`.
pub fn theta_exponent(n: usize, p: f64) -> f64 {
    4.0 / (n as f64 * (p - 1.0)) - 1.0
}

/// `sigma = (n + 4 - (n-4)p) / (n p (p-1))`, defined for all `p > 1`.
pub fn sigma_exponent(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    (nf + 4.0 - (nf - 4.0) * p) / (nf * p * (p - 1.0))
}

fn check_dim(n: usize) -> Result<(), ParamsError> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(ParamsError::BadDimension(n))
    }
}

/// Places `(n, p)` in its regime. Boundary powers go to `L2Critical`
/// (at `p = 1 + 4/n`) and `Supercritical` (at the energy-critical power).
pub fn classify_regime(n: usize, p: f64) -> Result<RegimeTag, ParamsError> {
    check_dim(n)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(ParamsError::PowerTooSmall(p));
    }
    let nf = n as f64;
    let long_range = 1.0 + 2.0 / nf;
    let critical = 1.0 + 4.0 / nf;
    let tag = if p <= long_range {
        RegimeTag::LongRange
    } else if p < critical {
        RegimeTag::Subcritical
    } else if p == critical {
        RegimeTag::L2Critical
    } else if n >= 3 {
        let energy_critical = 1.0 + 4.0 / (nf - 2.0);
        if p <= energy_critical {
            RegimeTag::Supercritical
        } else {
            RegimeTag::OutOfRange
        }
    } else {
        RegimeTag::Supercritical
    };
    Ok(tag)
}

/// Dimension, power, regime and the derived exponents used throughout.
///
/// `theta` is populated only in the subcritical regime and `sigma` only in
/// the supercritical one; the raw formulas remain available at any `p` via
/// [`theta_exponent`] and [`sigma_exponent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub n: usize,
    pub p: f64,
    pub regime: RegimeTag,
    /// `delta(2p)`, the weight exponent of the weighted-L^2 space.
    pub delta_2p: f64,
    /// `delta(p+1)`, the Sobolev regularity of the supercritical space.
    pub delta_p1: f64,
    pub theta: Option<f64>,
    pub sigma: Option<f64>,
}

impl SimParams {
    /// Exponent of the `|t|` prefactor in the inverted-time integrand:
    /// `n(p-1)/2 - 2`. Lies in `(-1, 0)` strictly between the long-range
    /// and L^2-critical powers, and vanishes at `p = 1 + 4/n`.
    pub fn tail_exponent(&self) -> f64 {
        self.n as f64 * (self.p - 1.0) / 2.0 - 2.0
    }
}

/// Builds [`SimParams`], rejecting powers above the energy-critical bound.
/// The long-range boundary itself is accepted (divergence scans run there);
/// callers that need a convergent identity must check
/// [`RegimeTag::admits_verification`].
pub fn make_params(n: usize, p: f64) -> Result<SimParams, ParamsError> {
    let regime = classify_regime(n, p)?;
    if regime == RegimeTag::OutOfRange {
        let nf = n as f64;
        return Err(ParamsError::AboveEnergyCritical {
            n,
            p,
            limit: 1.0 + 4.0 / (nf - 2.0),
        });
    }
    let theta = (regime == RegimeTag::Subcritical).then(|| theta_exponent(n, p));
    let sigma = (regime == RegimeTag::Supercritical).then(|| sigma_exponent(n, p));
    Ok(SimParams {
        n,
        p,
        regime,
        delta_2p: delta(n, 2.0 * p),
        delta_p1: delta(n, p + 1.0),
        theta,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_basics() {
        // delta(2) = 0 exactly, monotone increasing in r.
        for n in 1..=3 {
            assert_eq!(delta(n, 2.0), 0.0);
            let mut prev = f64::NEG_INFINITY;
            for r in [2.0, 2.5, 4.0, 8.0, 100.0] {
                let d = delta(n, r);
                assert!(d > prev);
                prev = d;
            }
        }
        assert!((delta(1, 8.0) - 0.375).abs() < 1e-15);
        assert!((delta(1, 5.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(1, 5.0).unwrap(), RegimeTag::L2Critical);
        // energy-critical endpoint is admitted as supercritical
        assert_eq!(classify_regime(3, 5.0).unwrap(), RegimeTag::Supercritical);
        assert_eq!(classify_regime(2, 2.0).unwrap(), RegimeTag::LongRange);
        assert_eq!(classify_regime(1, 4.0).unwrap(), RegimeTag::Subcritical);
        assert_eq!(classify_regime(1, 6.0).unwrap(), RegimeTag::Supercritical);
        assert_eq!(classify_regime(2, 100.0).unwrap(), RegimeTag::Supercritical);
        assert_eq!(classify_regime(3, 5.2).unwrap(), RegimeTag::OutOfRange);
        assert!(classify_regime(1, 1.0).is_err());
        assert!(classify_regime(4, 3.0).is_err());
    }

    #[test]
    fn params_examples() {
        let p14 = make_params(1, 4.0).unwrap();
        assert_eq!(p14.regime, RegimeTag::Subcritical);
        assert!((p14.theta.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((p14.delta_2p - 0.375).abs() < 1e-15);
        assert!((p14.delta_p1 - 0.3).abs() < 1e-15);
        assert!(p14.sigma.is_none());

        let p35 = make_params(3, 5.0).unwrap();
        assert_eq!(p35.regime, RegimeTag::Supercritical);
        assert!((p35.sigma.unwrap() - 0.2).abs() < 1e-15);

        // At the critical power theta is not stored, but the formula gives 0,
        // and the |t| prefactor of the inverted side is exactly t^0 = 1.
        let p15 = make_params(1, 5.0).unwrap();
        assert_eq!(p15.regime, RegimeTag::L2Critical);
        assert!(p15.theta.is_none());
        assert_eq!(theta_exponent(1, 5.0), 0.0);
        assert_eq!(p15.tail_exponent(), 0.0);
        assert_eq!(make_params(2, 3.0).unwrap().tail_exponent(), 0.0);

        assert!(make_params(3, 6.0).is_err());
        let lr = make_params(1, 3.0).unwrap();
        assert_eq!(lr.regime, RegimeTag::LongRange);
        assert!(!lr.regime.admits_verification());
    }

    #[test]
    fn exponent_windows_and_identities() {
        // theta and sigma land in their windows and satisfy the exact
        // algebraic identities across a dense (n, p) sweep.
        for n in 1..=3usize {
            let nf = n as f64;
            let lo = 1.0 + 2.0 / nf;
            let crit = 1.0 + 4.0 / nf;
            let hi = if n >= 3 { 1.0 + 4.0 / (nf - 2.0) } else { crit + 5.0 };
            for k in 1..40 {
                let p = lo + (crit - lo) * k as f64 / 40.0;
                let q = make_params(n, p).unwrap();
                let th = q.theta.unwrap();
                assert!(th > 0.0 && th < 1.0, "theta window at n={n} p={p}");
                // Hoelder-in-time split: 1 = (1 - n(p-1)/4) + (p+1) delta(p+1)/2
                let lhs = (1.0 - nf * (p - 1.0) / 4.0) + (p + 1.0) * q.delta_p1 / 2.0;
                assert!((lhs - 1.0).abs() < 1e-12);
            }
            for k in 1..40 {
                let p = crit + (hi - crit) * k as f64 / 40.0;
                let q = make_params(n, p).unwrap();
                let sg = q.sigma.unwrap();
                assert!(sg > 0.0 && sg < 1.0, "sigma window at n={n} p={p}");
                // (1 - sigma) p delta(p+1) = n(p-1)/2 - 2
                let lhs = (1.0 - sg) * p * q.delta_p1;
                assert!((lhs - q.tail_exponent()).abs() < 1e-12);
            }
            // boundary values
            assert!(theta_exponent(n, crit).abs() < 1e-12);
            assert!((sigma_exponent(n, crit) - 1.0).abs() < 1e-12);
            assert!((theta_exponent(n, lo) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_limits_in_subcritical_window() {
        // theta -> 1 as p -> 1+2/n from above, theta -> 0 as p -> 1+4/n.
        let n = 2;
        assert!((theta_exponent(n, 2.0 + 1e-9) - 1.0).abs() < 1e-8);
        assert!(theta_exponent(n, 3.0 - 1e-9).abs() < 1e-8);
    }
}
