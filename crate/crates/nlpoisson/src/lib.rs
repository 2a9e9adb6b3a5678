//! Numerical verification of a nonlinear Poisson-type identity for the
//! free Schrodinger group.
//!
//! For data `phi` and a short-range power `p`, the time integral of
//! `e^{it|xi|^2/2} F(|U(t)phi|^{p-1} U(t)phi)(xi)` over the half line
//! equals the time integral of
//! `t^{n(p-1)/2-2} U(t)(|U(-t) F phi|^{p-1} U(-t) F phi)(xi)`,
//! where `U(t)` is the free propagator and `F` the Fourier transform with
//! the symmetric normalization. This crate makes every piece of that
//! statement computable and checks it quantitatively:
//!
//! - [`operators`]: the discrete transform with continuum normalization,
//!   quadratic phases, dilations, the propagator realized through its
//!   symbol and through the factorization `M_t D_t F M_t`, and the
//!   dilation commutation identities.
//! - [`gaussian`]: exact closed forms for Gaussian data, the independent
//!   oracle for everything else.
//! - [`nonlinearity`]: the power nonlinearity and the weighted / Sobolev
//!   norms of the admissible data spaces.
//! - [`quadrature`]: adaptive half-line integration with endpoint-power
//!   grading and the `t -> 1/t` tail substitution.
//! - [`verifier`]: the identity checks themselves (integrated, pointwise,
//!   norm bounds, long-range divergence scan) as structured reports.
//! - [`config`], [`report`], [`cli`]: batch-run plumbing around them.
//!
//! The runnable examples under `examples/` demonstrate one capability
//! each; the `nlpoisson` binary drives the same checks from the command
//! line.

pub mod cli;
pub mod config;
mod fft;
pub mod gaussian;
pub mod grid;
pub mod nonlinearity;
pub mod operators;
pub mod params;
pub mod quadrature;
pub mod report;
mod special;
pub mod verifier;

pub use gaussian::{
    gaussian_evolve, gaussian_fourier, lhs_integrand_gaussian, rhs_core_gaussian,
    rhs_integrand_gaussian, zeta, GaussianState,
};
pub use grid::{make_grid, sample, Field, SpaceTag, SpatialGrid};
pub use nonlinearity::{compute_xp_norms, power_nonlinearity, XpNorms};
pub use operators::{
    check_commutation, dilate_eval, fourier, inverse_fourier, propagate, propagate_gaussian,
    quadratic_phase, CommutationReport, PropagatorPath,
};
pub use params::{classify_regime, delta, make_params, RegimeTag, SimParams};
pub use quadrature::{integrate_half_line, partial_integral, IntegralEstimate, QuadratureSpec};
pub use verifier::{
    bound_check, divergence_scan, lhs_profile, pointwise_check, rhs_profile, verify_identity,
    BoundReport, DivergenceReport, FrequencySet, ProfileData, VerificationReport,
};
