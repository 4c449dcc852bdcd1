//! Stationary weakly dependent process generators.
//!
//! Binary autoregressions `Y_t | past ~ 2·Bernoulli(p_t) − 1` with
//! `2p_t − 1 = f(past)`, optional AR(1) exogenous covariates, finite-lag affine
//! causal models `Y_t = M(past)·ξ_t + f(past)`, and exact oracles for the
//! two-state chain.

mod acx;
mod binary;
mod oracle;
mod trajectory;

pub use acx::{simulate_acx, AcxKind, AcxSpec};
pub use binary::{bayes_predict, simulate_binary, BinaryDgpSpec, CovariateSpec, DgpKind};
pub use oracle::{exact_risk_oracle, ChainOracle};
pub use trajectory::{make_features, make_supervised, FeatureLags, Trajectory};

/// Burn-in used when the caller has no preference.
pub const DEFAULT_BURN_IN: usize = 500;

/// `sign(x) = 1{x ≥ 0} − 1{x < 0}`.
pub fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}
