//! Learning-theory machinery for ψ-weakly dependent time series.
//!
//! The crate is organised around the pieces needed to study empirical risk
//! minimisation (ERM) over sparsity-constrained feedforward networks when the
//! training sample is a dependent trajectory:
//!
//! - [`process_sim`]: stationary binary autoregressions and finite-lag affine
//!   causal models with exogenous covariates, plus exact oracles.
//! - [`neuralnet`]: the network family `H_σ(L, N, B, F, S)`, forward pass,
//!   parameter flattening, constraint checks and Lipschitz constants.
//! - [`erm`]: hinge surrogate, empirical risks, backpropagation and the
//!   minibatch Adam training loop with accuracy-patience early stopping.
//! - [`bounds`]: covering-number bound, deviation inequalities, generalization
//!   bound constants, sample-size thresholds and the ε roots.
//! - [`weak_dependence`]: coefficient sequences, τ bounds and the
//!   factorial-moment summability check.
//! - [`experiments`]: Monte-Carlo excess-risk curves.
//! - [`recession`]: the quarterly US recession indicator pipeline.
//! - [`cli`]: the `weakdep` command line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod config;
pub mod erm;
pub mod error;
pub mod experiments;
pub mod neuralnet;
pub mod process_sim;
pub mod recession;
pub mod rng;
pub mod sample;
pub mod weak_dependence;

pub use error::{Error, Result};
pub use sample::Sample;
