//! Batch verification of the weighted kernel identity
//! `K_rho(z,w) = -2/(pi rho(z) rho(w)) d^2 G_rho / dz dconj(w)`.
//!
//! An [`ExperimentConfig`] (JSON) names one experiment; [`run`] executes it
//! and returns a [`RunOutput`] holding the versioned JSON report and its CSV
//! tables. Every pass/fail line is a [`report::Check`] that records the
//! tolerance it was judged against.

pub mod config;
pub mod convergence;
pub mod experiments;
pub mod points;
pub mod report;

pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use experiments::{run, RunError};
pub use report::{Check, RunOutput};
