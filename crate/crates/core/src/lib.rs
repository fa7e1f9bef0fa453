//! Bayesian posterior versus confidence distribution for the distance
//! between two objects observed with isotropic Gaussian noise, with the
//! repeated-sampling diagnostics that expose false confidence in the
//! Bayesian collision probability.

pub mod calibration;
pub mod cli;
pub mod error;
pub mod inference;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
