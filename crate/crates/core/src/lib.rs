//! Generalized Fekete polynomials, their Littlewood variants, exact L4 norms
//! and merit factors, and the asymptotic model of the normalized L4 norm.

pub mod asymptotic;
pub mod character;
pub mod cli;
pub mod convergence;
pub mod error;
pub mod sequence;
pub mod verify;

pub use error::{Error, Result};
