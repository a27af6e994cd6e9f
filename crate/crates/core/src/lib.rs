//! Finite-temperature Casimir pressure between a metallic half-space and a
//! thin magnetodielectric plate.

pub mod analysis;
pub mod approx;
pub mod cli;
pub mod config;
pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;
pub mod reflection;
pub mod solve;

pub use error::{Error, Result};
