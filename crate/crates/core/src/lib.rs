//! Numerical lab for conformally invariant spaces of analytic functions on
//! the unit disc: norms, Carleson constants, integration operators and
//! gap-series diagnostics.

pub mod carleson;
pub mod error;
pub mod func;
pub mod gapseries;
pub mod harness;
pub mod norms;
pub mod operators;
pub mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
