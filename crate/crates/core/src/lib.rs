//! Numerical laboratory for complete exponential sums and character sums over
//! prime fields, with the analytic kernels (smooth windows, Bessel functions,
//! oscillatory integrals, Hurwitz zeta) needed to study twisted coefficient
//! sums and central L-values at desk scale.
//!
//! The crate is organized around a brute-force-first philosophy: every closed
//! form carries an independent enumeration oracle, and the verification suites
//! in [`reductions`] compare the two paths term for term.

pub mod analysis;
pub mod arith;
pub mod character;
pub mod coeffs;
pub mod cx;
pub mod error;
pub mod expsums;
pub mod lscan;
pub mod reductions;

pub use error::{Error, Result};
