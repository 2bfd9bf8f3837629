//! p-adic L-functions of additive exponential sums over affine space.
//!
//! Brute-force exact L-series, p-densities and minimal supports of exponent
//! sets, digit matrices, and a coefficient-wise checker for the congruence
//! between the L-function and twisted digit-matrix determinants.

pub mod error;
pub mod ring;
pub mod series;
pub mod matrix;
pub mod ff;
pub mod padic;
pub mod density;
pub mod problem;
pub mod dwork;
pub mod lfun;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{charpoly_divfree, Matrix};
pub use ring::Ring;
pub use series::TruncatedSeries;
