//! Exact realization of a Leonard trio built from q-Racah polynomials, with
//! evaluators for the associated Wilson rational functions and a verifier
//! for the identities that tie them together.

pub mod battery;
pub mod error;
pub mod limits;
pub mod matrix;
pub mod params;
pub mod qaskey;
pub mod qseries;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod trio;
pub mod wilson;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use params::ParameterSet;
pub use scalar::Scalar;
