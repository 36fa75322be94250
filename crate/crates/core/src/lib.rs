// `!(x >= a)` comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod covariance;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod purification;
pub mod sample;
pub mod state;
pub mod symmetry;
pub mod symplectic;
pub mod tol;
pub mod williamson;

pub use error::{Error, Result};
