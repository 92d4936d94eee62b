//! Exact separation of 2x2 matrix tuples.
//!
//! Everything is computed over the Gaussian rationals: trace/determinant
//! invariants of tuples under simultaneous conjugation, a reduced separating
//! set built from level sums of triple traces, orbit-closure geometry for the
//! inseparable trace-zero pairs, and the determinant/bracket/xi family for
//! the two-sided action.

pub mod conj;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod reduced;
pub mod scalar;
pub mod semi;

pub use error::{Error, Result};
pub use matrix::{Mat2, MatTuple, RngStream, SL2Element, TraceZeroTuple};
pub use scalar::GaussianRational;
