//! Dimerized chains of emitters coupled to a waveguide: couplings, band
//! topology, real-space edge modes and non-Hermitian dynamics.

// NaN-rejecting comparisons such as `!(x > 0.0)` are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod modes;
pub mod output;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{assemble, CouplingSet, ModelConfig};
