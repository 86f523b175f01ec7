//! Dense linear algebra used by the physics modules.

mod expm;
mod general;
mod lu;
mod symmetric;

pub use expm::expm;
pub use general::{complex_eigen, ComplexEigen, DEFECTIVE_CONDITION};
pub use lu::Lu;
pub use symmetric::{symmetric_eigen, SymmetricEigen};
