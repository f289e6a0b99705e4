//! Exact computations with universal spinor and oscillator characters: Schur
//! functions, modification rules, spin/osc-Brauer diagrams, a finite-rank
//! Clifford/Weyl operator model and the homological invariants built on them.

pub mod charoracle;
pub mod diagrams;
pub mod error;
pub mod homology;
pub mod modrule;
pub mod opmodel;
pub mod partition;
pub mod scalar;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
pub use symfunc::SchurVector;
