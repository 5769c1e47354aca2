//! Exact first and second cohomology of grading-restricted vertex algebras.
//!
//! The crate computes derivation spaces `Der(V, W)` (first cohomology) and
//! the second cohomology `H²_{1/2}(V, W)` of normalized 2-cocycles modulo
//! coboundaries, and builds and verifies the objects the second cohomology
//! classifies: square-zero extensions of `V` by a module `W`, and first-order
//! deformations `Y + tΨ` over the dual numbers. All arithmetic is exact.

pub mod axioms;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod graded;
pub mod linalg;
pub mod presets;
pub mod report;
pub mod scalar;
pub mod specfile;

pub use error::{Error, Result, TruncationBreach};
pub use scalar::{Coeff, DualScalar, Scalar, SparseVec};
