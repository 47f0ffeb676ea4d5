//! Weighted shifts in one and two variables.

pub mod error;
pub mod lattice2d;
pub mod measures;
pub mod oracle;
pub mod positivity;
pub mod quadrature;
pub mod scalar;
pub mod spectra;
pub mod weights1d;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases.
pub type WeightSequenceF64 = weights1d::WeightSequence<f64>;
pub type UnilateralShiftF64 = weights1d::UnilateralShift<f64>;
pub type WeightDiagram = lattice2d::WeightDiagram2D<f64>;
pub type FamilyF64 = lattice2d::Family<f64>;
pub type MomentMatrixF64 = positivity::MomentMatrix<f64>;
pub type AtomicMeasure1DF64 = measures::AtomicMeasure1D<f64>;
pub type AtomicMeasure2DF64 = measures::AtomicMeasure2D<f64>;
