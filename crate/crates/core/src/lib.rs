//! Entanglement harvesting by three Unruh–DeWitt detectors: special functions,
//! detector matrix elements, qubit algebra, the π-tangle and a toy model.

// `!(x > 0.0)` is used on purpose so that NaN falls into the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detector;
pub mod error;
pub mod qubit;
pub mod selftest;
pub mod special;
pub mod sweep;
pub mod tangle;
pub mod toy;

pub use num_complex::Complex64;

pub use detector::{
    cross_correlation_c, cross_correlation_x, matrix_elements, transition_probability,
    DetectorParams, Geometry, MatrixElements, PERTURBATIVE_COUPLING_LIMIT,
};
pub use error::{Error, Result};
pub use qubit::{build_rho, DensityMatrix, Party, SpectrumMode};
pub use special::ComplexValue;
pub use sweep::{Axis, GeometryKind, Route, SweepCell, SweepConfig};
pub use tangle::{pi_tangle_general, PiTangleResult};
pub use toy::{PerturbativeToyParams, ToyParams};
