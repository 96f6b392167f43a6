//! Truncated bosonic Fock-space toolkit for mode entanglement.
//!
//! States live on finite product bases (or fixed-number two-mode sectors),
//! operators are dense complex matrices, and every physical quantity is an
//! exact finite-dimensional trace.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod linalg;
pub mod measure;
pub mod processes;
pub mod regions;
pub mod spin;
pub mod ssr;
pub mod states;
pub mod tol;
pub mod witnesses;

pub use error::{Error, Result};
pub use nalgebra;
pub use fock::{
    annihilation_op, creation_op, expectation, identity_op, number_op, partial_trace,
    quadrature_p, quadrature_x, total_number_op, variance, DensityOperator, FockBasis,
    ModeOperator, QuantumState, StateVector, C64,
};
pub use spin::{BlochReport, EulerAngles, PrincipalAxes, SpinFrame};
pub use states::{NamedState, StateRepr};
pub use witnesses::WitnessVerdict;
