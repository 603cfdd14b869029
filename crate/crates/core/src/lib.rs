//! Eigenvalues of the one-dimensional fractional Schrödinger operator
//! (-∂ₓₓ)^{α/2} + V on a bounded interval, computed with a Galerkin method
//! on generalized Jacobi functions, together with a finite-difference
//! baseline, gap statistics and tensor-product spectra of boxes.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod baselines;
pub mod basis;
pub mod eigsolve;
mod error;
pub mod gaps;
pub mod specfun;
pub mod tensor;

pub use error::{Error, Result};
pub use faer::Mat;
