//! Numerical laboratory for matrix-valued Herglotz functions — analytic
//! maps of the open upper half-plane into complex n×n matrices with
//! positive-semidefinite imaginary part.
//!
//! The crate provides:
//!
//! * evaluation of a catalog of closed-form Herglotz functions and of
//!   functions built from explicit integral representations (`catalog`,
//!   `herglotz_core`, `measures`);
//! * recovery of the representing measure from boundary values — absolutely
//!   continuous density, point masses, interval masses, and the linear term
//!   (`boundary`);
//! * linear-fractional transformations under the complex symplectic group
//!   and their structural identities (`lft`);
//! * pointwise spectral classification (absolutely continuous / point /
//!   singular-continuous) and the exponential-representation factor
//!   (`classify`);
//! * the self-adjoint-extension calculus: one-parameter families of
//!   functions attached to boundary-condition parameters, Friedrichs/Krein
//!   endpoint detection, and the resolvent-difference transform between two
//!   extensions (`extensions`);
//! * a registry of named self-test cases shared by the test suite and the
//!   command-line `selftest` subcommand (`selftest`).
//!
//! All numerical policy constants live in [`tolerances`].

pub mod boundary;
pub mod catalog;
pub mod classify;
pub mod extensions;
pub mod herglotz_core;
pub(crate) mod ladders;
pub mod lft;
pub mod matrix_kernel;
pub mod measures;
pub(crate) mod quad;
pub mod tolerances;

pub use matrix_kernel::{CMatrix, HermitianMatrix};
pub use num_complex::Complex64;
