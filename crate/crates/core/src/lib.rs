//! Spectral geometry of planar domains in a uniform magnetic field.
//!
//! The crate computes torsion functions, eigenvalues of the magnetic
//! Dirichlet Laplacian shifted by the field strength, variational bounds for
//! the positive eigenvalues of the magnetic Dirac operator with infinite-mass
//! boundary conditions, and the Fraenkel asymmetry of rasterized domains, and
//! checks the inequalities relating these quantities.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dirac;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod maglap;
pub mod special;
pub mod torsion;
pub mod verify;

pub use error::{Error, Result};
