//! Sparse and dense linear algebra used by the discretizations.

mod cg;
mod cholesky;
mod dense;
mod eigen;
mod ordering;
mod scalar;
mod sparse;
mod tridiag;

pub use cg::conjugate_gradient;
pub use cholesky::SparseCholesky;
pub use dense::{generalized_hermitian_eigenvalues, hermitian_eigen, pivoted_cholesky};
pub use eigen::{lowest_eigenpairs, EigenOptions, EigenPairs};
pub use ordering::{invert, nested_dissection};
pub use scalar::{axpy, dot, norm, Scalar};
pub use sparse::CsrMatrix;
pub use tridiag::{count_below, smallest_eigenvalues};
