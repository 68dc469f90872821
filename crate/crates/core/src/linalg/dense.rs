//! Small dense Hermitian problems.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, ascending, with eigenvectors as columns.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let sym = (a + a.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(a.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Diagonally pivoted Cholesky `B[p, p] ≈ L Lᴴ`, stopped once the largest
/// remaining pivot falls below `rel_tol` times the largest diagonal entry.
/// Returns the pivot order and the `r × r` leading factor.
pub fn pivoted_cholesky(b: &DMatrix<Complex64>, rel_tol: f64) -> (Vec<usize>, DMatrix<Complex64>) {
    let m = b.nrows();
    let mut work = b.clone();
    let mut perm: Vec<usize> = (0..m).collect();
    let scale = (0..m).map(|i| work[(i, i)].re).fold(0.0, f64::max);
    let mut l = DMatrix::<Complex64>::zeros(m, m);
    let mut rank = 0;
    for k in 0..m {
        let (piv, best) =
            (k..m)
                .map(|i| (i, work[(i, i)].re))
                .fold(
                    (k, f64::NEG_INFINITY),
                    |acc, c| if c.1 > acc.1 { c } else { acc },
                );
        if !(best > rel_tol * scale) {
            break;
        }
        work.swap_rows(k, piv);
        work.swap_columns(k, piv);
        l.swap_rows(k, piv);
        perm.swap(k, piv);
        let d = best.sqrt();
        l[(k, k)] = Complex64::new(d, 0.0);
        for i in k + 1..m {
            l[(i, k)] = work[(i, k)] / d;
        }
        for j in k + 1..m {
            for i in k + 1..m {
                let update = l[(i, k)] * l[(j, k)].conj();
                work[(i, j)] -= update;
            }
        }
        rank = k + 1;
    }
    (perm, l.view((0, 0), (rank, rank)).into_owned())
}

/// Eigenvalues of `A v = λ B v` for Hermitian `A` and Hermitian positive
/// semidefinite `B`, restricted to the span of the basis vectors retained
/// by the pivoted factorization of `B`. Ascending.
pub fn generalized_hermitian_eigenvalues(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    rel_tol: f64,
) -> Vec<f64> {
    let (perm, l) = pivoted_cholesky(b, rel_tol);
    let r = l.nrows();
    if r == 0 {
        return Vec::new();
    }
    let ar = DMatrix::from_fn(r, r, |i, j| a[(perm[i], perm[j])]);
    let linv = l
        .solve_lower_triangular(&DMatrix::identity(r, r))
        .expect("pivots are positive");
    let c = &linv * ar * linv.adjoint();
    hermitian_eigen(&c).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn generalized_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), c(9.0)]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(3.0)]));
        let ev = generalized_hermitian_eigenvalues(&a, &b, 1e-12);
        assert!((ev[0] - 2.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_mass_is_truncated() {
        let b = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(2.0)]);
        let ev = generalized_hermitian_eigenvalues(&a, &b, 1e-12);
        assert_eq!(ev.len(), 1);
        assert!((ev[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigen_complex() {
        let i = Complex64::new(0.0, 1.0);
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0), i, -i, c(2.0)]);
        let (v, _) = hermitian_eigen(&a);
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
    }
}
