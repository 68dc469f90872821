use super::scalar::{dot, norm, Scalar};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Jacobi-preconditioned conjugate gradients for a Hermitian positive
/// definite `a`. Stops when `‖b − A x‖ ≤ tol·‖b‖`; returns the iterate and
/// the iteration count.
pub fn conjugate_gradient<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<T>, usize)> {
    let n = a.n;
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d.re()).collect();
    let bnorm = norm(b);
    let mut x = vec![T::zero(); n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<T> = r
        .iter()
        .zip(&inv_diag)
        .map(|(&ri, &d)| ri.scale(d))
        .collect();
    let mut p = z.clone();
    let mut ap = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        let rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok((x, it));
        }
        a.mul_vec(&p, &mut ap);
        let alpha = rz.scale(1.0 / dot(&p, &ap).re());
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        for k in 0..n {
            z[k] = r[k].scale(inv_diag[k]);
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next.scale(1.0 / rz.re());
        rz = rz_next;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    let residual = norm(&r) / bnorm;
    if residual <= tol {
        Ok((x, max_iter))
    } else {
        Err(Error::LinearSolve {
            iterations: max_iter,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_system() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let b = vec![1.0; n];
        let (x, _) = conjugate_gradient(&a, &b, 1e-12, 200).unwrap();
        // continuous analogue: x_i = (i+1)(n-i)/2
        for (i, xi) in x.iter().enumerate() {
            let exact = ((i + 1) * (n - i)) as f64 / 2.0;
            assert!((xi - exact).abs() < 1e-8 * exact);
        }
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let a = CsrMatrix::from_triplets(
            3,
            vec![
                (0, 0, 1.0),
                (1, 1, 100.0),
                (2, 2, 1e4),
                (0, 1, 0.5),
                (1, 0, 0.5),
            ],
        );
        let r = conjugate_gradient(&a, &[1.0, 1.0, 1.0], 1e-30, 1);
        assert!(matches!(r, Err(Error::LinearSolve { iterations: 1, .. })));
    }
}
