//! Lowest eigenpairs of a sparse Hermitian pencil `K v = λ M v` with
//! diagonal positive `M`.
//!
//! Block Krylov spaces of the inverted (shifted) operator are built from the
//! current block, reduced by Rayleigh–Ritz, and restarted with the lowest Ritz
//! vectors.

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cholesky::SparseCholesky;
use super::dense::hermitian_eigen;
use super::scalar::{axpy, dot, norm};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Residual target `‖K v − λ M v‖ / ‖M v‖`.
    pub tol: f64,
    pub krylov_steps: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            krylov_steps: 4,
            max_restarts: 60,
            seed: 0x5eed,
        }
    }
}

/// Converged eigenpairs, ascending. Vectors are M-orthonormal.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C>>,
    pub residuals: Vec<f64>,
    pub shift: f64,
}

fn orthonormalize_against(basis: &[Vec<C>], v: &mut [C]) -> f64 {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            axpy(-c, q, v);
        }
    }
    norm(v)
}

/// Lowest `n` eigenpairs of `K v = λ M v`. `ordering` is a fill-reducing
/// permutation (`perm[new] = old`) for the factorization.
pub fn lowest_eigenpairs(
    stiffness: &CsrMatrix<C>,
    mass: &[f64],
    n: usize,
    ordering: Option<Vec<usize>>,
    opts: &EigenOptions,
) -> Result<EigenPairs> {
    let dim = stiffness.n;
    let block = n + n.max(4);
    if n == 0 || 2 * block > dim {
        return Err(Error::InvalidArgument(format!(
            "cannot compute {n} eigenpairs of a {dim}-dimensional pencil (subspace {block})"
        )));
    }
    if mass.len() != dim || mass.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidArgument(
            "mass must be positive with one entry per unknown".into(),
        ));
    }
    let d: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let a = stiffness.scaled_symmetric(&d);

    let diag_scale = a.diagonal().iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let mut factor = None;
    let mut shift = 0.0;
    for s in [0.0, -1e-6, -1e-3, -1e-1, -1.0] {
        let sigma = s * diag_scale;
        match SparseCholesky::factor(&a.shifted(-sigma), ordering.clone()) {
            Ok(f) => {
                factor = Some(f);
                shift = sigma;
                break;
            }
            Err(Error::NotPositiveDefinite { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let factor = factor.ok_or_else(|| Error::EigenNonConvergence {
        residuals: vec![f64::NAN; n],
    })?;
    debug!(
        "eigen: dim = {dim}, shift = {shift:.3e}, nnz(L) = {}",
        factor.factor_nnz()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<C>> = Vec::with_capacity(block);
    while x.len() < block {
        let mut v: Vec<C> = (0..dim)
            .map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let nv = orthonormalize_against(&x, &mut v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|e| *e /= nv);
            x.push(v);
        }
    }

    let mut last_residuals = vec![f64::INFINITY; n];
    for restart in 0..opts.max_restarts {
        let mut basis: Vec<Vec<C>> = Vec::with_capacity(block * (opts.krylov_steps + 1));
        for mut v in x.drain(..) {
            let nv = orthonormalize_against(&basis, &mut v);
            if nv > 1e-10 {
                v.iter_mut().for_each(|e| *e /= nv);
                basis.push(v);
            }
        }
        let mut frontier_start = 0;
        for _ in 0..opts.krylov_steps {
            let frontier: Vec<Vec<C>> = basis[frontier_start..]
                .par_iter()
                .map(|v| factor.solve(v))
                .collect();
            frontier_start = basis.len();
            for mut w in frontier {
                let nw0 = norm(&w);
                let nw = orthonormalize_against(&basis, &mut w);
                if nw > 1e-13 * nw0 {
                    w.iter_mut().for_each(|e| *e /= nw);
                    basis.push(w);
                }
            }
        }
        let m = basis.len();
        let a_basis: Vec<Vec<C>> = basis.par_iter().map(|q| a.apply(q)).collect();
        let h = DMatrix::from_fn(m, m, |i, j| dot(&basis[i], &a_basis[j]));
        let (theta, y) = hermitian_eigen(&h);

        let ritz = |k: usize, src: &[Vec<C>]| -> Vec<C> {
            let mut out = vec![C::new(0.0, 0.0); dim];
            for (j, s) in src.iter().enumerate() {
                axpy(y[(j, k)], s, &mut out);
            }
            out
        };
        let keep = block.min(m);
        let pairs: Vec<(Vec<C>, f64)> = (0..keep)
            .into_par_iter()
            .map(|k| {
                let v = ritz(k, &basis);
                if k >= n {
                    return (v, f64::INFINITY);
                }
                // With x = M^{1/2} v: K v − λ M v = M^{1/2}(A x − λ x).
                let mut r = a.apply(&v);
                axpy(C::new(-theta[k], 0.0), &v, &mut r);
                let weighted = |u: &[C]| {
                    u.iter()
                        .zip(&d)
                        .map(|(e, s)| e.norm_sqr() / (s * s))
                        .sum::<f64>()
                        .sqrt()
                };
                let res = weighted(&r) / weighted(&v);
                (v, res)
            })
            .collect();
        let residuals: Vec<f64> = pairs.iter().take(n).map(|p| p.1).collect();
        debug!("eigen restart {restart}: dim(V) = {m}, residuals {residuals:?}");
        let done = residuals.iter().all(|&r| r <= opts.tol);
        if done {
            let values = theta.iter().take(n).copied().collect();
            let vectors = pairs
                .into_iter()
                .take(n)
                .map(|(v, _)| v.iter().zip(&d).map(|(&e, &s)| e * s).collect())
                .collect();
            return Ok(EigenPairs {
                values,
                vectors,
                residuals,
                shift,
            });
        }
        last_residuals = residuals;
        x = pairs.into_iter().map(|(v, _)| v).collect();
    }
    Err(Error::EigenNonConvergence {
        residuals: last_residuals,
    })
}
