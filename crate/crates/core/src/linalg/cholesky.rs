//! Up-looking sparse Cholesky factorization `P A Pᵀ = L Lᴴ`.

use log::debug;

use super::ordering::invert;
use super::scalar::{norm, Scalar};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Sparse Cholesky factor with its symmetric permutation.
#[derive(Debug, Clone)]
pub struct SparseCholesky<T> {
    n: usize,
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// Column pointers of `L`; the diagonal is the first entry of each column.
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<T>,
}

/// Upper triangle of `P A Pᵀ` in compressed-column form.
struct UpperCsc<T> {
    cp: Vec<usize>,
    ri: Vec<usize>,
    vx: Vec<T>,
}

fn permuted_upper<T: Scalar>(a: &CsrMatrix<T>, perm: &[usize], inv: &[usize]) -> UpperCsc<T> {
    let mut cp = vec![0usize; a.n + 1];
    let mut ri = Vec::with_capacity(a.nnz() / 2 + a.n);
    let mut vx = Vec::with_capacity(a.nnz() / 2 + a.n);
    let mut column: Vec<(usize, T)> = Vec::new();
    for k in 0..a.n {
        // column k of the Hermitian matrix is the conjugate of row k
        column.clear();
        column.extend(
            a.row(perm[k])
                .map(|(c, v)| (inv[c], v.conj()))
                .filter(|&(i, _)| i <= k),
        );
        column.sort_unstable_by_key(|&(i, _)| i);
        for &(i, v) in &column {
            ri.push(i);
            vx.push(v);
        }
        cp[k + 1] = ri.len();
    }
    UpperCsc { cp, ri, vx }
}

fn elimination_tree<T>(a: &UpperCsc<T>, n: usize) -> Vec<usize> {
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for k in 0..n {
        for &row in &a.ri[a.cp[k]..a.cp[k + 1]] {
            let mut i = row;
            while i != NONE && i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == NONE {
                    parent[i] = k;
                }
                i = next;
            }
        }
    }
    parent
}

/// Nonzero pattern of row `k` of `L` in topological order, written to
/// `stack[top..]`; returns `top`.
fn ereach<T>(
    a: &UpperCsc<T>,
    k: usize,
    parent: &[usize],
    flag: &mut [usize],
    stack: &mut [usize],
) -> usize {
    let n = parent.len();
    let mut top = n;
    flag[k] = k;
    for &row in &a.ri[a.cp[k]..a.cp[k + 1]] {
        let mut i = row;
        if i > k {
            continue;
        }
        let mut len = 0;
        while flag[i] != k {
            stack[len] = i;
            len += 1;
            flag[i] = k;
            i = parent[i];
        }
        while len > 0 {
            top -= 1;
            len -= 1;
            stack[top] = stack[len];
        }
    }
    top
}

impl<T: Scalar> SparseCholesky<T> {
    /// Factors a Hermitian positive definite matrix under the ordering
    /// `perm[new] = old` (identity when `None`).
    pub fn factor(a: &CsrMatrix<T>, perm: Option<Vec<usize>>) -> Result<Self> {
        let n = a.n;
        let perm = perm.unwrap_or_else(|| (0..n).collect());
        let inv = invert(&perm);
        let upper = permuted_upper(a, &perm, &inv);
        let parent = elimination_tree(&upper, n);

        let mut flag = vec![NONE; n];
        let mut stack = vec![0usize; n];
        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = ereach(&upper, k, &parent, &mut flag, &mut stack);
            for &j in &stack[top..] {
                counts[j] += 1;
            }
        }
        let mut lp = vec![0usize; n + 1];
        for j in 0..n {
            lp[j + 1] = lp[j] + counts[j];
        }
        let nnz = lp[n];
        debug!("cholesky: n = {n}, nnz(L) = {nnz}");
        let mut li = vec![0usize; nnz];
        let mut lx = vec![T::zero(); nnz];
        let mut next = lp[..n].to_vec();
        let mut x = vec![T::zero(); n];
        flag.fill(NONE);

        for k in 0..n {
            let top = ereach(&upper, k, &parent, &mut flag, &mut stack);
            for p in upper.cp[k]..upper.cp[k + 1] {
                x[upper.ri[p]] = upper.vx[p];
            }
            let mut d = x[k].re();
            x[k] = T::zero();
            for &j in &stack[top..] {
                let lkj = x[j].scale(1.0 / lx[lp[j]].re());
                x[j] = T::zero();
                for p in lp[j] + 1..next[j] {
                    let i = li[p];
                    x[i] -= lx[p] * lkj;
                }
                d -= lkj.abs2();
                let p = next[j];
                next[j] += 1;
                li[p] = k;
                lx[p] = lkj.conj();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    row: perm[k],
                    pivot: d,
                });
            }
            let p = next[k];
            next[k] += 1;
            li[p] = k;
            lx[p] = T::from_real(d.sqrt());
        }
        Ok(Self {
            n,
            perm,
            lp,
            li,
            lx,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn factor_nnz(&self) -> usize {
        self.lx.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        for j in 0..n {
            let start = self.lp[j];
            let yj = y[j].scale(1.0 / self.lx[start].re());
            y[j] = yj;
            for p in start + 1..self.lp[j + 1] {
                y[self.li[p]] -= self.lx[p] * yj;
            }
        }
        for j in (0..n).rev() {
            let start = self.lp[j];
            let mut s = y[j];
            for p in start + 1..self.lp[j + 1] {
                s -= self.lx[p].conj() * y[self.li[p]];
            }
            y[j] = s.scale(1.0 / self.lx[start].re());
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }

    /// Solves `A x = b` and refines until `‖b − A x‖ ≤ tol·‖b‖`; returns the
    /// solution and the final relative residual.
    pub fn solve_refined(
        &self,
        a: &CsrMatrix<T>,
        b: &[T],
        tol: f64,
        max_steps: usize,
    ) -> (Vec<T>, f64) {
        let bnorm = norm(b).max(f64::MIN_POSITIVE);
        let mut x = self.solve(b);
        let mut r = vec![T::zero(); self.n];
        let mut rel = f64::INFINITY;
        for _ in 0..=max_steps {
            a.mul_vec(&x, &mut r);
            for (ri, &bi) in r.iter_mut().zip(b) {
                *ri = bi - *ri;
            }
            rel = norm(&r) / bnorm;
            if rel <= tol {
                break;
            }
            let dx = self.solve(&r);
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
        }
        (x, rel)
    }
}
