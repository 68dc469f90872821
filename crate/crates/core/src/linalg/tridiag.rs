//! Eigenvalues of real symmetric tridiagonal matrices by Sturm bisection.

/// Number of eigenvalues strictly below `x`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0_f64;
    for k in 0..diag.len() {
        let coupling = if k == 0 {
            0.0
        } else {
            off[k - 1] * off[k - 1] / q
        };
        q = diag[k] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (diag[k].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues, ascending. `off` holds the `n − 1`
/// off-diagonal entries.
pub fn smallest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length must be n − 1");
    let k = k.min(n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    (0..k)
        .map(|index| {
            let (mut a, mut b) = (lo - 1e-12 * width, hi + 1e-12 * width);
            while b - a > 4.0 * f64::EPSILON * (a.abs() + b.abs()) + f64::MIN_POSITIVE {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(diag, off, mid) > index {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn second_difference_matrix() {
        let n = 100;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let ev = smallest_eigenvalues(&diag, &off, 4);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-13, "{e} {exact}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let ev = smallest_eigenvalues(&[3.0, -1.0, 2.0], &[0.0, 0.0], 3);
        assert!(
            (ev[0] + 1.0).abs() < 1e-14
                && (ev[1] - 2.0).abs() < 1e-14
                && (ev[2] - 3.0).abs() < 1e-14
        );
    }
}
