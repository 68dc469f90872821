use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fewest samples accepted by [`fit_decay`].
pub const MIN_FIT_POINTS: usize = 5;

/// Exponential-decay fit `ln λ ≈ c + p ln B − s B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Decay rate `s` from the joint three-parameter fit.
    pub slope: f64,
    /// Power `p` from the joint fit.
    pub joint_exponent: f64,
    /// Slope of `ln(λ e^{2Bφ_m})` against `ln B`, i.e. `p` with `s` pinned at
    /// `2φ_m`.
    pub prefactor_exponent: f64,
    /// Root-mean-square residual of the joint fit in `ln λ`.
    pub residual: f64,
    /// Smallest and largest field strength used.
    pub window: [f64; 2],
}

fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> (DVector<f64>, f64) {
    let a = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .expect("SVD with both factors");
    let r = &a * &x - b;
    (x, (r.norm_squared() / rhs.len() as f64).sqrt())
}

/// Fits `(B, λ)` samples with `B > 0` and `λ > 0`.
pub fn fit_decay(values: &[(f64, f64)], phi_max: f64) -> Result<DecayFit> {
    if values.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs at least {MIN_FIT_POINTS} points, got {}",
            values.len()
        )));
    }
    if let Some(&(b, l)) = values.iter().find(|&&(b, l)| !(b > 0.0 && l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs B > 0 and λ > 0, got ({b}, {l})"
        )));
    }
    let logs: Vec<f64> = values.iter().map(|&(_, l)| l.ln()).collect();
    let joint: Vec<Vec<f64>> = values.iter().map(|&(b, _)| vec![1.0, b.ln(), -b]).collect();
    let (x, residual) = least_squares(&joint, &logs);
    let pinned: Vec<Vec<f64>> = values.iter().map(|&(b, _)| vec![1.0, b.ln()]).collect();
    let lifted: Vec<f64> = values
        .iter()
        .zip(&logs)
        .map(|(&(b, _), l)| l + 2.0 * b * phi_max)
        .collect();
    let (y, _) = least_squares(&pinned, &lifted);
    let lo = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let hi = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayFit {
        slope: x[2],
        joint_exponent: x[1],
        prefactor_exponent: y[1],
        residual,
        window: [lo, hi],
    })
}
