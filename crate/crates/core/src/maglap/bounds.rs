//! Trial-space upper bound and the exponential lower bound for `λ_1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::torsion_gauge::assemble_torsion_gauge;
use crate::error::{Error, Result};
use crate::geometry::{boundary_distance, RasterDomain};
use crate::linalg::generalized_hermitian_eigenvalues;
use crate::special::dirichlet_disk_ground_state;
use crate::torsion::TorsionField;

/// Cutoff profile `χ(t) = min(t, 1)`.
fn cutoff(t: f64) -> f64 {
    t.min(1.0)
}

/// Upper bounds for `λ_1, …, λ_n` from the trial functions
/// `v_k = χ(B·dist) B^{(k+1)/2} z^k e^{−Bφ_m}`, `k < n`, with `z` centered
/// at the torsion maximizer, evaluated on the discrete torsion-gauge form.
/// Entry `j` is the largest pencil eigenvalue on `span{v_0, …, v_j}`.
pub fn trial_upper_bounds(
    d: &RasterDomain,
    tf: &TorsionField,
    field: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(field > 0.0) || field > d.resolution as f64 / 4.0 {
        return Err(Error::InvalidArgument(format!(
            "trial bound needs 0 < B ≤ resolution/4 = {}, got {field}",
            d.resolution as f64 / 4.0
        )));
    }
    let dist = boundary_distance(d);
    let form = assemble_torsion_gauge(d, field, tf)?;
    if !form.cells.iter().any(|&k| field * dist.values[k] >= 1.0) {
        return Err(Error::Unsupported(format!(
            "cutoff χ(B·dist) never reaches 1 on the grid at B = {field}"
        )));
    }
    let [cx, cy] = tf.max_location;
    let damping = (-field * tf.max_value).exp();
    let basis: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            let scale = field.powf(0.5 * (k as f64 + 1.0)) * damping;
            form.cells
                .iter()
                .map(|&cell| {
                    let [x, y] = d.mask.center(cell % d.nx(), cell / d.nx());
                    let z = Complex64::new(x - cx, y - cy);
                    z.powu(k as u32) * (cutoff(field * dist.values[cell]) * scale)
                })
                .collect()
        })
        .collect();
    let k_basis: Vec<Vec<Complex64>> = basis.iter().map(|v| form.stiffness.apply(v)).collect();
    let stiff = DMatrix::from_fn(n, n, |a, b| {
        basis[a]
            .iter()
            .zip(&k_basis[b])
            .map(|(p, q)| p.conj() * q)
            .sum()
    });
    let mass = DMatrix::from_fn(n, n, |a, b| {
        basis[a]
            .iter()
            .zip(&basis[b])
            .zip(&form.mass)
            .map(|((p, q), &m)| p.conj() * q * m)
            .sum()
    });
    Ok((1..=n)
        .map(|m| {
            let ev = generalized_hermitian_eigenvalues(
                &stiff.view((0, 0), (m, m)).into_owned(),
                &mass.view((0, 0), (m, m)).into_owned(),
                1e-14,
            );
            ev.last().copied().unwrap_or(f64::INFINITY)
        })
        .collect())
}

/// Upper bound for `λ_n` from the `n`-dimensional trial space.
pub fn trial_upper_bound(d: &RasterDomain, tf: &TorsionField, field: f64, n: usize) -> Result<f64> {
    Ok(trial_upper_bounds(d, tf, field, n)?[n - 1])
}

/// `π j₀,₁² / area · e^{−2B φ_m}`.
pub fn hs_lower_bound_value(area: f64, phi_max: f64, field: f64) -> f64 {
    dirichlet_disk_ground_state(area) * (-2.0 * field * phi_max).exp()
}

/// Exponential lower bound for `λ_1(Ω, B)` from the torsion maximum.
pub fn hs_lower_bound(d: &RasterDomain, tf: &TorsionField, field: f64) -> f64 {
    hs_lower_bound_value(d.area(), tf.max_value, field)
}
