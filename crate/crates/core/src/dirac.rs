//! Two-sided bounds for the positive eigenvalues of the magnetic Dirac
//! operator with infinite-mass boundary conditions.
//!
//! Upper bounds restrict the min-max quotient to the magnetic Hardy space
//! spanned by `e^{Bφ} z^k`, on which the Cauchy–Riemann part vanishes and the
//! quotient reduces to a ratio of boundary and interior norms. Lower bounds
//! are analytic.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, RasterDomain};
use crate::linalg::{generalized_hermitian_eigenvalues, hermitian_eigen};
use crate::maglap::WEIGHT_OVERFLOW;
use crate::torsion::TorsionField;

type C = Complex64;

/// Fewest boundary samples accepted.
pub const MIN_BOUNDARY_SAMPLES: usize = 512;

/// Gram condition numbers above this trigger a warning.
pub const GRAM_CONDITION_ADVISORY: f64 = 1e12;

/// Relative pivot floor for the interior Gram factorization.
const PIVOT_FLOOR: f64 = 1e-13;

/// Sampled smooth closed boundary, counter-clockwise.
///
/// `points` has one more entry than there are distinct samples: the last
/// point repeats the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricBoundary {
    pub points: Vec<Point>,
    /// Outward unit normals.
    pub normals: Vec<Point>,
    /// Trapezoid arc-length weights; they sum to the perimeter.
    pub weights: Vec<f64>,
}

impl ParametricBoundary {
    /// Samples the boundary of a disk, ellipse or perturbed disk at
    /// `max(samples, MIN_BOUNDARY_SAMPLES)` equispaced parameter values.
    pub fn from_spec(spec: &DomainSpec, samples: usize) -> Result<Self> {
        if !spec.is_smooth() {
            return Err(Error::Unsupported(format!(
                "Dirac bounds need a smooth boundary; {spec} has corners"
            )));
        }
        let m = samples.max(MIN_BOUNDARY_SAMPLES);
        let dt = 2.0 * PI / m as f64;
        let mut points = Vec::with_capacity(m + 1);
        let mut normals = Vec::with_capacity(m + 1);
        let mut weights = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let t = if k == m { 0.0 } else { k as f64 * dt };
            let (p, tangent) = spec
                .smooth_boundary(t)
                .ok_or_else(|| Error::Unsupported(format!("{spec} has no parametrization")))?;
            let speed = tangent[0].hypot(tangent[1]);
            points.push(p);
            normals.push([tangent[1] / speed, -tangent[0] / speed]);
            let end = k == 0 || k == m;
            weights.push(if end { 0.5 } else { 1.0 } * speed * dt);
        }
        Ok(Self {
            points,
            normals,
            weights,
        })
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Number of distinct samples.
    pub fn samples(&self) -> usize {
        self.points.len() - 1
    }
}

/// Interior and boundary Gram matrices of the basis `e^{Bφ} ((z − z₀)/ρ)^k`,
/// `k = 0..=K`, with `z₀` the torsion maximizer and `ρ` the largest boundary
/// distance from it.
#[derive(Debug, Clone)]
pub struct HardyGrams {
    pub boundary_gram: DMatrix<C>,
    pub interior_gram: DMatrix<C>,
    pub field: f64,
    pub center: Point,
    pub scale: f64,
    /// Condition number of the interior Gram.
    pub condition: f64,
}

impl HardyGrams {
    /// `K + 1`.
    pub fn basis_size(&self) -> usize {
        self.interior_gram.nrows()
    }
}

fn powers(z: C, count: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(count);
    let mut p = C::new(1.0, 0.0);
    for _ in 0..count {
        out.push(p);
        p *= z;
    }
    out
}

fn accumulate(gram: &mut DMatrix<C>, basis: &[C], weight: f64) {
    let m = basis.len();
    for k in 0..m {
        for j in 0..=k {
            gram[(j, k)] += basis[j].conj() * basis[k] * weight;
        }
    }
}

fn hermitian_fill(gram: &mut DMatrix<C>) {
    for k in 0..gram.ncols() {
        for j in k + 1..gram.nrows() {
            gram[(j, k)] = gram[(k, j)].conj();
        }
    }
}

fn condition_number(gram: &DMatrix<C>) -> f64 {
    // Jacobi scaling first: the monomials differ in norm by orders of magnitude.
    let d: Vec<f64> = (0..gram.nrows())
        .map(|i| 1.0 / gram[(i, i)].re.sqrt())
        .collect();
    let scaled = DMatrix::from_fn(gram.nrows(), gram.ncols(), |i, j| {
        gram[(i, j)] * (d[i] * d[j])
    });
    let (values, _) = hermitian_eigen(&scaled);
    let lo = values.first().copied().unwrap_or(0.0);
    let hi = values.last().copied().unwrap_or(0.0);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Assembles the Hardy-space Grams. Interior integrals are cell sums over the
/// raster; boundary integrals use the trapezoid weights of `pb`, where the
/// weight `e^{2Bφ}` is one because the torsion function vanishes there.
pub fn hardy_basis_grams(
    d: &RasterDomain,
    pb: &ParametricBoundary,
    tf: &TorsionField,
    field: f64,
    k_max: usize,
) -> Result<HardyGrams> {
    if !(field >= 0.0) || !field.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "field strength must be non-negative, got {field}"
        )));
    }
    let m = k_max + 1;
    if pb.samples() < 16 * m {
        return Err(Error::InvalidArgument(format!(
            "{} boundary samples cannot resolve {m} basis functions (need {})",
            pb.samples(),
            16 * m
        )));
    }
    let exponent = 2.0 * field * tf.max_value;
    if exponent > WEIGHT_OVERFLOW {
        return Err(Error::WeightOverflow(exponent));
    }
    let center = tf.max_location;
    let scale = pb
        .points
        .iter()
        .map(|p| (p[0] - center[0]).hypot(p[1] - center[1]))
        .fold(0.0, f64::max);
    let to_z = |p: Point| C::new((p[0] - center[0]) / scale, (p[1] - center[1]) / scale);

    let mut boundary_gram = DMatrix::<C>::zeros(m, m);
    for (p, &w) in pb.points.iter().zip(&pb.weights) {
        accumulate(&mut boundary_gram, &powers(to_z(*p), m), w);
    }
    hermitian_fill(&mut boundary_gram);

    let mask = &d.mask;
    let cell_area = mask.h * mask.h;
    let mut interior_gram = DMatrix::<C>::zeros(m, m);
    for j in 0..mask.ny {
        for i in 0..mask.nx {
            if mask.cells[mask.index(i, j)] {
                let w = cell_area * (2.0 * field * tf.field.get(i, j)).exp();
                accumulate(&mut interior_gram, &powers(to_z(mask.center(i, j)), m), w);
            }
        }
    }
    hermitian_fill(&mut interior_gram);

    let condition = condition_number(&interior_gram);
    if condition > GRAM_CONDITION_ADVISORY {
        warn!("interior Gram condition number {condition:.2e} at K = {k_max}; pivoted factorization drops dependent directions, consider a smaller K");
    }
    Ok(HardyGrams {
        boundary_gram,
        interior_gram,
        field,
        center,
        scale,
        condition,
    })
}

/// The `n` lowest eigenvalues of `boundary_gram v = λ interior_gram v`,
/// ascending. Each is an upper bound for the `n`-th positive Dirac eigenvalue.
pub fn dirac_upper_bounds(g: &HardyGrams, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > g.basis_size() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= K + 1 = {}, got {n}",
            g.basis_size()
        )));
    }
    let values = generalized_hermitian_eigenvalues(&g.boundary_gram, &g.interior_gram, PIVOT_FLOOR);
    if values.len() < n {
        return Err(Error::Unsupported(format!(
            "interior Gram has numerical rank {} < {n}; reduce K",
            values.len()
        )));
    }
    Ok(values.into_iter().take(n).collect())
}

/// `√(2π/area)·e^{−2B·phi_max}`, a lower bound for the first positive Dirac
/// eigenvalue.
pub fn dirac_lower_bound(area: f64, phi_max: f64, field: f64) -> f64 {
    debug_assert!(area > 0.0 && phi_max > 0.0 && field >= 0.0);
    (2.0 * PI / area).sqrt() * (-2.0 * field * phi_max).exp()
}

/// Nonlinear min-max quotient `(b + √(b² + 4ad)) / (2a)` for boundary norm
/// `b`, interior norm `a` and Cauchy–Riemann norm `d`, all squared.
pub fn minmax_quotient(boundary_norm2: f64, interior_norm2: f64, dbar_norm2: f64) -> Result<f64> {
    if !(interior_norm2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "interior norm must be positive, got {interior_norm2}"
        )));
    }
    if !(boundary_norm2 >= 0.0 && dbar_norm2 >= 0.0) {
        return Err(Error::InvalidArgument("norms must be non-negative".into()));
    }
    let b = boundary_norm2;
    Ok((b + (b * b + 4.0 * interior_norm2 * dbar_norm2).sqrt()) / (2.0 * interior_norm2))
}

/// One row of a bound table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracBound {
    pub domain: String,
    #[serde(rename = "B")]
    pub field: f64,
    #[serde(rename = "K")]
    pub basis_degree: usize,
    pub n: usize,
    pub upper: f64,
    /// Analytic lower bound; only available for `n = 1`.
    pub lower: Option<f64>,
}

/// Upper bounds for `n = 1..=n_max` and the analytic lower bound at `n = 1`.
pub fn dirac_bounds(
    d: &RasterDomain,
    tf: &TorsionField,
    field: f64,
    k_max: usize,
    n_max: usize,
) -> Result<Vec<DiracBound>> {
    let pb = ParametricBoundary::from_spec(&d.spec, 16 * (k_max + 1))?;
    let g = hardy_basis_grams(d, &pb, tf, field, k_max)?;
    let upper = dirac_upper_bounds(&g, n_max)?;
    let lower = dirac_lower_bound(d.area(), tf.max_value, field);
    Ok(upper
        .into_iter()
        .enumerate()
        .map(|(i, upper)| DiracBound {
            domain: d.spec.tag(),
            field,
            basis_degree: k_max,
            n: i + 1,
            upper,
            lower: (i == 0).then_some(lower),
        })
        .collect())
}
