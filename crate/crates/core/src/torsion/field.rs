//! Torsion function on a raster: finite differences and closed forms.

use std::f64::consts::PI;

use log::debug;
use serde::{Deserialize, Serialize};

use super::series::{torsion_disk_max, torsion_rect_series};
use crate::error::{Error, Result};
use crate::geometry::{DomainKind, Point, RasterDomain, ScalarField};
use crate::linalg::{conjugate_gradient, nested_dissection, CsrMatrix, SparseCholesky};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionMethod {
    Fd,
    DiskClosedForm,
    RectangleSeries,
}

/// Linear solver for the finite-difference torsion system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoissonSolver {
    /// Nested-dissection Cholesky with iterative refinement.
    #[default]
    Cholesky,
    ConjugateGradient,
}

/// Target for `max |Δ_h φ + 1|` over inside cells.
pub const RESIDUAL_TARGET: f64 = 1e-10;

/// Torsion function sampled on a raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionField {
    pub field: ScalarField,
    /// Largest grid value.
    pub max_value: f64,
    /// Maximizer refined by a quadratic fit through the 3×3 neighborhood of
    /// the largest grid value.
    pub max_location: Point,
    pub method: TorsionMethod,
    /// `max |Δ_h φ + 1|` for the finite-difference field, zero otherwise.
    pub residual: f64,
}

impl TorsionField {
    fn from_field(field: ScalarField, method: TorsionMethod, residual: f64) -> Self {
        let (max_value, i, j) = field.argmax();
        let max_location = refine_maximum(&field, i, j);
        Self {
            field,
            max_value,
            max_location,
            method,
            residual,
        }
    }

    /// Value at an arbitrary point by bilinear interpolation of cell values.
    pub fn sample(&self, p: Point) -> f64 {
        let f = &self.field;
        let u = (p[0] - f.origin[0]) / f.h;
        let v = (p[1] - f.origin[1]) / f.h;
        let (i0, j0) = (u.floor(), v.floor());
        if i0 < 0.0 || j0 < 0.0 || i0 + 1.0 >= f.nx as f64 || j0 + 1.0 >= f.ny as f64 {
            return 0.0;
        }
        let (s, t) = (u - i0, v - j0);
        let (i, j) = (i0 as usize, j0 as usize);
        (1.0 - s) * (1.0 - t) * f.get(i, j)
            + s * (1.0 - t) * f.get(i + 1, j)
            + (1.0 - s) * t * f.get(i, j + 1)
            + s * t * f.get(i + 1, j + 1)
    }
}

fn refine_maximum(f: &ScalarField, i: usize, j: usize) -> Point {
    let center = [f.origin[0] + i as f64 * f.h, f.origin[1] + j as f64 * f.h];
    if i == 0 || j == 0 || i + 1 >= f.nx || j + 1 >= f.ny {
        return center;
    }
    let offset = |minus: f64, mid: f64, plus: f64| {
        let curvature = plus - 2.0 * mid + minus;
        if curvature < 0.0 {
            (0.5 * (minus - plus) / curvature).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    };
    let v = f.get(i, j);
    let dx = offset(f.get(i - 1, j), v, f.get(i + 1, j));
    let dy = offset(f.get(i, j - 1), v, f.get(i, j + 1));
    [center[0] + dx * f.h, center[1] + dy * f.h]
}

/// Sparse system `h²·(−Δ_h)` on the inside cells.
///
/// Links to outside cells use the distance to the boundary crossing, which
/// replaces the neighbor weight `1/h²` by `1/(θh²)` on the diagonal and keeps
/// the matrix symmetric.
pub(crate) fn dirichlet_laplacian(d: &RasterDomain) -> (CsrMatrix<f64>, Vec<usize>, Vec<usize>) {
    let (interior, number) = d.numbering();
    let geometry = d.spec.geometry();
    let nx = d.nx();
    let mut triplets = Vec::with_capacity(5 * interior.len());
    for (row, &k) in interior.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let mut diag = 0.0;
        for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
            let (a, b) = (i as isize + di, j as isize + dj);
            if d.mask.get(a, b) {
                diag += 1.0;
                triplets.push((row, number[b as usize * nx + a as usize], -1.0));
            } else {
                diag += 1.0 / d.crossing(&geometry, i, j, di, dj);
            }
        }
        triplets.push((row, row, diag));
    }
    (
        CsrMatrix::from_triplets(interior.len(), triplets),
        interior,
        number,
    )
}

/// Finite-difference torsion function with the default solver.
pub fn solve_torsion_fd(d: &RasterDomain) -> Result<TorsionField> {
    solve_torsion_fd_with(d, PoissonSolver::default())
}

pub fn solve_torsion_fd_with(d: &RasterDomain, solver: PoissonSolver) -> Result<TorsionField> {
    let (a, interior, _) = dirichlet_laplacian(d);
    let h2 = d.h() * d.h();
    let rhs = vec![h2; interior.len()];
    // residual of Δ_h φ + 1 in physical units
    let residual_inf = |x: &[f64]| {
        a.apply(x)
            .iter()
            .zip(&rhs)
            .map(|(ax, b)| ((ax - b) / h2).abs())
            .fold(0.0, f64::max)
    };
    let (solution, residual) = match solver {
        PoissonSolver::Cholesky => {
            let factor =
                SparseCholesky::factor(&a, Some(nested_dissection(&d.grid_coords(&interior))))?;
            let mut x = factor.solve(&rhs);
            let mut res = residual_inf(&x);
            for _ in 0..5 {
                if res <= RESIDUAL_TARGET {
                    break;
                }
                let r: Vec<f64> = rhs.iter().zip(a.apply(&x)).map(|(b, ax)| b - ax).collect();
                for (xi, dx) in x.iter_mut().zip(factor.solve(&r)) {
                    *xi += dx;
                }
                res = residual_inf(&x);
            }
            (x, res)
        }
        PoissonSolver::ConjugateGradient => {
            // relative 2-norm target strict enough for the max-norm target
            let (x, iterations) = conjugate_gradient(&a, &rhs, 1e-14, 20 * interior.len())?;
            debug!("torsion cg: {iterations} iterations");
            let res = residual_inf(&x);
            (x, res)
        }
    };
    if residual > RESIDUAL_TARGET {
        return Err(Error::LinearSolve {
            iterations: 0,
            residual,
        });
    }
    let mut field = ScalarField::zeros_like(&d.mask);
    for (&k, &v) in interior.iter().zip(&solution) {
        field.values[k] = v;
    }
    Ok(TorsionField::from_field(field, TorsionMethod::Fd, residual))
}

/// Exact torsion function sampled on the raster, for centered-offset disks
/// and rectangles.
pub fn torsion_closed_form(d: &RasterDomain) -> Result<TorsionField> {
    let [ox, oy] = d.spec.offset;
    let mut field = ScalarField::zeros_like(&d.mask);
    let method = match d.spec.kind {
        DomainKind::Disk { area } => {
            let r2 = area / PI;
            fill(d, &mut field, |x, y| {
                0.25 * (r2 - (x - ox).powi(2) - (y - oy).powi(2))
            });
            TorsionMethod::DiskClosedForm
        }
        DomainKind::Rectangle { aspect } => {
            let (wx, wy) = (aspect, 1.0 / aspect);
            fill(d, &mut field, |x, y| {
                rectangle_torsion(x - ox, y - oy, wx, wy)
            });
            TorsionMethod::RectangleSeries
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no closed-form torsion function for {}",
                d.spec
            )))
        }
    };
    let mut tf = TorsionField::from_field(field, method, 0.0);
    // exact maximum at the center
    tf.max_location = [ox, oy];
    tf.max_value = match d.spec.kind {
        DomainKind::Disk { area } => torsion_disk_max(area),
        DomainKind::Rectangle { aspect } => torsion_rect_series(aspect, 200).value,
        _ => unreachable!(),
    };
    Ok(tf)
}

fn fill(d: &RasterDomain, field: &mut ScalarField, phi: impl Fn(f64, f64) -> f64) {
    for j in 0..d.ny() {
        for i in 0..d.nx() {
            let k = d.mask.index(i, j);
            if d.mask.cells[k] {
                let [x, y] = d.mask.center(i, j);
                field.values[k] = phi(x, y).max(0.0);
            }
        }
    }
}

/// Torsion function of `(−wx/2, wx/2) × (−wy/2, wy/2)` by the cosine series
/// in the shorter direction.
fn rectangle_torsion(x: f64, y: f64, wx: f64, wy: f64) -> f64 {
    let (long, short, s, t) = if wx >= wy {
        (wx, wy, x, y)
    } else {
        (wy, wx, y, x)
    };
    let mut v = 0.5 * (0.25 * short * short - t * t);
    for j in 0..200 {
        let k = (2 * j + 1) as f64;
        let c =
            4.0 * short * short / (PI.powi(3) * k.powi(3)) * if j % 2 == 0 { 1.0 } else { -1.0 };
        let e = k * PI / short;
        let ratio = (e * (s.abs() - 0.5 * long)).exp() * (1.0 + (-2.0 * e * s.abs()).exp())
            / (1.0 + (-e * long).exp());
        v -= c * ratio * (e * t).cos();
    }
    v
}
