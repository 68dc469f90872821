//! Weighted Cauchy–Riemann form `4∫|∂_z̄ v|² e^{2Bφ}` over `∫|v|² e^{2Bφ}`.
//!
//! Bilinear elements span each 2×2 block of cell centers that touches the
//! domain. Values at outside nodes are extrapolated linearly from their
//! inside neighbors so that they vanish at the boundary crossings; the
//! resulting form is a sum of squares and hence positive semidefinite.
//! Interior elements use 2×2 Gauss points; elements cut by the boundary use a
//! subcell midpoint rule restricted to points inside the domain.

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::form::{Gauge, MagneticForm};
use crate::error::{Error, Result};
use crate::geometry::RasterDomain;
use crate::linalg::CsrMatrix;
use crate::torsion::TorsionField;

/// `2Bφ_m` beyond which `e^{2Bφ}` overflows.
pub const WEIGHT_OVERFLOW: f64 = 700.0;
/// `2Bφ_m` beyond which double-precision weights lose accuracy.
pub const WEIGHT_ADVISORY: f64 = 20.0;

const CUT_SUBCELLS: usize = 8;

/// Expression of each grid node as a combination of unknowns.
pub(crate) struct NodeMap {
    nx: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl NodeMap {
    pub(crate) fn new(d: &RasterDomain) -> Self {
        let (_, number) = d.numbering();
        let geometry = d.spec.geometry();
        let (nx, ny) = (d.nx(), d.ny());
        let entries = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                if d.mask.cells[k] {
                    return vec![(number[k], 1.0)];
                }
                let (i, j) = ((k % nx) as isize, (k / nx) as isize);
                let mut neighbors = Vec::new();
                for dj in -1..=1isize {
                    for di in -1..=1isize {
                        let (a, b) = (i + di, j + dj);
                        if (di, dj) != (0, 0) && d.mask.get(a, b) {
                            let theta = d.crossing(&geometry, a as usize, b as usize, -di, -dj);
                            neighbors.push((number[b as usize * nx + a as usize], theta));
                        }
                    }
                }
                let total: f64 = neighbors.iter().map(|n| n.1).sum();
                neighbors
                    .into_iter()
                    .map(|(u, theta)| (u, -(1.0 - theta) / total))
                    .collect()
            })
            .collect();
        Self { nx, entries }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.entries[j * self.nx + i]
    }

    pub(crate) fn value(&self, i: usize, j: usize, unknowns: &[f64]) -> f64 {
        self.get(i, j).iter().map(|&(u, c)| c * unknowns[u]).sum()
    }
}

/// Assembles the torsion-gauge form from `tf` computed on the same raster.
pub fn assemble_torsion_gauge(
    d: &RasterDomain,
    field: f64,
    tf: &TorsionField,
) -> Result<MagneticForm> {
    if !(field >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "field strength must be non-negative, got {field}"
        )));
    }
    let exponent = 2.0 * field * tf.max_value;
    if exponent > WEIGHT_OVERFLOW {
        return Err(Error::WeightOverflow(exponent));
    }
    if exponent > WEIGHT_ADVISORY {
        warn!("2·B·φ_m = {exponent:.1} exceeds {WEIGHT_ADVISORY}; weights lose precision, prefer the radial solver");
    }
    let h = d.h();
    let (nx, ny) = (d.nx(), d.ny());
    let (interior, _) = d.numbering();
    let nodes = NodeMap::new(d);
    let phi: Vec<f64> = interior.iter().map(|&k| tf.field.values[k]).collect();
    let geometry = d.spec.geometry();

    let gauss = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
    let triplets: Vec<(usize, usize, Complex64)> = (0..ny - 1)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut local = Vec::new();
            let mut points = Vec::new();
            for i in 0..nx - 1 {
                let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
                let inside = corners.map(|(a, b)| d.mask.cells[b * nx + a]);
                if !inside.iter().any(|&c| c) {
                    continue;
                }
                points.clear();
                if inside.iter().all(|&c| c) {
                    for &a in &gauss {
                        for &b in &gauss {
                            points.push((a, b, 0.25));
                        }
                    }
                } else {
                    let origin = d.mask.center(i, j);
                    let w = 1.0 / (CUT_SUBCELLS * CUT_SUBCELLS) as f64;
                    for sb in 0..CUT_SUBCELLS {
                        for sa in 0..CUT_SUBCELLS {
                            let a = (sa as f64 + 0.5) / CUT_SUBCELLS as f64;
                            let b = (sb as f64 + 0.5) / CUT_SUBCELLS as f64;
                            if geometry.contains([origin[0] + a * h, origin[1] + b * h]) {
                                points.push((a, b, w));
                            }
                        }
                    }
                }
                if points.is_empty() {
                    continue;
                }
                let corner_phi = corners.map(|(a, b)| nodes.value(a, b, &phi));
                let mut element = [[Complex64::new(0.0, 0.0); 4]; 4];
                for &(a, b, wq) in &points {
                    let shape = [(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b];
                    let dxi = [-(1.0 - b), 1.0 - b, -b, b];
                    let deta = [-(1.0 - a), -a, 1.0 - a, a];
                    // 2∂_z̄ = ∂₁ + i∂₂ on the reference element; 1/h² from the gradients cancels the area h²
                    let grad = [0, 1, 2, 3].map(|p| Complex64::new(dxi[p], deta[p]));
                    let phi_q: f64 = (0..4).map(|p| shape[p] * corner_phi[p]).sum();
                    let weight = wq * (2.0 * field * phi_q).exp();
                    for p in 0..4 {
                        for q in 0..4 {
                            element[p][q] += grad[p].conj() * grad[q] * weight;
                        }
                    }
                }
                for p in 0..4 {
                    for q in 0..4 {
                        let v = element[p][q];
                        for &(up, cp) in nodes.get(corners[p].0, corners[p].1) {
                            for &(uq, cq) in nodes.get(corners[q].0, corners[q].1) {
                                local.push((up, uq, v * (cp * cq)));
                            }
                        }
                    }
                }
            }
            local
        })
        .collect();

    let mass = phi
        .iter()
        .map(|&p| h * h * (2.0 * field * p).exp())
        .collect();
    Ok(MagneticForm {
        stiffness: CsrMatrix::from_triplets(interior.len(), triplets),
        mass,
        gauge: Gauge::Torsion,
        field,
        coords: d.grid_coords(&interior),
        cells: interior,
        domain: d.spec.tag(),
        resolution: d.resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, DomainSpec};
    use crate::maglap::{assemble_landau, eigenvalues};
    use crate::torsion::solve_torsion_fd;

    #[test]
    fn zero_field_matches_landau() {
        let d = rasterize(&DomainSpec::rectangle(1.0).unwrap(), 64).unwrap();
        let tf = solve_torsion_fd(&d).unwrap();
        let t = eigenvalues(&assemble_torsion_gauge(&d, 0.0, &tf).unwrap(), 3).unwrap();
        let l = eigenvalues(&assemble_landau(&d, 0.0).unwrap(), 3).unwrap();
        for n in 1..=3 {
            assert!(
                (t.get(n) - l.get(n)).abs() < 0.02 * l.get(n),
                "{} {}",
                t.get(n),
                l.get(n)
            );
        }
    }

    #[test]
    fn form_is_hermitian_and_positive() {
        let d = rasterize(&DomainSpec::ellipse(1.5).unwrap(), 48).unwrap();
        let tf = solve_torsion_fd(&d).unwrap();
        let f = assemble_torsion_gauge(&d, 10.0, &tf).unwrap();
        assert!(f.stiffness.hermitian_defect() < 1e-12);
        assert!(f.mass.iter().all(|&m| m > 0.0));
        let v: Vec<Complex64> = (0..f.dim())
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        assert!(f.rayleigh_quotient(&v) > 0.0);
    }

    #[test]
    fn boundary_weights_are_near_one() {
        let d = rasterize(&DomainSpec::disk(1.0).unwrap(), 64).unwrap();
        let tf = solve_torsion_fd(&d).unwrap();
        let b = 10.0;
        let f = assemble_torsion_gauge(&d, b, &tf).unwrap();
        let h = d.h();
        for (u, &k) in f.cells.iter().enumerate() {
            let (i, j) = ((k % d.nx()) as isize, (k / d.nx()) as isize);
            if !(d.mask.get(i + 1, j)
                && d.mask.get(i - 1, j)
                && d.mask.get(i, j + 1)
                && d.mask.get(i, j - 1))
            {
                let w = f.mass[u] / (h * h);
                assert!((w - 1.0).abs() < 2.0 * b * h, "{w}");
            }
        }
    }

    #[test]
    fn overflow_is_rejected() {
        let d = rasterize(&DomainSpec::disk(1.0).unwrap(), 32).unwrap();
        let tf = solve_torsion_fd(&d).unwrap();
        assert!(matches!(
            assemble_torsion_gauge(&d, 5000.0, &tf),
            Err(Error::WeightOverflow(_))
        ));
    }
}
