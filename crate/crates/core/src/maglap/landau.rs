//! Landau gauge `A = (−B x₂, 0)` with Peierls link phases.

use log::warn;
use num_complex::Complex64;

use super::form::{Gauge, MagneticForm};
use crate::error::{Error, Result};
use crate::geometry::RasterDomain;
use crate::linalg::CsrMatrix;

/// Phase `∫ A·dl` along the link leaving `(x, y)` by `(di·h, dj·h)`.
pub fn link_phase(field: f64, y: f64, h: f64, di: isize, _dj: isize) -> f64 {
    -field * y * h * di as f64
}

/// Shifted magnetic Laplacian `−(∇ − iA)² − B` on the five-point stencil.
///
/// The hop to a neighbor carries `exp(−i∫A·dl)`, so every plaquette
/// accumulates the flux `B h²`. Links leaving the domain use the
/// boundary-crossing distance on the diagonal, as for the torsion system.
/// Stiffness and mass carry the cell area `h²`.
pub fn assemble_landau(d: &RasterDomain, field: f64) -> Result<MagneticForm> {
    if !(field >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "field strength must be non-negative, got {field}"
        )));
    }
    let h = d.h();
    if field * h * h > 0.5 {
        warn!(
            "flux per plaquette B·h² = {:.3} exceeds 0.5; refine the grid",
            field * h * h
        );
    }
    let (interior, number) = d.numbering();
    let geometry = d.spec.geometry();
    let nx = d.nx();
    let mut triplets = Vec::with_capacity(5 * interior.len());
    for (row, &k) in interior.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let y = d.mask.center(i, j)[1];
        let mut diag = -field * h * h;
        for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
            let (a, b) = (i as isize + di, j as isize + dj);
            if d.mask.get(a, b) {
                diag += 1.0;
                let theta = link_phase(field, y, h, di, dj);
                triplets.push((
                    row,
                    number[b as usize * nx + a as usize],
                    -Complex64::from_polar(1.0, -theta),
                ));
            } else {
                diag += 1.0 / d.crossing(&geometry, i, j, di, dj);
            }
        }
        triplets.push((row, row, Complex64::new(diag, 0.0)));
    }
    Ok(MagneticForm {
        stiffness: CsrMatrix::from_triplets(interior.len(), triplets),
        mass: vec![h * h; interior.len()],
        gauge: Gauge::Landau,
        field,
        coords: d.grid_coords(&interior),
        cells: interior,
        domain: d.spec.tag(),
        resolution: d.resolution,
    })
}
