use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::domain::{DomainSpec, Geometry, Point};
use crate::error::{Error, Result};

/// Minimum cells per unit length accepted by [`rasterize`].
pub const MIN_RESOLUTION: usize = 16;

/// Boundary crossings closer than this fraction of a link are moved out to
/// it, bounding the boundary-row diagonals by `1/(MIN_CROSSING·h²)`.
pub const MIN_CROSSING: f64 = 1e-3;

/// Empty cells kept around the bounding box so every inside cell has a full
/// 8-neighborhood.
const MARGIN: usize = 2;

/// Boolean grid of cell-center samples. Cell `(i, j)` has center
/// `origin + (i·h, j·h)`; storage is row-major in `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: Point,
    pub cells: Vec<bool>,
}

impl Mask {
    pub fn new(nx: usize, ny: usize, h: f64, origin: Point, cells: Vec<bool>) -> Self {
        assert_eq!(
            cells.len(),
            nx * ny,
            "mask storage does not match dimensions"
        );
        Self {
            nx,
            ny,
            h,
            origin,
            cells,
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Point {
        [
            self.origin[0] + i as f64 * self.h,
            self.origin[1] + j as f64 * self.h,
        ]
    }

    /// Membership with out-of-range cells treated as outside.
    #[inline]
    pub fn get(&self, i: isize, j: isize) -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < self.nx
            && (j as usize) < self.ny
            && self.cells[j as usize * self.nx + i as usize]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Cell-count area.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h * self.h
    }

    pub fn centroid(&self) -> Point {
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.cells[self.index(i, j)] {
                    let c = self.center(i, j);
                    sx += c[0];
                    sy += c[1];
                    n += 1;
                }
            }
        }
        if n == 0 {
            return self.origin;
        }
        [sx / n as f64, sy / n as f64]
    }

    /// Number of 4-connected components of the inside cells.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.cells.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.cells.len() {
            if !self.cells[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(k) = queue.pop_front() {
                let (i, j) = ((k % self.nx) as isize, (k / self.nx) as isize);
                for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let (a, b) = (i + di, j + dj);
                    if self.get(a, b) {
                        let q = self.index(a as usize, b as usize);
                        if !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        count
    }
}

/// A domain realized on a grid.
#[derive(Debug, Clone)]
pub struct RasterDomain {
    pub spec: DomainSpec,
    pub mask: Mask,
    /// Closed-form area, when the shape has one.
    pub area_exact: Option<f64>,
    /// Cells per unit length.
    pub resolution: usize,
}

impl RasterDomain {
    #[inline]
    pub fn h(&self) -> f64 {
        self.mask.h
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.mask.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.mask.ny
    }

    /// Area used by the functionals: exact when known, cell count otherwise.
    pub fn area(&self) -> f64 {
        self.area_exact.unwrap_or_else(|| self.mask.area())
    }

    /// Linear indices of the inside cells, in storage order.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.mask.cells.len())
            .filter(|&k| self.mask.cells[k])
            .collect()
    }

    /// Map from storage index to unknown number (`usize::MAX` outside).
    pub fn numbering(&self) -> (Vec<usize>, Vec<usize>) {
        let interior = self.interior();
        let mut number = vec![usize::MAX; self.mask.cells.len()];
        for (n, &k) in interior.iter().enumerate() {
            number[k] = n;
        }
        (interior, number)
    }

    /// Grid coordinates of the given storage indices.
    pub fn grid_coords(&self, indices: &[usize]) -> Vec<(i32, i32)> {
        indices
            .iter()
            .map(|&k| ((k % self.mask.nx) as i32, (k / self.mask.nx) as i32))
            .collect()
    }

    /// Fraction of the link from inside cell `(i, j)` toward the cell offset
    /// by `(di, dj)` at which the boundary is crossed, in `[MIN_CROSSING, 1]`.
    pub fn crossing(
        &self,
        geometry: &Geometry<'_>,
        i: usize,
        j: usize,
        di: isize,
        dj: isize,
    ) -> f64 {
        let a = self.mask.center(i, j);
        let b = [
            a[0] + di as f64 * self.mask.h,
            a[1] + dj as f64 * self.mask.h,
        ];
        geometry.crossing_fraction(a, b).clamp(MIN_CROSSING, 1.0)
    }
}

/// Grid-sampled real function aligned with a mask; zero outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: Point,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros_like(mask: &Mask) -> Self {
        Self {
            nx: mask.nx,
            ny: mask.ny,
            h: mask.h,
            origin: mask.origin,
            values: vec![0.0; mask.cells.len()],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Largest value and its cell.
    pub fn argmax(&self) -> (f64, usize, usize) {
        let (k, v) = self
            .values
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc },
            );
        (v, k % self.nx, k / self.nx)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Superlevel set `{v ≥ t}` restricted to `mask`.
    pub fn superlevel(&self, mask: &Mask, t: f64) -> Mask {
        let cells = self
            .values
            .iter()
            .zip(&mask.cells)
            .map(|(&v, &m)| m && v >= t)
            .collect();
        Mask::new(self.nx, self.ny, self.h, self.origin, cells)
    }
}

/// Rasterizes `spec` with `resolution` cells per unit length, cell-center
/// membership, grid lines aligned with the lower-left corner of the bounding
/// box.
pub fn rasterize(spec: &DomainSpec, resolution: usize) -> Result<RasterDomain> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow(resolution, MIN_RESOLUTION));
    }
    let h = 1.0 / resolution as f64;
    let [xmin, xmax, ymin, ymax] = spec.bounding_box();
    let cells_along = |len: f64| (len / h - 1e-9).ceil().max(1.0) as usize + 2 * MARGIN;
    let (nx, ny) = (cells_along(xmax - xmin), cells_along(ymax - ymin));
    let origin = [
        xmin + (0.5 - MARGIN as f64) * h,
        ymin + (0.5 - MARGIN as f64) * h,
    ];
    let geometry = spec.geometry();
    let mut cells = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let p = [origin[0] + i as f64 * h, origin[1] + j as f64 * h];
            cells[j * nx + i] = geometry.contains(p);
        }
    }
    let mask = Mask::new(nx, ny, h, origin, cells);
    if mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    let components = mask.components();
    if components != 1 {
        return Err(Error::DisconnectedMask { components });
    }
    Ok(RasterDomain {
        spec: spec.clone(),
        mask,
        area_exact: spec.analytic_area(),
        resolution,
    })
}

/// One-dimensional squared distance transform (Felzenszwalb–Huttenlocher).
fn edt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s =
                ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0 and the new parabola dominates everywhere
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                break;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

/// Distance from each inside cell to the complement of the mask.
///
/// Computed as the exact Euclidean distance to the nearest outside cell
/// center minus `h/2`, i.e. the distance to the nearest face of the
/// complement for grid-aligned boundaries. Zero outside the mask.
pub fn boundary_distance(d: &RasterDomain) -> ScalarField {
    mask_distance(&d.mask)
}

pub(crate) fn mask_distance(mask: &Mask) -> ScalarField {
    let (nx, ny) = (mask.nx, mask.ny);
    let big = ((nx + ny) * (nx + ny)) as f64;
    let mut g: Vec<f64> = mask
        .cells
        .iter()
        .map(|&c| if c { big } else { 0.0 })
        .collect();
    let n = nx.max(ny);
    let (mut f, mut out) = (vec![0.0; n], vec![0.0; n]);
    let (mut v, mut z) = (vec![0usize; n], vec![0.0; n + 1]);
    for j in 0..ny {
        f[..nx].copy_from_slice(&g[j * nx..(j + 1) * nx]);
        edt_1d(&f[..nx], &mut out[..nx], &mut v[..nx], &mut z[..nx + 1]);
        g[j * nx..(j + 1) * nx].copy_from_slice(&out[..nx]);
    }
    for i in 0..nx {
        for j in 0..ny {
            f[j] = g[j * nx + i];
        }
        edt_1d(&f[..ny], &mut out[..ny], &mut v[..ny], &mut z[..ny + 1]);
        for j in 0..ny {
            g[j * nx + i] = out[j];
        }
    }
    let h = mask.h;
    let values = g
        .iter()
        .zip(&mask.cells)
        .map(|(&d2, &inside)| if inside { (d2.sqrt() - 0.5) * h } else { 0.0 })
        .collect();
    ScalarField {
        nx,
        ny,
        h,
        origin: mask.origin,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_area_at_512() {
        let d = rasterize(&DomainSpec::rectangle(1.0).unwrap(), 512).unwrap();
        assert_relative_eq!(d.mask.area(), 1.0, epsilon = 0.01);
        assert_eq!(d.mask.count(), 512 * 512);
        assert_eq!(d.area_exact, Some(1.0));
    }

    #[test]
    fn unit_disk_area_at_512() {
        let d = rasterize(&DomainSpec::disk(1.0).unwrap(), 512).unwrap();
        assert_relative_eq!(d.mask.area(), 1.0, epsilon = 0.01);
    }

    #[test]
    fn rectangle_two_bounding_box() {
        let d = rasterize(&DomainSpec::rectangle(2.0).unwrap(), 256).unwrap();
        let (mut imin, mut imax, mut jmin, mut jmax) = (usize::MAX, 0, usize::MAX, 0);
        for j in 0..d.ny() {
            for i in 0..d.nx() {
                if d.mask.cells[d.mask.index(i, j)] {
                    imin = imin.min(i);
                    imax = imax.max(i);
                    jmin = jmin.min(j);
                    jmax = jmax.max(j);
                }
            }
        }
        let h = d.h();
        assert_relative_eq!((imax - imin + 1) as f64 * h, 2.0, epsilon = 1e-12);
        assert_relative_eq!((jmax - jmin + 1) as f64 * h, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn resolution_and_emptiness_checks() {
        let s = DomainSpec::disk(1.0).unwrap();
        assert!(matches!(
            rasterize(&s, 8),
            Err(Error::ResolutionTooLow(8, 16))
        ));
        let thin = DomainSpec::rectangle(200.0).unwrap();
        assert!(matches!(rasterize(&thin, 16), Err(Error::EmptyMask)));
    }

    #[test]
    fn disconnected_polygon_is_rejected() {
        // two lobes joined by a neck thinner than a cell
        let v = vec![
            [0.0, 0.0],
            [0.4, 0.0],
            [0.4, 0.185],
            [0.6, 0.185],
            [0.6, 0.0],
            [1.0, 0.0],
            [1.0, 0.4],
            [0.6, 0.4],
            [0.6, 0.195],
            [0.4, 0.195],
            [0.4, 0.4],
            [0.0, 0.4],
        ];
        let spec = DomainSpec::polygon(v).unwrap();
        let r = rasterize(&spec, 32);
        assert!(
            matches!(r, Err(Error::DisconnectedMask { components: 2 })),
            "{r:?}"
        );
    }

    #[test]
    fn distance_examples() {
        let sq = rasterize(&DomainSpec::rectangle(1.0).unwrap(), 128).unwrap();
        let dist = boundary_distance(&sq);
        let h = sq.h();
        let (m, _, _) = dist.argmax();
        assert!((m - 0.5).abs() <= h, "square inradius {m}");
        let disk = rasterize(&DomainSpec::disk(1.0).unwrap(), 128).unwrap();
        let (m, _, _) = boundary_distance(&disk).argmax();
        assert!((m - 1.0 / PI.sqrt()).abs() <= disk.h(), "disk radius {m}");
    }

    #[test]
    fn distance_is_lipschitz_and_small_at_boundary() {
        let d = rasterize(&DomainSpec::ellipse(2.0).unwrap(), 96).unwrap();
        let dist = boundary_distance(&d);
        let h = d.h();
        for j in 1..d.ny() - 1 {
            for i in 1..d.nx() - 1 {
                let k = d.mask.index(i, j);
                if !d.mask.cells[k] {
                    continue;
                }
                let touches = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .any(|&(a, b)| !d.mask.get(i as isize + a, j as isize + b));
                if touches {
                    assert!(dist.values[k] <= h + 1e-12);
                }
                for (a, b) in [(1usize, 0usize), (0, 1)] {
                    let q = d.mask.index(i + a, j + b);
                    if d.mask.cells[q] {
                        assert!((dist.values[k] - dist.values[q]).abs() <= h + 1e-12);
                    }
                }
            }
        }
    }
}
