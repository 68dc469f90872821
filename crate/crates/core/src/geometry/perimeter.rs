//! Contour length of a rasterized set.

use super::raster::Mask;

/// Perimeter of the set marked by `cells` (an `nx × ny` row-major grid with
/// spacing `h`).
///
/// The indicator is smoothed once by the separable `[1, 2, 1]/4` kernel and
/// the 0.5 iso-line of the result is traced by marching squares with linear
/// edge interpolation.
pub fn perimeter(cells: &[bool], nx: usize, ny: usize, h: f64) -> f64 {
    assert_eq!(
        cells.len(),
        nx * ny,
        "mask storage does not match dimensions"
    );
    // one ring of zero padding on each side, plus one more for the kernel support
    let (px, py) = (nx + 4, ny + 4);
    let raw = |i: isize, j: isize| -> f64 {
        let (a, b) = (i - 2, j - 2);
        if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
            0.0
        } else if cells[b as usize * nx + a as usize] {
            1.0
        } else {
            0.0
        }
    };
    let mut horiz = vec![0.0; px * py];
    for j in 0..py as isize {
        for i in 0..px as isize {
            horiz[j as usize * px + i as usize] =
                0.25 * (raw(i - 1, j) + 2.0 * raw(i, j) + raw(i + 1, j));
        }
    }
    let hget = |i: usize, j: isize| {
        if j < 0 || j >= py as isize {
            0.0
        } else {
            horiz[j as usize * px + i]
        }
    };
    let mut s = vec![0.0; px * py];
    for j in 0..py {
        for i in 0..px {
            let jj = j as isize;
            s[j * px + i] = 0.25 * (hget(i, jj - 1) + 2.0 * hget(i, jj) + hget(i, jj + 1));
        }
    }
    marching_squares_length(&s, px, py, 0.5) * h
}

/// [`perimeter`] of a [`Mask`].
pub fn mask_perimeter(mask: &Mask) -> f64 {
    perimeter(&mask.cells, mask.nx, mask.ny, mask.h)
}

/// Total length, in grid units, of the `level` iso-line of `values`.
fn marching_squares_length(values: &[f64], nx: usize, ny: usize, level: f64) -> f64 {
    let lerp = |a: f64, b: f64| (level - a) / (b - a);
    let dist = |p: (f64, f64), q: (f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
    let mut total = 0.0;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // corners counter-clockwise from (i, j)
            let v = [
                values[j * nx + i],
                values[j * nx + i + 1],
                values[(j + 1) * nx + i + 1],
                values[(j + 1) * nx + i],
            ];
            let above: Vec<bool> = v.iter().map(|&x| x >= level).collect();
            let n_above = above.iter().filter(|&&b| b).count();
            if n_above == 0 || n_above == 4 {
                continue;
            }
            // edge k joins corner k and corner k+1
            let corner = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            let mut points = Vec::with_capacity(4);
            for k in 0..4 {
                let k1 = (k + 1) % 4;
                if above[k] != above[k1] {
                    let t = lerp(v[k], v[k1]);
                    let (a, b) = (corner[k], corner[k1]);
                    points.push((k, (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))));
                }
            }
            if points.len() == 2 {
                total += dist(points[0].1, points[1].1);
            } else {
                // saddle: the cell-average decides which diagonal pair is connected
                let center = 0.25 * v.iter().sum::<f64>();
                let p = |k: usize| {
                    points
                        .iter()
                        .find(|e| e.0 == k)
                        .map(|e| e.1)
                        .unwrap_or((0.0, 0.0))
                };
                if (center >= level) == above[0] {
                    total += dist(p(0), p(1)) + dist(p(2), p(3));
                } else {
                    total += dist(p(3), p(0)) + dist(p(1), p(2));
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, DomainSpec};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b
    }

    #[test]
    fn unit_square() {
        let d = rasterize(&DomainSpec::rectangle(1.0).unwrap(), 256).unwrap();
        assert!(rel(mask_perimeter(&d.mask), 4.0) < 0.02);
    }

    #[test]
    fn unit_disk() {
        let d = rasterize(&DomainSpec::disk(1.0).unwrap(), 256).unwrap();
        let p = mask_perimeter(&d.mask);
        assert!(rel(p, 2.0 * PI.sqrt()) < 0.02, "{p}");
    }

    #[test]
    fn rectangle_two() {
        let d = rasterize(&DomainSpec::rectangle(2.0).unwrap(), 256).unwrap();
        assert!(rel(mask_perimeter(&d.mask), 5.0) < 0.02);
    }

    #[test]
    fn small_block_is_finite_and_positive() {
        let p = perimeter(&[true; 4], 2, 2, 1.0);
        assert!(p > 0.0 && p < 8.0, "{p}");
    }

    #[test]
    fn empty_mask_has_no_contour() {
        assert_eq!(perimeter(&[false; 9], 3, 3, 0.1), 0.0);
    }
}
