//! Symmetric difference with an equal-area disk and the Fraenkel asymmetry.
//!
//! Disk membership is fractional: each cell contributes the area of its
//! square cut by the tangent half-plane of the circle. This keeps the
//! objective continuous in the center, which the simplex search needs.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::Point;
use super::raster::{Mask, RasterDomain};

/// Half-diagonal of a unit cell; beyond this distance from the circle a cell
/// is entirely inside or outside.
const HALF_DIAGONAL: f64 = std::f64::consts::FRAC_1_SQRT_2;
const COARSE_GRID: usize = 21;

/// Result of the translation search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    /// `|Ω Δ (D + center)| / |Ω|`, in `[0, 2]`.
    pub alpha: f64,
    pub center: Point,
    pub symmetric_difference: f64,
}

/// Area of the unit square centered at 0 below the line `n·p = u`, `|n| = 1`.
fn square_halfplane_coverage(nx: f64, ny: f64, u: f64) -> f64 {
    let (a, b) = {
        let (x, y) = (nx.abs(), ny.abs());
        if x >= y {
            (x, y)
        } else {
            (y, x)
        }
    };
    let outer = 0.5 * (a + b);
    let inner = 0.5 * (a - b);
    if u <= -outer {
        0.0
    } else if u >= outer {
        1.0
    } else if u < -inner {
        let t = u + outer;
        t * t / (2.0 * a * b)
    } else if u > inner {
        let t = outer - u;
        1.0 - t * t / (2.0 * a * b)
    } else {
        0.5 + u / a
    }
}

/// Symmetric-difference evaluator with row prefix counts of the mask.
struct Objective<'a> {
    mask: &'a Mask,
    radius: f64,
    count: usize,
    prefix: Vec<u32>,
}

impl<'a> Objective<'a> {
    fn new(mask: &'a Mask, radius: f64) -> Self {
        let nx = mask.nx;
        let mut prefix = vec![0u32; (nx + 1) * mask.ny];
        for j in 0..mask.ny {
            let row = &mut prefix[j * (nx + 1)..(j + 1) * (nx + 1)];
            for i in 0..nx {
                row[i + 1] = row[i] + u32::from(mask.cells[j * nx + i]);
            }
        }
        Self {
            mask,
            radius,
            count: mask.count(),
            prefix,
        }
    }

    fn coverage(&self, center: Point, i: isize, j: isize) -> f64 {
        let h = self.mask.h;
        let dx = self.mask.origin[0] + i as f64 * h - center[0];
        let dy = self.mask.origin[1] + j as f64 * h - center[1];
        let r = (dx * dx + dy * dy).sqrt();
        if r == 0.0 {
            return if self.radius > HALF_DIAGONAL * h {
                1.0
            } else {
                0.0
            };
        }
        square_halfplane_coverage(dx / r, dy / r, (self.radius - r) / h)
    }

    fn row_count(&self, j: usize, lo: isize, hi: isize) -> f64 {
        // mask cells with lo ≤ i ≤ hi in row j
        let nx = self.mask.nx as isize;
        let (a, b) = (lo.max(0), (hi + 1).min(nx));
        if a >= b {
            return 0.0;
        }
        let row = &self.prefix[j * (self.mask.nx + 1)..];
        f64::from(row[b as usize] - row[a as usize])
    }

    /// `|mask Δ disk(center)|`.
    fn eval(&self, center: Point) -> f64 {
        let m = self.mask;
        let h = m.h;
        let (r_out, r_in) = (
            self.radius + HALF_DIAGONAL * h,
            self.radius - HALF_DIAGONAL * h,
        );
        let (mut disk, mut overlap) = (0.0, 0.0);
        let j_lo = ((center[1] - r_out - m.origin[1]) / h).ceil() as isize;
        let j_hi = ((center[1] + r_out - m.origin[1]) / h).floor() as isize;
        for j in j_lo..=j_hi {
            let dy = m.origin[1] + j as f64 * h - center[1];
            let w_out2 = r_out * r_out - dy * dy;
            if w_out2 <= 0.0 {
                continue;
            }
            let w_out = w_out2.sqrt();
            let i_lo = ((center[0] - w_out - m.origin[0]) / h).ceil() as isize;
            let i_hi = ((center[0] + w_out - m.origin[0]) / h).floor() as isize;
            if i_lo > i_hi {
                continue;
            }
            let row_in_grid = j >= 0 && (j as usize) < m.ny;
            // fully covered run [f_lo, f_hi]
            let (f_lo, f_hi) = if r_in > 0.0 && r_in * r_in - dy * dy > 0.0 {
                let w_in = (r_in * r_in - dy * dy).sqrt();
                let a = ((center[0] - w_in - m.origin[0]) / h).ceil() as isize;
                let b = ((center[0] + w_in - m.origin[0]) / h).floor() as isize;
                (a.max(i_lo), b.min(i_hi))
            } else {
                (i_hi + 1, i_hi)
            };
            if f_lo <= f_hi {
                disk += (f_hi - f_lo + 1) as f64;
                if row_in_grid {
                    overlap += self.row_count(j as usize, f_lo, f_hi);
                }
            }
            let partial = |i: isize, disk: &mut f64, overlap: &mut f64| {
                let c = self.coverage(center, i, j);
                *disk += c;
                if m.get(i, j) {
                    *overlap += c;
                }
            };
            if f_lo <= f_hi {
                for i in i_lo..f_lo {
                    partial(i, &mut disk, &mut overlap);
                }
                for i in f_hi + 1..=i_hi {
                    partial(i, &mut disk, &mut overlap);
                }
            } else {
                for i in i_lo..=i_hi {
                    partial(i, &mut disk, &mut overlap);
                }
            }
        }
        (self.count as f64 + disk - 2.0 * overlap).max(0.0) * h * h
    }
}

/// `|Ω Δ (D + center)|` with `D` the centered disk of area `|Ω|`.
pub fn symmetric_difference_area(d: &RasterDomain, center: Point) -> f64 {
    let radius = (d.area() / PI).sqrt();
    Objective::new(&d.mask, radius).eval(center)
}

/// Fraenkel asymmetry of a rasterized domain; the disk area is the exact
/// domain area when known.
pub fn fraenkel_asymmetry(d: &RasterDomain) -> f64 {
    mask_asymmetry(&d.mask, d.area()).alpha
}

/// Translation search for the disk of the given `area` closest to `mask`.
///
/// A 21×21 grid over the square of half-width one radius around the mask
/// centroid seeds a Nelder–Mead search that stops once the simplex diameter
/// drops below `h/4`.
pub fn mask_asymmetry(mask: &Mask, area: f64) -> Asymmetry {
    let radius = (area / PI).sqrt();
    let objective = Objective::new(mask, radius);
    let centroid = mask.centroid();
    let step = 2.0 * radius / (COARSE_GRID - 1) as f64;
    let seeds: Vec<(f64, Point)> = (0..COARSE_GRID * COARSE_GRID)
        .into_par_iter()
        .map(|k| {
            let (a, b) = ((k % COARSE_GRID) as f64, (k / COARSE_GRID) as f64);
            let c = [
                centroid[0] - radius + a * step,
                centroid[1] - radius + b * step,
            ];
            (objective.eval(c), c)
        })
        .collect();
    let (_, seed) = seeds
        .into_iter()
        .fold((f64::INFINITY, centroid), |best, cand| {
            if cand.0 < best.0 {
                cand
            } else {
                best
            }
        });
    let (value, center) = nelder_mead(|c| objective.eval(c), seed, 0.5 * step, 0.25 * mask.h);
    Asymmetry {
        alpha: (value / area).clamp(0.0, 2.0),
        center,
        symmetric_difference: value,
    }
}

/// Two-dimensional Nelder–Mead minimization with standard coefficients.
fn nelder_mead(f: impl Fn(Point) -> f64, start: Point, scale: f64, tol: f64) -> (f64, Point) {
    let mut simplex = [
        start,
        [start[0] + scale, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = simplex.map(&f);
    let combine = |a: Point, b: Point, t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..500 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|k| simplex[k]);
        values = order.map(|k| values[k]);
        let diameter = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .map(|(a, b)| {
                ((simplex[a][0] - simplex[b][0]).powi(2) + (simplex[a][1] - simplex[b][1]).powi(2))
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            break;
        }
        let centroid = combine(simplex[0], simplex[1], 0.5);
        let reflected = combine(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = combine(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            (simplex[2], values[2]) = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let contracted = if fr < values[2] {
                combine(centroid, reflected, 0.5)
            } else {
                combine(centroid, simplex[2], 0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = combine(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    (values[best], simplex[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{mask_perimeter, rasterize, DomainSpec};

    /// Four circular segments cut off a centered disk of unit area by the unit square.
    fn square_oracle() -> f64 {
        let r = 1.0 / PI.sqrt();
        let d = 0.5_f64;
        8.0 * (r * r * (d / r).acos() - d * (r * r - d * d).sqrt())
    }

    #[test]
    fn coverage_is_exact_for_axis_aligned_lines() {
        assert!((square_halfplane_coverage(1.0, 0.0, 0.25) - 0.75).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((square_halfplane_coverage(s, s, 0.0) - 0.5).abs() < 1e-15);
        assert_eq!(square_halfplane_coverage(s, s, 0.8), 1.0);
        // corner triangle of legs 1/2
        assert!((square_halfplane_coverage(s, s, -0.5 * s) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn square_oracle_value() {
        assert!((square_oracle() - 0.181_092).abs() < 1e-6);
    }

    #[test]
    fn disk_against_itself() {
        let d = rasterize(&DomainSpec::disk(1.0).unwrap(), 256).unwrap();
        let v = symmetric_difference_area(&d, [0.0, 0.0]);
        assert!(v <= 2.0 * d.h() * mask_perimeter(&d.mask), "{v}");
        assert!(fraenkel_asymmetry(&d) < 0.01);
    }

    #[test]
    fn centered_and_far_square() {
        let d = rasterize(&DomainSpec::rectangle(1.0).unwrap(), 256).unwrap();
        assert!((symmetric_difference_area(&d, [0.0, 0.0]) - square_oracle()).abs() < 0.005);
        assert!((symmetric_difference_area(&d, [10.0, 0.0]) - 2.0).abs() < 0.02);
        let a = fraenkel_asymmetry(&d);
        assert!((a - square_oracle()).abs() < 0.005, "{a}");
    }

    #[test]
    fn translation_invariance() {
        let s = DomainSpec::rectangle(1.0).unwrap();
        let a0 = fraenkel_asymmetry(&rasterize(&s, 256).unwrap());
        let a1 = fraenkel_asymmetry(&rasterize(&s.translated(0.3137, -0.2211), 256).unwrap());
        assert!((a0 - a1).abs() < 0.001, "{a0} {a1}");
    }
}
