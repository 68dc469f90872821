//! Parametric planar domains.
//!
//! Every shape is placed with its natural center at the origin (the
//! rectangle `R_a = (-a/2, a/2) × (-1/(2a), 1/(2a))`, the ellipse and the
//! disks are centered) and may carry a translation offset.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Shape family and its parameters. All lengths are dimensionless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainKind {
    /// Disk with the given area.
    Disk { area: f64 },
    /// Rectangle with sides `aspect` and `1/aspect` (unit area).
    Rectangle { aspect: f64 },
    /// Ellipse with axis ratio `aspect` (unit area); the long axis is x when aspect > 1.
    Ellipse { aspect: f64 },
    /// Simple polygon, vertices in order (either orientation).
    Polygon { vertices: Vec<Point> },
    /// Star-shaped domain `r < R(θ)`, with `R` the trigonometric interpolant of
    /// samples taken at `θ_j = 2πj/N`.
    PerturbedDisk { radius_samples: Vec<f64> },
}

/// A validated domain description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    #[serde(default)]
    pub offset: Point,
}

impl DomainSpec {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let spec = Self {
            kind,
            offset: [0.0, 0.0],
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn disk(area: f64) -> Result<Self> {
        Self::new(DomainKind::Disk { area })
    }

    pub fn rectangle(aspect: f64) -> Result<Self> {
        Self::new(DomainKind::Rectangle { aspect })
    }

    pub fn ellipse(aspect: f64) -> Result<Self> {
        Self::new(DomainKind::Ellipse { aspect })
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Self::new(DomainKind::Polygon { vertices })
    }

    pub fn perturbed_disk(radius_samples: Vec<f64>) -> Result<Self> {
        Self::new(DomainKind::PerturbedDisk { radius_samples })
    }

    /// Unit-area disk perturbed by `1 + amplitude·cos(mode·θ)`.
    pub fn wavy_disk(amplitude: f64, mode: usize, samples: usize) -> Result<Self> {
        let radii = (0..samples)
            .map(|j| 1.0 + amplitude * (mode as f64 * TAU * j as f64 / samples as f64).cos())
            .collect();
        Self::perturbed_disk(radii)?.normalized_to_unit_area()
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let mut out = self.clone();
        out.offset = [self.offset[0] + dx, self.offset[1] + dy];
        out
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidDomain(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        match &self.kind {
            DomainKind::Disk { area } => positive("area", *area)?,
            DomainKind::Rectangle { aspect } | DomainKind::Ellipse { aspect } => {
                positive("aspect", *aspect)?
            }
            DomainKind::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidDomain(
                        "polygon needs at least 3 vertices".into(),
                    ));
                }
                if vertices.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidDomain("polygon vertex is not finite".into()));
                }
                check_simple(vertices)?;
                if shoelace(vertices).abs() <= 0.0 {
                    return Err(Error::InvalidDomain("polygon has zero area".into()));
                }
            }
            DomainKind::PerturbedDisk { radius_samples } => {
                if radius_samples.len() < 3 {
                    return Err(Error::InvalidDomain(
                        "need at least 3 radius samples".into(),
                    ));
                }
                for &r in radius_samples {
                    positive("radius sample", r)?;
                }
                let interp = TrigInterpolant::new(radius_samples);
                let fine = 64 * radius_samples.len();
                if (0..fine).any(|k| interp.value(TAU * k as f64 / fine as f64) <= 0.0) {
                    return Err(Error::InvalidDomain(
                        "radius interpolant is not strictly positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Exact area of the shape.
    pub fn area(&self) -> f64 {
        match &self.kind {
            DomainKind::Disk { area } => *area,
            DomainKind::Rectangle { .. } | DomainKind::Ellipse { .. } => 1.0,
            DomainKind::Polygon { vertices } => shoelace(vertices).abs(),
            DomainKind::PerturbedDisk { radius_samples } => {
                TrigInterpolant::new(radius_samples).half_square_integral()
            }
        }
    }

    /// Area from a closed-form expression (disk, rectangle, ellipse).
    pub fn analytic_area(&self) -> Option<f64> {
        match self.kind {
            DomainKind::Disk { .. } | DomainKind::Rectangle { .. } | DomainKind::Ellipse { .. } => {
                Some(self.area())
            }
            _ => None,
        }
    }

    /// Same shape rescaled about its reference point to unit area.
    pub fn normalized_to_unit_area(&self) -> Result<Self> {
        let s = 1.0 / self.area().sqrt();
        let kind = match &self.kind {
            DomainKind::Disk { .. } => DomainKind::Disk { area: 1.0 },
            DomainKind::Rectangle { .. } | DomainKind::Ellipse { .. } => self.kind.clone(),
            DomainKind::Polygon { vertices } => DomainKind::Polygon {
                vertices: vertices.iter().map(|v| [v[0] * s, v[1] * s]).collect(),
            },
            DomainKind::PerturbedDisk { radius_samples } => DomainKind::PerturbedDisk {
                radius_samples: radius_samples.iter().map(|r| r * s).collect(),
            },
        };
        let mut spec = Self::new(kind)?;
        spec.offset = self.offset;
        Ok(spec)
    }

    pub fn is_unit_area(&self) -> bool {
        (self.area() - 1.0).abs() < 1e-12
    }

    /// Whether the boundary is C² (needed by the Dirac bounds).
    pub fn is_smooth(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::Disk { .. } | DomainKind::Ellipse { .. } | DomainKind::PerturbedDisk { .. }
        )
    }

    /// Axis-aligned bounding box `[xmin, xmax, ymin, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let [ox, oy] = self.offset;
        let (xmin, xmax, ymin, ymax) = match &self.kind {
            DomainKind::Disk { area } => {
                let r = (area / PI).sqrt();
                (-r, r, -r, r)
            }
            DomainKind::Rectangle { aspect } => {
                (-0.5 * aspect, 0.5 * aspect, -0.5 / aspect, 0.5 / aspect)
            }
            DomainKind::Ellipse { aspect } => {
                let (ax, ay) = ellipse_axes(*aspect);
                (-ax, ax, -ay, ay)
            }
            DomainKind::Polygon { vertices } => vertices.iter().fold(
                (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ),
                |(a, b, c, d), v| (a.min(v[0]), b.max(v[0]), c.min(v[1]), d.max(v[1])),
            ),
            DomainKind::PerturbedDisk { radius_samples } => {
                let interp = TrigInterpolant::new(radius_samples);
                let fine = 256 * radius_samples.len();
                let mut bb = (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                );
                for k in 0..fine {
                    let t = TAU * k as f64 / fine as f64;
                    let r = interp.value(t);
                    let (x, y) = (r * t.cos(), r * t.sin());
                    bb = (bb.0.min(x), bb.1.max(x), bb.2.min(y), bb.3.max(y));
                }
                // Sampling can miss the extremum by a hair.
                let pad = 1e-3 * (bb.1 - bb.0);
                (bb.0 - pad, bb.1 + pad, bb.2 - pad, bb.3 + pad)
            }
        };
        [xmin + ox, xmax + ox, ymin + oy, ymax + oy]
    }

    /// Strict interior membership. Hot loops should use [`DomainSpec::geometry`].
    pub fn contains(&self, p: Point) -> bool {
        self.geometry().contains(p)
    }

    /// Fraction `θ ∈ (0, 1]` along the segment from `inside` to `outside` at
    /// which the boundary is crossed.
    pub fn crossing_fraction(&self, inside: Point, outside: Point) -> f64 {
        self.geometry().crossing_fraction(inside, outside)
    }

    /// Membership oracle with per-shape data precomputed.
    pub fn geometry(&self) -> Geometry<'_> {
        let radius = match &self.kind {
            DomainKind::PerturbedDisk { radius_samples } => {
                Some(TrigInterpolant::new(radius_samples))
            }
            _ => None,
        };
        Geometry { spec: self, radius }
    }

    /// Short human-readable tag, e.g. `rectangle(a=2)`.
    pub fn tag(&self) -> String {
        let base = match &self.kind {
            DomainKind::Disk { area } => format!("disk(area={area})"),
            DomainKind::Rectangle { aspect } => format!("rectangle(a={aspect})"),
            DomainKind::Ellipse { aspect } => format!("ellipse(a={aspect})"),
            DomainKind::Polygon { vertices } => format!("polygon({} vertices)", vertices.len()),
            DomainKind::PerturbedDisk { radius_samples } => {
                format!("perturbed-disk({} samples)", radius_samples.len())
            }
        };
        if self.offset == [0.0, 0.0] {
            base
        } else {
            format!("{base}+({},{})", self.offset[0], self.offset[1])
        }
    }

    /// Boundary point and tangent at parameter `t ∈ [0, 2π)`, counter-clockwise,
    /// for the smooth shapes.
    pub(crate) fn smooth_boundary(&self, t: f64) -> Option<(Point, Point)> {
        let [ox, oy] = self.offset;
        let (c, s) = (t.cos(), t.sin());
        match &self.kind {
            DomainKind::Disk { area } => {
                let r = (area / PI).sqrt();
                Some(([ox + r * c, oy + r * s], [-r * s, r * c]))
            }
            DomainKind::Ellipse { aspect } => {
                let (ax, ay) = ellipse_axes(*aspect);
                Some(([ox + ax * c, oy + ay * s], [-ax * s, ay * c]))
            }
            DomainKind::PerturbedDisk { radius_samples } => {
                let interp = TrigInterpolant::new(radius_samples);
                let r = interp.value(t);
                let dr = interp.derivative(t);
                Some(([ox + r * c, oy + r * s], [dr * c - r * s, dr * s + r * c]))
            }
            _ => None,
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Precomputed membership and boundary-crossing queries for a [`DomainSpec`].
#[derive(Debug, Clone)]
pub struct Geometry<'a> {
    spec: &'a DomainSpec,
    radius: Option<TrigInterpolant>,
}

impl Geometry<'_> {
    pub fn contains(&self, p: Point) -> bool {
        let x = p[0] - self.spec.offset[0];
        let y = p[1] - self.spec.offset[1];
        match &self.spec.kind {
            DomainKind::Disk { area } => x * x + y * y < area / PI,
            DomainKind::Rectangle { aspect } => x.abs() < 0.5 * aspect && y.abs() < 0.5 / aspect,
            DomainKind::Ellipse { aspect } => {
                let (ax, ay) = ellipse_axes(*aspect);
                (x / ax).powi(2) + (y / ay).powi(2) < 1.0
            }
            DomainKind::Polygon { vertices } => point_in_polygon(vertices, [x, y]),
            DomainKind::PerturbedDisk { .. } => {
                let r2 = x * x + y * y;
                if r2 == 0.0 {
                    return true;
                }
                let r = self.radius.as_ref().map_or(0.0, |i| i.value(y.atan2(x)));
                r2 < r * r
            }
        }
    }

    pub fn crossing_fraction(&self, inside: Point, outside: Point) -> f64 {
        let at = |t: f64| {
            [
                inside[0] + t * (outside[0] - inside[0]),
                inside[1] + t * (outside[1] - inside[1]),
            ]
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..52 {
            let mid = 0.5 * (lo + hi);
            if self.contains(at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Semi-axes of the unit-area ellipse with the given axis ratio.
fn ellipse_axes(aspect: f64) -> (f64, f64) {
    ((aspect / PI).sqrt(), (1.0 / (aspect * PI)).sqrt())
}

fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

fn point_in_polygon(v: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, c: Point, d: f64| {
        d == 0.0
            && c[0] >= a[0].min(b[0])
            && c[0] <= a[0].max(b[0])
            && c[1] >= a[1].min(b[1])
            && c[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn check_simple(v: &[Point]) -> Result<()> {
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            // adjacent edges share a vertex by construction
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::NonSimplePolygon(i, j));
            }
        }
    }
    Ok(())
}

/// Trigonometric interpolant through equispaced samples on `[0, 2π)`.
#[derive(Debug, Clone)]
pub(crate) struct TrigInterpolant {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigInterpolant {
    pub(crate) fn new(samples: &[f64]) -> Self {
        let n = samples.len();
        let nf = n as f64;
        let a0 = samples.iter().sum::<f64>() / nf;
        let kmax = n / 2;
        let mut cos = Vec::with_capacity(kmax);
        let mut sin = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &r) in samples.iter().enumerate() {
                let t = TAU * (k * j) as f64 / nf;
                a += r * t.cos();
                b += r * t.sin();
            }
            // the Nyquist mode of an even-length sample set is shared by ±k
            let scale = if n.is_multiple_of(2) && k == kmax {
                1.0 / nf
            } else {
                2.0 / nf
            };
            cos.push(a * scale);
            sin.push(if n.is_multiple_of(2) && k == kmax {
                0.0
            } else {
                b * scale
            });
        }
        Self { a0, cos, sin }
    }

    pub(crate) fn value(&self, t: f64) -> f64 {
        self.a0
            + self
                .cos
                .iter()
                .zip(&self.sin)
                .enumerate()
                .map(|(k, (a, b))| {
                    let kt = (k + 1) as f64 * t;
                    a * kt.cos() + b * kt.sin()
                })
                .sum::<f64>()
    }

    pub(crate) fn derivative(&self, t: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| {
                let kf = (k + 1) as f64;
                let kt = kf * t;
                kf * (b * kt.cos() - a * kt.sin())
            })
            .sum()
    }

    /// `½∫₀^{2π} R(θ)² dθ`, the enclosed area, by Parseval.
    fn half_square_integral(&self) -> f64 {
        let modes: f64 = self
            .cos
            .iter()
            .zip(&self.sin)
            .map(|(a, b)| a * a + b * b)
            .sum();
        PI * (self.a0 * self.a0 + 0.5 * modes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rectangle_box_and_membership() {
        let r = DomainSpec::rectangle(2.0).unwrap();
        assert_eq!(r.bounding_box(), [-1.0, 1.0, -0.25, 0.25]);
        assert!(r.contains([0.99, 0.24]));
        assert!(!r.contains([1.0, 0.0]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DomainSpec::disk(0.0).is_err());
        assert!(DomainSpec::rectangle(-1.0).is_err());
        assert!(DomainSpec::perturbed_disk(vec![1.0, -0.1, 1.0, 1.0]).is_err());
        assert!(DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            DomainSpec::polygon(bowtie),
            Err(Error::NonSimplePolygon(..))
        ));
    }

    #[test]
    fn polygon_area_and_orientation() {
        let tri = DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_relative_eq!(tri.area(), 0.5);
        let cw = DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_relative_eq!(cw.area(), 0.5);
        assert!(tri.contains([0.9, 0.1]));
        assert!(!tri.contains([0.1, 0.9]));
    }

    #[test]
    fn trig_interpolant_reproduces_samples_and_area() {
        let eps = 0.1;
        let samples: Vec<f64> = (0..16)
            .map(|j| 1.0 + eps * (3.0 * TAU * j as f64 / 16.0).cos())
            .collect();
        let interp = TrigInterpolant::new(&samples);
        for (j, &r) in samples.iter().enumerate() {
            assert_relative_eq!(interp.value(TAU * j as f64 / 16.0), r, epsilon = 1e-13);
        }
        assert_relative_eq!(
            interp.half_square_integral(),
            PI * (1.0 + 0.5 * eps * eps),
            epsilon = 1e-13
        );
        let spec = DomainSpec::wavy_disk(eps, 3, 16).unwrap();
        assert_relative_eq!(spec.area(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn crossing_fraction_on_disk() {
        let d = DomainSpec::disk(PI).unwrap();
        let t = d.crossing_fraction([0.0, 0.0], [2.0, 0.0]);
        assert_relative_eq!(t, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn normalization_keeps_shape() {
        let p = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]).unwrap();
        let u = p.normalized_to_unit_area().unwrap();
        assert_relative_eq!(u.area(), 1.0, epsilon = 1e-14);
    }
}
