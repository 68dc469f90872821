//! Superlevel sets of the torsion function and the quantitative Talenti
//! deficit.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::TorsionField;
use super::series::torsion_disk_max;
use crate::geometry::{fraenkel_asymmetry, mask_asymmetry, mask_perimeter, RasterDomain};
use crate::verify::{BoundReport, Provenance};

pub const DEFAULT_LEVELS: usize = 64;

/// Below this asymmetry the cubic lower bound is smaller than the
/// rasterization error.
pub const ALPHA_NOISE_FLOOR: f64 = 0.02;

/// Constant in `φ_m^D − φ_m^Ω ≥ c |Ω| α³`.
pub const TALENTI_CONSTANT: f64 = 1.0 / (1024.0 * PI);

/// Constant in the integrated isoperimetric step `φ_m^D − φ_m^Ω ≥ c_iso ∫ α(U_t)² dt`.
pub const ISOPERIMETRIC_CONSTANT: f64 = 1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetEntry {
    pub t: f64,
    pub mu: f64,
    pub perimeter: f64,
    pub alpha: f64,
}

/// Area, perimeter and asymmetry of `U_t = {φ ≥ t}` on uniform levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetProfile {
    /// Sorted by `t`; `μ` is non-increasing.
    pub entries: Vec<LevelSetEntry>,
    /// `sup {t : μ(t) ≥ |Ω|(1 − α(Ω)/4)}`.
    pub threshold: f64,
    pub area: f64,
    pub alpha: f64,
}

impl LevelSetProfile {
    /// `μ′(t)` by central differences, one-sided at the ends.
    pub fn mu_derivative(&self) -> Vec<f64> {
        let e = &self.entries;
        let n = e.len();
        (0..n)
            .map(|k| match (k, n) {
                (_, 0 | 1) => 0.0,
                (0, _) => (e[1].mu - e[0].mu) / (e[1].t - e[0].t),
                (k, n) if k == n - 1 => (e[k].mu - e[k - 1].mu) / (e[k].t - e[k - 1].t),
                (k, _) => (e[k + 1].mu - e[k - 1].mu) / (e[k + 1].t - e[k - 1].t),
            })
            .collect()
    }

    /// `∫ α(U_t)² dt` by the trapezoid rule over the sampled levels.
    pub fn integrated_alpha_squared(&self) -> f64 {
        self.entries
            .windows(2)
            .map(|w| 0.5 * (w[0].alpha.powi(2) + w[1].alpha.powi(2)) * (w[1].t - w[0].t))
            .sum()
    }
}

/// Builds the profile on `num_levels` levels `t_j = j·φ_m/num_levels`,
/// `j = 0..num_levels`. Levels whose superlevel set is empty on the grid are
/// dropped.
pub fn level_set_profile(
    d: &RasterDomain,
    tf: &TorsionField,
    num_levels: usize,
) -> LevelSetProfile {
    assert!(num_levels >= 20, "at least 20 levels are required");
    let area = d.area();
    let alpha = fraenkel_asymmetry(d);
    let phi_max = tf.max_value;
    let entries: Vec<LevelSetEntry> = (0..num_levels)
        .into_par_iter()
        .filter_map(|j| {
            let t = phi_max * j as f64 / num_levels as f64;
            let set = tf.field.superlevel(&d.mask, t);
            let count = set.count();
            if count == 0 {
                return None;
            }
            let mu = if j == 0 { d.mask.area() } else { set.area() };
            Some(LevelSetEntry {
                t,
                mu,
                perimeter: mask_perimeter(&set),
                alpha: mask_asymmetry(&set, mu).alpha,
            })
        })
        .collect();
    let threshold = threshold_level(&entries, area * (1.0 - alpha / 4.0));
    LevelSetProfile {
        entries,
        threshold,
        area,
        alpha,
    }
}

/// Largest `t` with `μ(t) ≥ target`, interpolating linearly in the table.
fn threshold_level(entries: &[LevelSetEntry], target: f64) -> f64 {
    let Some(last) = entries.iter().rposition(|e| e.mu >= target) else {
        return 0.0;
    };
    match entries.get(last + 1) {
        Some(next) if next.mu < entries[last].mu => {
            let (a, b) = (&entries[last], next);
            a.t + (a.mu - target) / (a.mu - b.mu) * (b.t - a.t)
        }
        _ => entries[last].t,
    }
}

/// Checks `φ_m^D − φ_m^Ω ≥ |Ω| α³ / (1024π)` and reports the integrated
/// isoperimetric quantity `∫ α(U_t)² dt / 8` as an extra.
pub fn talenti_deficit(
    d: &RasterDomain,
    tf: &TorsionField,
    profile: &LevelSetProfile,
    tolerance: f64,
) -> BoundReport {
    let area = d.area();
    let alpha = profile.alpha;
    let lhs = torsion_disk_max(area) - tf.max_value;
    let rhs = TALENTI_CONSTANT * area * alpha.powi(3);
    let intermediate = ISOPERIMETRIC_CONSTANT * profile.integrated_alpha_squared();
    let report = BoundReport::new(
        "talenti_deficit",
        "torsion maximum deficit bounded below by |Omega| alpha^3 / (1024 pi)",
        lhs,
        rhs,
        tolerance,
        vec![Provenance::new(
            d.spec.tag(),
            None,
            Some(d.resolution),
            "fd",
        )],
    )
    .with_extra("alpha", alpha)
    .with_extra("phi_max", tf.max_value)
    .with_extra("isoperimetric_intermediate", intermediate)
    .with_extra("threshold_level", profile.threshold);
    if alpha < ALPHA_NOISE_FLOOR {
        report.into_vacuous()
    } else {
        report
    }
}

/// Checks `P(U_t)² ≤ slack · (−μ(t) μ′(t))` at the interior sampled levels
/// (all but the first and last) and that `μ` is non-increasing.
pub fn level_set_chain(
    d: &RasterDomain,
    profile: &LevelSetProfile,
    slack: f64,
) -> Vec<BoundReport> {
    let e = &profile.entries;
    let dmu = profile.mu_derivative();
    let worst = (1..e.len().saturating_sub(1))
        .map(|k| slack * (-e[k].mu * dmu[k]) / e[k].perimeter.powi(2))
        .fold(f64::INFINITY, f64::min);
    let rises = e.windows(2).map(|w| w[1].mu - w[0].mu).fold(0.0, f64::max);
    let prov = || {
        vec![Provenance::new(
            d.spec.tag(),
            None,
            Some(d.resolution),
            "fd, marching squares",
        )]
    };
    vec![
        BoundReport::new(
            "level_set_coarea",
            "squared perimeter of superlevel sets bounded by -mu mu' (with slack)",
            worst,
            1.0,
            0.0,
            prov(),
        )
        .with_extra("slack", slack)
        .with_extra("levels", e.len() as f64),
        BoundReport::new(
            "level_set_monotone",
            "superlevel area is non-increasing",
            0.0,
            rises,
            0.0,
            prov(),
        ),
    ]
}
