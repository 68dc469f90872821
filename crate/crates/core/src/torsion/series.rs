//! Closed forms: the disk maximum, the rectangle double series, the deficit
//! bound and the rational function controlling the off-diagonal terms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::verify::{BoundReport, Provenance};

/// Maximum of the torsion function of a disk: `area / 4π`.
pub fn torsion_disk_max(area: f64) -> f64 {
    area / (4.0 * PI)
}

fn f(x: f64) -> f64 {
    x / (1.0 + x * x)
}

/// Truncated double series and its alternating-tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Maximum of the torsion function of the unit-area rectangle with sides `a`
/// and `1/a`, summed over `0 ≤ n, m ≤ terms`.
pub fn torsion_rect_series(a: f64, terms: usize) -> SeriesValue {
    assert!(a > 0.0, "aspect must be positive");
    assert!(terms >= 10, "at least 10 terms are required");
    let a2 = a * a;
    let mut sum = 0.0;
    for n in 0..=terms {
        let p = (2 * n + 1) as f64;
        let mut row = 0.0;
        for m in 0..=terms {
            let q = (2 * m + 1) as f64;
            let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
            row += sign / (q * q) * f(a2 * q / p);
        }
        sum += row / (p * p);
    }
    let tail = (2 * terms + 1) as f64;
    SeriesValue {
        value: 16.0 / PI.powi(4) * sum,
        tail_bound: 16.0 / (PI.powi(4) * tail * tail),
    }
}

/// Lower bound on `φ_m(R_1) − φ_m(R_a)`: `(a² − 1)² / (24 (1 + a⁴))`.
pub fn rect_deficit_bound(a: f64) -> f64 {
    let a2 = a * a;
    (a2 - 1.0).powi(2) / (24.0 * (1.0 + a2 * a2))
}

/// Both evaluations of `g(x, y) = 2f(y) − f(xy) − f(x/y)`, `f(t) = t/(1+t²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub defining: f64,
    pub factorized: f64,
}

pub fn g_function(x: f64, y: f64) -> GValue {
    let defining =
        2.0 * y / (1.0 + y * y) - x * y / (1.0 + x * x * y * y) - x * y / (x * x + y * y);
    let (x2, y2) = (x * x, y * y);
    let factorized = y * (1.0 - x).powi(2) * (2.0 * x2 * y2 + 2.0 * y2 - x * (y2 - 1.0).powi(2))
        / ((1.0 + y2) * (1.0 + x2 * y2) * (x2 + y2));
    GValue {
        defining,
        factorized,
    }
}

/// `Σ_{k ≥ 0} (x + k)^{−p}` by Euler–Maclaurin, accurate for large `x`.
fn power_tail(x: f64, p: i32) -> f64 {
    let pf = f64::from(p);
    x.powi(1 - p) / (pf - 1.0) + 0.5 * x.powi(-p) + pf / 12.0 * x.powi(-p - 1)
        - pf * (pf + 1.0) * (pf + 2.0) / 720.0 * x.powi(-p - 3)
}

/// Odd-reciprocal power sums used in the rectangle estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddPowerSums {
    pub terms: usize,
    /// `Σ_{n ≤ N} (2n+1)^{−4}`.
    pub diagonal: f64,
    /// `Σ_{m ≠ n ≤ N} (2n+1)^{−2} (2m+1)^{−2}`.
    pub off_diagonal: f64,
    /// `diagonal` plus its asymptotic remainder.
    pub diagonal_completed: f64,
    /// `off_diagonal` with both single sums completed by their remainders.
    pub off_diagonal_completed: f64,
}

pub fn odd_power_sums(terms: usize) -> OddPowerSums {
    // smallest terms first
    let (mut s2, mut s4) = (0.0, 0.0);
    for n in (0..=terms).rev() {
        let q = ((2 * n + 1) as f64).powi(2);
        s2 += 1.0 / q;
        s4 += 1.0 / (q * q);
    }
    let x = terms as f64 + 1.5;
    let t2 = power_tail(x, 2) / 4.0;
    let t4 = power_tail(x, 4) / 16.0;
    let (c2, c4) = (s2 + t2, s4 + t4);
    OddPowerSums {
        terms,
        diagonal: s4,
        off_diagonal: s2 * s2 - s4,
        diagonal_completed: c4,
        off_diagonal_completed: c2 * c2 - c4,
    }
}

/// Checks `Σ (2n+1)^{−4} = π⁴/96` and `Σ_{m≠n} (2n+1)^{−2}(2m+1)^{−2} = π⁴/192`
/// at `N = 10⁴`.
///
/// The diagonal partial sum is compared directly. The truncated off-diagonal
/// sum lags its limit by about `π²/(16N)`, so it is compared after adding the
/// asymptotic remainders; the raw deviation is reported as an extra.
pub fn series_identities_check() -> Vec<BoundReport> {
    let terms = 10_000;
    let sums = odd_power_sums(terms);
    let tol = 1e-8;
    let diag_exact = PI.powi(4) / 96.0;
    let off_exact = PI.powi(4) / 192.0;
    let prov = || {
        vec![Provenance::new(
            "none",
            None,
            None,
            format!("partial sums, N = {terms}"),
        )]
    };
    let diag_err = (sums.diagonal - diag_exact).abs();
    let off_err = (sums.off_diagonal_completed - off_exact).abs();
    vec![
        BoundReport::new(
            "series_identity_diagonal",
            "odd quartic reciprocal sum equals pi^4/96",
            tol,
            diag_err,
            0.0,
            prov(),
        )
        .with_extra("partial_sum", sums.diagonal)
        .with_extra("exact", diag_exact),
        BoundReport::new(
            "series_identity_off_diagonal",
            "off-diagonal odd reciprocal sum equals pi^4/192",
            tol,
            off_err,
            0.0,
            prov(),
        )
        .with_extra("partial_sum", sums.off_diagonal)
        .with_extra("partial_sum_completed", sums.off_diagonal_completed)
        .with_extra("raw_deviation", (sums.off_diagonal - off_exact).abs())
        .with_extra("exact", off_exact),
        BoundReport::new(
            "series_identity_square",
            "diagonal plus off-diagonal equals (pi^2/8)^2",
            tol,
            (sums.diagonal_completed + sums.off_diagonal_completed - (PI * PI / 8.0).powi(2)).abs(),
            0.0,
            prov(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent evaluation via the one-dimensional cosine series of the
    /// rectangle torsion function at its center.
    fn rect_center_oracle(a: f64) -> f64 {
        let (long, short) = if a >= 1.0 { (a, 1.0 / a) } else { (1.0 / a, a) };
        let mut s = short * short / 8.0;
        for j in 0..400 {
            let k = (2 * j + 1) as f64;
            let c = 4.0 * short * short / (PI.powi(3) * k.powi(3))
                * if j % 2 == 0 { 1.0 } else { -1.0 };
            s -= c * 2.0 * (-k * PI * long / (2.0 * short)).exp()
                / (1.0 + (-k * PI * long / short).exp());
        }
        s
    }

    #[test]
    fn series_matches_independent_oracle() {
        for a in [1.0, 1.5, 2.0, 3.0] {
            let s = torsion_rect_series(a, 200);
            assert!((s.value - rect_center_oracle(a)).abs() < 1e-6, "a = {a}");
            assert!(s.tail_bound < 1.1e-6);
        }
        // frozen from the oracle above
        assert!((torsion_rect_series(1.0, 200).value - 0.073_671_353).abs() < 1e-6);
    }

    #[test]
    fn rect_two_below_chain_value() {
        let s = torsion_rect_series(2.0, 200).value;
        assert!(s <= 0.073_671_3 - 0.022_058_8);
        assert_relative_eq!(rect_deficit_bound(2.0), 9.0 / 408.0, epsilon = 1e-15);
        assert_eq!(rect_deficit_bound(1.0), 0.0);
    }

    #[test]
    fn aspect_inversion_symmetry() {
        for a in [1.3, 2.0, 2.7] {
            let d =
                (torsion_rect_series(a, 200).value - torsion_rect_series(1.0 / a, 200).value).abs();
            assert!(d <= 1e-10, "{d}");
            assert_relative_eq!(
                rect_deficit_bound(a),
                rect_deficit_bound(1.0 / a),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn truncation_converges() {
        let d = (torsion_rect_series(1.0, 200).value - torsion_rect_series(1.0, 400).value).abs();
        assert!(d < 1e-6);
    }

    #[test]
    fn disk_max_examples() {
        assert_relative_eq!(torsion_disk_max(1.0), 0.079_577_5, epsilon = 1e-7);
        assert_relative_eq!(torsion_disk_max(4.0 * PI), 1.0, epsilon = 1e-15);
        assert_relative_eq!(torsion_disk_max(2.0), 0.159_154_9, epsilon = 1e-7);
    }

    #[test]
    fn g_examples() {
        for y in [0.5, 1.0, 3.0] {
            assert!(g_function(1.0, y).defining.abs() < 1e-15);
            assert!(g_function(1.0, y).factorized.abs() < 1e-15);
        }
        assert_relative_eq!(g_function(2.0, 1.0).defining, 0.2, epsilon = 1e-15);
        assert_relative_eq!(
            g_function(3.0, 2.0).factorized,
            424.0 / 2405.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            g_function(3.0, 2.0).defining,
            424.0 / 2405.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn power_sums() {
        let s = odd_power_sums(10_000);
        assert!((s.diagonal - PI.powi(4) / 96.0).abs() < 1e-8);
        assert!((s.off_diagonal_completed - PI.powi(4) / 192.0).abs() < 1e-8);
        // the raw truncation is far from the limit
        assert!((s.off_diagonal - PI.powi(4) / 192.0).abs() > 1e-6);
        assert!(series_identities_check().iter().all(|r| r.passed()));
    }
}
