//! Bessel functions of the first kind of order 0 and 1, and the few roots
//! needed as disk reference values.
//!
//! The power series is used throughout; it is accurate to a few ulps for
//! `|x| <= 12`, which covers every root used here.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;

fn series(order: u32, x: f64) -> f64 {
    debug_assert!(
        x.abs() <= SERIES_LIMIT,
        "Bessel series used outside |x| <= 12"
    );
    let q = -0.25 * x * x;
    let mut term = (0.5 * x).powi(order as i32);
    for k in 1..=order {
        term /= f64::from(k);
    }
    let mut sum = term;
    for k in 1..200u32 {
        term *= q / (f64::from(k) * f64::from(k + order));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// J₀(x).
pub fn bessel_j0(x: f64) -> f64 {
    series(0, x)
}

/// J₁(x).
pub fn bessel_j1(x: f64) -> f64 {
    series(1, x)
}

fn newton_bracketed(f: impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64) -> f64 {
    let (flo, _) = f(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / dfx;
        let candidate = x - step;
        x = if candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        if step.abs() < 1e-16 * x.abs() || hi - lo < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// k-th positive zero of J₀ (k ≥ 1), for k ≤ 3.
pub fn bessel_j0_zero(k: usize) -> f64 {
    assert!(
        (1..=3).contains(&k),
        "only the first three zeros of J0 are supported"
    );
    // McMahon estimate brackets the root to well within ±0.4.
    let guess = (k as f64 - 0.25) * PI;
    newton_bracketed(|x| (bessel_j0(x), -bessel_j1(x)), guess - 0.4, guess + 0.4)
}

/// First positive zero of J₀, j₀,₁ ≈ 2.404826.
pub fn j01() -> f64 {
    bessel_j0_zero(1)
}

/// Smallest positive root of J₀(e) = J₁(e), e ≈ 1.4347.
///
/// This is the lowest positive eigenvalue of the non-magnetic Dirac operator
/// with infinite-mass boundary conditions on the unit disk.
pub fn dirac_disk_root() -> f64 {
    // d/dx (J0 - J1) = -J1 - (J0 - J1/x)
    newton_bracketed(
        |x| {
            let j0 = bessel_j0(x);
            let j1 = bessel_j1(x);
            (j0 - j1, -j1 - (j0 - j1 / x))
        },
        1.0,
        2.0,
    )
}

/// λ₁ of the Dirichlet Laplacian on a disk of the given area: π j₀,₁² / area.
pub fn dirichlet_disk_ground_state(area: f64) -> f64 {
    let j = j01();
    PI * j * j / area
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_values() {
        assert_relative_eq!(bessel_j0(0.0), 1.0);
        assert_relative_eq!(bessel_j0(1.0), 0.765_197_686_557_966_6, epsilon = 1e-15);
        assert_relative_eq!(bessel_j1(1.0), 0.440_050_585_744_933_5, epsilon = 1e-15);
        assert_relative_eq!(bessel_j0(5.0), -0.177_596_771_314_338_3, epsilon = 1e-14);
        assert_relative_eq!(bessel_j1(10.0), 0.043_472_746_168_861_44, epsilon = 1e-12);
    }

    #[test]
    fn zeros_of_j0() {
        assert_relative_eq!(bessel_j0_zero(1), 2.404_825_557_695_773, epsilon = 1e-14);
        assert_relative_eq!(bessel_j0_zero(2), 5.520_078_110_286_311, epsilon = 1e-13);
        assert_relative_eq!(bessel_j0_zero(3), 8.653_727_912_911_013, epsilon = 1e-12);
    }

    #[test]
    fn disk_ground_state_unit_area() {
        assert_relative_eq!(
            dirichlet_disk_ground_state(1.0),
            18.168_414_535_537_2,
            epsilon = 1e-9
        );
    }

    #[test]
    fn dirac_root_satisfies_equation() {
        let e = dirac_disk_root();
        assert!((bessel_j0(e) - bessel_j1(e)).abs() < 1e-14);
        assert!((1.43..1.44).contains(&e));
    }
}
