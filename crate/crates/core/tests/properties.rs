//! Property tests for closed forms, geometry and the small dense kernels.

use approx::assert_relative_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use magspec::dirac::{
    dirac_lower_bound, dirac_upper_bounds, hardy_basis_grams, minmax_quotient, ParametricBoundary,
};
use magspec::geometry::{mask_perimeter, rasterize, DomainSpec};
use magspec::linalg::smallest_eigenvalues;
use magspec::maglap::hs_lower_bound_value;
use magspec::torsion::{g_function, rect_deficit_bound, solve_torsion_fd, torsion_rect_series};
use magspec::verify::fit_decay;

proptest! {
    #[test]
    fn quotient_monotone(b in 0.0..10.0f64, a in 0.1..10.0f64, d in 0.0..10.0f64, step in 0.0..5.0f64) {
        let q = minmax_quotient(b, a, d).unwrap();
        prop_assert!(minmax_quotient(b + step, a, d).unwrap() >= q);
        prop_assert!(minmax_quotient(b, a, d + step).unwrap() >= q);
        prop_assert!(minmax_quotient(b, a + step, d).unwrap() <= q);
        prop_assert!(q >= b / a - 1e-12 && q >= (d / a).sqrt() - 1e-12);
    }

    #[test]
    fn g_forms_agree_and_obey_bound(x in 0.01..10.0f64, y in 0.01..10.0f64) {
        let g = g_function(x, y);
        let scale = 2.0 * y / (1.0 + y * y) + x * y / (1.0 + x * x * y * y) + x * y / (x * x + y * y);
        prop_assert!((g.defining - g.factorized).abs() <= 1e-12 * scale);
        prop_assert!(g.defining.abs() <= g_function(x, 1.0).factorized + 1e-12);
        prop_assert!(g_function(1.0, y).factorized.abs() <= 1e-15);
    }

    #[test]
    fn rectangle_series_rotation_invariant(a in 1.0..4.0f64) {
        let s = torsion_rect_series(a, 200).value;
        let t = torsion_rect_series(1.0 / a, 200).value;
        prop_assert!((s - t).abs() <= 1e-10);
        let bound = rect_deficit_bound(a);
        prop_assert!((bound - rect_deficit_bound(1.0 / a)).abs() <= 1e-15);
        prop_assert!((0.0..1.0 / 24.0).contains(&bound));
    }

    #[test]
    fn rectangle_deficit_holds(a in 1.01..4.0f64) {
        let deficit = torsion_rect_series(1.0, 200).value - torsion_rect_series(a, 200).value;
        prop_assert!(deficit > rect_deficit_bound(a));
    }

    #[test]
    fn lower_bounds_decrease_in_field(b in 0.0..60.0f64, step in 0.01..10.0f64, phi in 0.01..0.1f64) {
        prop_assert!(hs_lower_bound_value(1.0, phi, b + step) < hs_lower_bound_value(1.0, phi, b));
        prop_assert!(dirac_lower_bound(1.0, phi, b + step) < dirac_lower_bound(1.0, phi, b));
    }

    #[test]
    fn decay_model_recovered(c in -2.0..2.0f64, p in 0.0..3.0f64, s in 0.05..0.5f64) {
        let pts: Vec<(f64, f64)> = (0..8)
            .map(|k| 10.0 + 5.0 * k as f64)
            .map(|b: f64| (b, (c + p * b.ln() - s * b).exp()))
            .collect();
        let fit = fit_decay(&pts, s / 2.0).unwrap();
        prop_assert!((fit.slope - s).abs() < 1e-8);
        prop_assert!((fit.joint_exponent - p).abs() < 1e-6);
        prop_assert!((fit.prefactor_exponent - p).abs() < 1e-6);
    }

    #[test]
    fn sturm_bisection_matches_dense(
        diag in prop::collection::vec(-5.0..5.0f64, 2..24),
        seed in prop::collection::vec(-2.0..2.0f64, 23),
    ) {
        let n = diag.len();
        let off = &seed[..n - 1];
        let m = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => diag[i],
            1 => off[i.min(j)],
            _ => 0.0,
        });
        let mut dense: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        let k = n.min(4);
        for (a, b) in smallest_eigenvalues(&diag, off, k).iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn raster_area_and_perimeter(aspect in 1.0..3.0f64) {
        let d = rasterize(&DomainSpec::rectangle(aspect).unwrap(), 128).unwrap();
        prop_assert!((d.mask.area() - 1.0).abs() < 0.03);
        let exact = 2.0 * (aspect + 1.0 / aspect);
        prop_assert!((mask_perimeter(&d.mask) / exact - 1.0).abs() < 0.02);
        let e = rasterize(&DomainSpec::ellipse(aspect).unwrap(), 128).unwrap();
        prop_assert!((e.mask.area() - 1.0).abs() < 0.02);
        prop_assert_eq!(e.mask.components(), 1);
    }

    #[test]
    fn raster_translation_keeps_area(dx in -0.5..0.5f64, dy in -0.5..0.5f64) {
        let spec = DomainSpec::ellipse(1.5).unwrap();
        let a = rasterize(&spec, 96).unwrap().mask.area();
        let b = rasterize(&spec.translated(dx, dy), 96).unwrap().mask.area();
        prop_assert!((a - b).abs() < 0.01);
    }

    #[test]
    fn hardy_grams_hermitian_and_bounds_sandwiched(aspect in 1.0..2.0f64, field in 0.0..25.0f64) {
        let spec = DomainSpec::ellipse(aspect).unwrap();
        let d = rasterize(&spec, 96).unwrap();
        let tf = solve_torsion_fd(&d).unwrap();
        let pb = ParametricBoundary::from_spec(&spec, 1024).unwrap();
        let g = hardy_basis_grams(&d, &pb, &tf, field, 6).unwrap();
        for m in [&g.interior_gram, &g.boundary_gram] {
            let defect = (m - m.adjoint()).norm() / m.norm();
            prop_assert!(defect < 1e-12);
            let (w, _) = magspec::linalg::hermitian_eigen(m);
            prop_assert!(w.iter().all(|&x| x > 0.0));
        }
        let upper = dirac_upper_bounds(&g, 2).unwrap();
        prop_assert!(upper[0] <= upper[1]);
        prop_assert!(upper[0] >= dirac_lower_bound(d.area(), tf.max_value, field));
    }
}

#[test]
fn quotient_documented_values() {
    assert_relative_eq!(
        minmax_quotient(3.0, 2.0, 0.0).unwrap(),
        1.5,
        epsilon = 1e-15
    );
    assert_relative_eq!(
        minmax_quotient(0.0, 4.0, 9.0).unwrap(),
        1.5,
        epsilon = 1e-15
    );
    assert_relative_eq!(
        minmax_quotient(1.0, 1.0, 1.0).unwrap(),
        (1.0 + 5f64.sqrt()) / 2.0,
        epsilon = 1e-15
    );
    assert!(minmax_quotient(1.0, 0.0, 1.0).is_err());
    assert!(minmax_quotient(-1.0, 1.0, 1.0).is_err());
}
