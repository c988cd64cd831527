use dirac_sphere::cli::{curve_csv, spectrum_csv};
use dirac_sphere::geometry::{conformal_factor, v_from_w, w_from_v};
use dirac_sphere::gauge::{alpha_beta, FnProfile, Sign, WaveNumber};
use dirac_sphere::oracle::{
    build_sl_matrix, compare_nonzero_spectra, compose_factorized, curvature_coefficient, FactorConvention, Grid,
};
use dirac_sphere::specfun::jacobi;
use dirac_sphere::spectra::{classify_levels_model2, energy_model2};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_reflection(n in 0usize..9, a in -0.9f64..3.0, b in -0.9f64..3.0, x in -1.0f64..1.0) {
        let lhs = jacobi(n, a, b, -x).unwrap();
        let rhs = if n % 2 == 0 { 1.0 } else { -1.0 } * jacobi(n, b, a, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
    }

    #[test]
    fn chart_round_trip(w in -15.0f64..15.0) {
        let v = v_from_w(w);
        prop_assert!(v.abs() < std::f64::consts::FRAC_PI_2);
        let back = w_from_v(v).unwrap();
        prop_assert!((back - w).abs() <= 1e-9 * w.cosh());
        prop_assert!((conformal_factor(2.0, w) * w.cosh() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn energy_scales_as_inverse_radius(m in 0usize..8, r in 1e-3f64..1e3, kv in 1.5f64..20.0) {
        let k = WaveNumber::new(kv).unwrap();
        let (a, b) = alpha_beta(k, Sign::Minus, Sign::Plus).unwrap();
        let one = energy_model2(m, a, b, k, 1.0).unwrap();
        let line = energy_model2(m, a, b, k, r).unwrap();
        prop_assert_eq!(one.e_sq_bar, line.e_sq_bar);
        if let (Some((m1, p1)), Some((mr, pr))) = (one.energies(), line.energies()) {
            prop_assert_eq!(p1, -m1);
            prop_assert_eq!(pr, -mr);
            prop_assert!((pr * r - p1).abs() <= 1e-14 * p1.abs());
        }
    }

    #[test]
    fn spectrum_table_has_one_row_per_level(levels in 1usize..12) {
        let k = WaveNumber::new(2.0).unwrap();
        let lines = classify_levels_model2(1.0, 1.0 / 3.0, k, 1.0, levels).unwrap();
        let text = spectrum_csv(&lines);
        prop_assert_eq!(text.lines().count(), levels + 1);
        for row in text.lines().skip(1) {
            prop_assert_eq!(row.split(',').count(), 6);
        }
    }

    #[test]
    fn curve_rows_count_grid_points_and_poles(n in 3usize..200, pole in -3.0f64..3.0) {
        let g = Grid::new(4.0, n).unwrap();
        let text = curve_csv(|w| 1.0 / (w - pole), &[pole], g);
        let body: Vec<&str> = text.lines().skip(1).collect();
        let on_grid = g.points().iter().any(|w| *w == pole);
        prop_assert_eq!(body.len(), n + usize::from(!on_grid));
        let ws: Vec<f64> = body.iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
        prop_assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sturm_liouville_matrix_is_symmetric(c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, n in 5usize..60) {
        let g = Grid::new(3.0, n).unwrap();
        let m = build_sl_matrix(curvature_coefficient, |w| c0 + c1 * w.tanh(), g).unwrap();
        prop_assert_eq!(m.asymmetry(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_profiles_factorize_isospectrally(
        a0 in -3.0f64..3.0,
        a1 in -2.0f64..2.0,
        s in 0.3f64..2.0,
        kv in -4.0f64..4.0,
    ) {
        let k = WaveNumber::new(kv).unwrap();
        let prof = FnProfile::new(move |w: f64| a0 + a1 * (s * w).tanh(), move |w: f64| a1 * s / (s * w).cosh().powi(2));
        let g = Grid::new(3.0, 60).unwrap();
        for conv in [FactorConvention::literal(), FactorConvention::consistent()] {
            let (ddt, dtd) = compose_factorized(&prof, k, g, conv).unwrap();
            let iso = compare_nonzero_spectra(&ddt, &dtd).unwrap();
            prop_assert!(iso.max_relative_deviation <= 1e-8, "{:?}", iso);
        }
    }
}
