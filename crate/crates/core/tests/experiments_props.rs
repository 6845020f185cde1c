mod common;

use common::coeff_distance;
use proptest::prelude::*;
use zernike_core::calculus::norm_sq;
use zernike_core::experiments::{
    build_t, closed_form_r_h1, closed_form_r_l2, closed_form_t_seminorm_complex, default_j_list, egr,
    l2_rate_sweep, rate_table, reference_exponent, sharpness_residual, truncation_degree, RateTable, TableOptions,
    TargetFunction,
};
use zernike_core::{sobolev_seminorm_sq, Poly, SeminormConvention};

fn table(alpha: f64, l: usize, convention: SeminormConvention) -> RateTable<f64> {
    rate_table(alpha, l, &default_j_list(l), TableOptions { convention, use_norms: false }).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn closed_forms_match_coefficient_space(alpha in -0.9..10.0_f64, l in 1usize..=4, dj in 0usize..=46) {
        let j = l + dj;
        let t = build_t(alpha, l, j).unwrap();
        let (_, r) = sharpness_residual(alpha, l, j).unwrap();
        let l2 = closed_form_r_l2(alpha, l, j).unwrap();
        let h1 = closed_form_r_h1(alpha, l, j).unwrap();
        let tl = closed_form_t_seminorm_complex(alpha, l, j).unwrap();
        prop_assert!(rel(norm_sq(&r), l2) <= 1e-9);
        prop_assert!(rel(sobolev_seminorm_sq(&r, 1, SeminormConvention::Cartesian), h1) <= 1e-9);
        prop_assert!(rel(sobolev_seminorm_sq(&t, l, SeminormConvention::ComplexPair), tl) <= 1e-9);
    }
}

#[test]
fn egr_recomputes_bitwise_from_rat() {
    for conv in [SeminormConvention::Cartesian, SeminormConvention::ComplexPair] {
        let t = table(9.9, 3, conv);
        assert!(t.rows[0].egr.iter().all(Option::is_none));
        assert!(t.rows.windows(2).all(|w| w[0].n < w[1].n));
        for w in t.rows.windows(2) {
            for r in 0..=3 {
                let e = egr(w[1].rat[r], w[0].rat[r], w[1].n, w[0].n);
                assert_eq!(w[1].egr[r].unwrap().to_bits(), e.to_bits());
            }
        }
    }
}

#[test]
fn proved_rates_are_sharp() {
    for (alpha, l) in [(9.9, 3), (0.0, 2), (-0.5, 1)] {
        let t = table(alpha, l, SeminormConvention::Cartesian);
        let lf = l as f64;
        let e0 = t.tail_slope(0, 3);
        let e1 = t.tail_slope(1, 3);
        assert!((e0 + lf).abs() < 0.01, "α={alpha} l={l}: egr0 {e0}");
        assert!((e1 - (1.5 - lf)).abs() < 0.02, "α={alpha} l={l}: egr1 {e1}");
    }
}

#[test]
fn higher_seminorm_rates_approach_the_conjectured_exponent() {
    for (alpha, l) in [(9.9, 3), (0.0, 2), (0.0, 3)] {
        let t = table(alpha, l, SeminormConvention::Cartesian);
        for r in 2..=l {
            let e = reference_exponent(l, r as f64).unwrap();
            let first = t.rows[1].egr[r].unwrap();
            let last = t.rows.last().unwrap().egr[r].unwrap();
            assert!((last - e).abs() < (first - e).abs(), "α={alpha} l={l} r={r}: {first} -> {last} vs {e}");
        }
    }
}

#[test]
fn published_table_spot_values() {
    let t = table(9.9, 3, SeminormConvention::Cartesian);
    let ns: Vec<usize> = t.rows.iter().map(|r| r.n).collect();
    assert_eq!(ns, [15, 19, 27, 43, 75, 139, 267, 523, 1035, 2059, 4107, 8203]);
    assert!((t.rows[1].egr[0].unwrap() - -2.665).abs() < 2e-3);
    let last = t.rows.last().unwrap();
    assert!(rel(last.rat[0], 2.61e-13) < 5e-3);
    assert!((last.egr[0].unwrap() - -3.0).abs() < 2e-3);
}

#[test]
fn sharpness_family_l2_slope() {
    let (alpha, l) = (0.0, 2);
    let js = [8usize, 16, 32, 64];
    let degrees: Vec<usize> = js.iter().map(|&j| truncation_degree(l, j)).collect();
    let report = l2_rate_sweep(&TargetFunction::SharpnessFamily { l }, alpha, 0, &degrees).unwrap();
    for (row, &j) in report.rows.iter().zip(&js) {
        let oracle = (closed_form_r_l2(alpha, l, j).unwrap() / closed_form_t_seminorm_complex(alpha, l, j).unwrap()).sqrt();
        assert!(rel(row.error, oracle) < 1e-9);
    }
    let s = report.fitted_slope.unwrap();
    assert!((s + 2.0).abs() < 0.05, "slope {s}");
}

#[test]
fn polynomial_target_has_zero_error_at_its_degree() {
    let p = build_t(1.0, 2, 4).unwrap();
    let deg = p.degree();
    let report = l2_rate_sweep(&TargetFunction::Polynomial(p), 1.0, 2, &[deg - 1, deg, deg + 5]).unwrap();
    assert!(report.rows[0].error > 0.0);
    assert_eq!(report.rows[1].error, 0.0);
    assert_eq!(report.rows[2].error, 0.0);
}

#[test]
fn exp_x1_decays_superalgebraically() {
    let report = l2_rate_sweep(&TargetFunction::ExpX1, 0.0, 2, &[4, 8, 12, 16]).unwrap();
    assert!(report.is_superalgebraic(), "{report:?}");
    assert!(report.rows.windows(2).all(|w| w[1].scaled_error < w[0].scaled_error));
}

#[test]
fn small_sharpness_instance() {
    let (n, r) = sharpness_residual(0.0, 1, 1).unwrap();
    assert_eq!(n, 3);
    let expected = Poly::mode(0.0, 2, 2).scale(num_complex::Complex::new(0.25, 0.0));
    assert!(coeff_distance(&r, &expected) < 1e-14);
    assert_eq!(build_t(0.0, 1, 1).unwrap().degree(), 4);
    assert!(build_t(0.0, 3, 2).is_err());
}

#[test]
fn reference_exponents() {
    assert_eq!(reference_exponent(3, 0.0).unwrap(), -3.0);
    assert_eq!(reference_exponent(3, 1.0).unwrap(), -1.5);
    assert_eq!(reference_exponent(3, 3.0).unwrap(), 2.5);
    assert!(reference_exponent(3, 3.5).is_err());
}

#[test]
fn csv_layout() {
    let t = rate_table(0.0, 1, &[1, 2, 4], TableOptions::default()).unwrap();
    let csv = t.to_csv();
    let lines: Vec<&str> = csv.split('\n').collect();
    assert_eq!(lines[0], "N,rat0,egr0,rat1,egr1");
    assert!(!csv.contains('\r'));
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "3");
    assert_eq!(first[2], "");
    assert_eq!(first[4], "");
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(second[1].parse::<f64>().unwrap(), t.rows[1].rat[0]);
    assert!(rate_table(0.0, 2, &[3, 2], TableOptions::default()).is_err());
}
