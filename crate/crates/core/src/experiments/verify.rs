//! Self-checks behind the `verify` command: each compares a coefficient-space
//! result with an independent route (closed form, quadrature, or a second
//! algorithm).

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    build_t, closed_form_r_h1, closed_form_r_l2, closed_form_t_seminorm_complex, compare_with_reference,
    default_j_list, l2_rate_sweep, markov_sweep, random_poly, rate_table, sharpness_residual, TableOptions,
    TargetFunction,
};
use crate::basis::{change_parameter, derivative_coeffs, reexpand};
use crate::calculus::{
    angular_derivative, cartesian_derivative, gradient_norm_sq_raised, norm_sq, operator_energy,
    sobolev_seminorm_sq, wirtinger_derivative, Axis, SeminormConvention, WirtingerDirection,
};
use crate::poly::{basis_value, eigenvalue, mode_norm_sq, ModeIndex, ZernikePoly};
use crate::quadrature::{disk_rule, integrate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Largest coefficient difference relative to the largest coefficient of `b`.
pub fn coeff_distance(a: &ZernikePoly<f64>, b: &ZernikePoly<f64>) -> f64 {
    let scale = b.max_abs_coeff().max(a.max_abs_coeff()).max(f64::MIN_POSITIVE);
    let mut worst = 0.0_f64;
    for idx in a.coeffs().keys().chain(b.coeffs().keys()) {
        worst = worst.max((a.coeff(idx.m, idx.n) - b.coeff(idx.m, idx.n)).norm());
    }
    worst / scale
}

pub fn table1() -> Check {
    let mut lines = vec![];
    let mut any = false;
    for conv in [SeminormConvention::Cartesian, SeminormConvention::ComplexPair] {
        let opts = TableOptions { convention: conv, use_norms: false };
        match rate_table(9.9, 3, &default_j_list(3), opts) {
            Ok(t) => {
                let cmp = compare_with_reference(&t);
                any |= cmp.matches();
                lines.push(format!(
                    "{conv}: {} (max rat err {:.1e}, max egr err {:.1e})",
                    if cmp.matches() { "matches" } else { "does not match" },
                    cmp.max_rat_rel_err,
                    cmp.max_egr_abs_err
                ));
            }
            Err(e) => lines.push(format!("{conv}: {e}")),
        }
    }
    Check::new("table1 reproduction", any, lines.join("; "))
}

pub fn closed_forms(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let alpha = rng.random_range(-0.9..10.0);
        let l = rng.random_range(1..=4);
        let j = rng.random_range(l..=50);
        let (_, r) = sharpness_residual(alpha, l, j).expect("valid arguments");
        let t = build_t(alpha, l, j).expect("valid arguments");
        worst = worst
            .max(rel_err(norm_sq(&r), closed_form_r_l2(alpha, l, j).unwrap()))
            .max(rel_err(sobolev_seminorm_sq(&r, 1, SeminormConvention::Cartesian), closed_form_r_h1(alpha, l, j).unwrap()))
            .max(rel_err(
                sobolev_seminorm_sq(&t, l, SeminormConvention::ComplexPair),
                closed_form_t_seminorm_complex(alpha, l, j).unwrap(),
            ));
    }
    Check::new("closed forms", worst < 1e-9, format!("max relative error {worst:.2e}"))
}

pub fn sharpness() -> Check {
    let mut ok = true;
    let mut lines = vec![];
    for (alpha, l) in [(9.9, 3), (0.0, 2), (-0.5, 1)] {
        let t = rate_table(alpha, l, &default_j_list(l), TableOptions::default()).expect("valid table");
        let (s0, s1) = (t.tail_slope(0, 3), t.tail_slope(1, 3));
        let lf = l as f64;
        let pass = (s0 + lf).abs() < 0.01 && (s1 - (1.5 - lf)).abs() < 0.02;
        ok &= pass;
        lines.push(format!("(α={alpha}, l={l}): slope0 {s0:.4}, slope1 {s1:.4}"));
    }
    Check::new("proved rate sharpness", ok, lines.join("; "))
}

fn modes_up_to(deg: usize) -> Vec<ModeIndex> {
    (0..=deg).flat_map(|d| (0..=d).map(move |m| ModeIndex::new(m, d - m))).collect()
}

pub fn gram() -> Check {
    let modes = modes_up_to(8);
    let mut worst_diag = 0.0_f64;
    let mut worst_off = 0.0_f64;
    for alpha in [-0.5, 0.0, 1.0, 9.9] {
        let rule = disk_rule(alpha, 9, 17).expect("valid rule");
        let pts = rule.points();
        let vals: Vec<Vec<Complex<f64>>> =
            modes.iter().map(|&i| pts.iter().map(|&(x, y, _)| basis_value(alpha, i, x, y)).collect()).collect();
        let hmax = modes.iter().map(|i| mode_norm_sq(alpha, i.m, i.n).unwrap()).fold(0.0, f64::max);
        for (a, va) in modes.iter().zip(&vals) {
            for (b, vb) in modes.iter().zip(&vals) {
                let g: Complex<f64> = pts.iter().zip(va.iter().zip(vb)).map(|(p, (x, y))| x * y.conj() * p.2).sum();
                if a == b {
                    worst_diag = worst_diag.max(rel_err(g.re, mode_norm_sq(alpha, a.m, a.n).unwrap()));
                } else {
                    worst_off = worst_off.max(g.norm() / hmax);
                }
            }
        }
    }
    Check::new(
        "quadrature gram matrix",
        worst_diag < 1e-10 && worst_off < 1e-10,
        format!("diagonal {worst_diag:.2e}, off-diagonal {worst_off:.2e}"),
    )
}

pub fn coefficient_identities(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas = [-0.5, 0.0, 1.0, 9.9];
    let mut bern = 0.0_f64;
    for _ in 0..200 {
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let p = random_poly(alpha, rng.random_range(1..=12), &mut rng);
        let lhs = gradient_norm_sq_raised(&p) + norm_sq(&angular_derivative(&p));
        bern = bern.max(rel_err(lhs, operator_energy(&p)));
    }
    let mut deriv = 0.0_f64;
    for _ in 0..100 {
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let p = random_poly(alpha, rng.random_range(1..=20), &mut rng);
        for dir in [WirtingerDirection::Dz, WirtingerDirection::Dzstar] {
            let via_lowering = reexpand(&wirtinger_derivative(&p, dir), alpha).expect("lowering is admissible");
            deriv = deriv.max(coeff_distance(&derivative_coeffs(&p, dir), &via_lowering));
        }
    }
    let mut round = 0.0_f64;
    for _ in 0..50 {
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let p = random_poly(alpha, rng.random_range(1..=20), &mut rng);
        let back = change_parameter(&change_parameter(&p, alpha + 2.0).unwrap(), alpha).unwrap();
        round = round.max(coeff_distance(&back, &p));
    }
    Check::new(
        "exact coefficient identities",
        bern < 1e-11 && deriv < 1e-10 && round < 1e-10,
        format!("bernstein {bern:.2e}, derivative coefficients {deriv:.2e}, round trip {round:.2e}"),
    )
}

pub fn weak_form() -> Check {
    let mut worst_diag = 0.0_f64;
    let mut worst_off = 0.0_f64;
    for alpha in [-0.5, 0.0, 1.0, 9.9] {
        let rule = disk_rule(alpha, 6, 16).expect("valid rule");
        let modes = modes_up_to(3);
        let fields: Vec<[ZernikePoly<f64>; 3]> = modes
            .iter()
            .map(|i| {
                let p = ZernikePoly::mode(alpha, i.m, i.n);
                [cartesian_derivative(&p, Axis::X1), cartesian_derivative(&p, Axis::X2), angular_derivative(&p)]
            })
            .collect();
        let scale = modes.iter().map(|i| eigenvalue(alpha, i.m, i.n) * mode_norm_sq(alpha, i.m, i.n).unwrap()).fold(0.0, f64::max);
        for (a, fa) in modes.iter().zip(&fields) {
            for (b, fb) in modes.iter().zip(&fields) {
                let v = integrate(
                    |x, y| {
                        let rho = 1.0 - x * x - y * y;
                        let grad = fa[0].evaluate(x, y) * fb[0].evaluate(x, y).conj()
                            + fa[1].evaluate(x, y) * fb[1].evaluate(x, y).conj();
                        grad * rho + fa[2].evaluate(x, y) * fb[2].evaluate(x, y).conj()
                    },
                    &rule,
                );
                if a == b {
                    let expected = eigenvalue(alpha, a.m, a.n) * mode_norm_sq(alpha, a.m, a.n).unwrap();
                    let err = if expected == 0.0 { v.norm() / scale } else { rel_err(v.re, expected) };
                    worst_diag = worst_diag.max(err);
                } else {
                    worst_off = worst_off.max(v.norm() / scale);
                }
            }
        }
    }
    Check::new(
        "weak-form eigenpairs",
        worst_diag < 1e-8 && worst_off < 1e-8,
        format!("diagonal {worst_diag:.2e}, off-diagonal {worst_off:.2e}"),
    )
}

/// Relative spread `(max - min) / mean` of the Markov maxima over `seeds`.
pub fn markov_spread(alpha: f64, seeds: &[u64]) -> (Vec<f64>, f64) {
    let maxima: Vec<f64> =
        seeds.iter().map(|&s| markov_sweep(alpha, 40, 1000, s).expect("valid sweep").max_ratio).collect();
    let mean = maxima.iter().sum::<f64>() / maxima.len() as f64;
    let (lo, hi) = maxima.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    (maxima, (hi - lo) / mean)
}

pub fn markov(seed: u64) -> Check {
    let seeds: Vec<u64> = (0..4).map(|i| seed + i).collect();
    let mut ok = true;
    let mut lines = vec![];
    for alpha in [0.0, 9.9] {
        let (maxima, spread) = markov_spread(alpha, &seeds);
        // within ±10% of the mean means a total spread below 20%
        ok &= maxima.iter().all(|m| m.is_finite()) && spread <= 0.2;
        lines.push(format!("α={alpha}: maxima {maxima:.4?}, spread {spread:.3}"));
    }
    Check::new("markov sweep", ok, lines.join("; "))
}

pub fn l2_rate() -> Check {
    match l2_rate_sweep(&TargetFunction::ExpX1, 0.0, 2, &[4, 8, 12, 16]) {
        Ok(rep) => {
            let errs: Vec<String> = rep.rows.iter().map(|r| format!("{:.2e}", r.error)).collect();
            let slopes: Vec<String> = rep.rows.iter().filter_map(|r| r.local_slope).map(|s| format!("{s:.2}")).collect();
            Check::new(
                "l2 projection rate",
                rep.is_superalgebraic(),
                format!("errors [{}], local slopes [{}]", errs.join(", "), slopes.join(", ")),
            )
        }
        Err(e) => Check::new("l2 projection rate", false, e.to_string()),
    }
}

/// Every check, in a fixed order.
pub fn run_all(seed: u64) -> Vec<Check> {
    vec![
        table1(),
        closed_forms(seed),
        sharpness(),
        gram(),
        coefficient_identities(seed),
        weak_form(),
        markov(seed),
        l2_rate(),
    ]
}
