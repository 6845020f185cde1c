#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex;
use proptest::prelude::*;
use zernike_core::{ModeIndex, Poly};

pub const ALPHAS: [f64; 4] = [-0.5, 0.0, 1.0, 9.9];

/// Sparse polynomial with up to `max_terms` modes of degree `<= max_deg` and coefficients in the unit square.
pub fn arb_poly(alpha: f64, max_deg: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -1.0..1.0_f64, -1.0..1.0_f64), 1..=max_terms).prop_map(
        move |terms| {
            let mut map = BTreeMap::new();
            for (m, n, re, im) in terms {
                let n = n % (max_deg - m + 1);
                map.insert(ModeIndex::new(m, n), Complex::new(re, im));
            }
            Poly::new(alpha, map).unwrap()
        },
    )
}

pub fn arb_alpha() -> impl Strategy<Value = f64> {
    prop::sample::select(ALPHAS.to_vec())
}

pub fn arb_point() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.0_f64, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| (r.sqrt() * th.cos(), r.sqrt() * th.sin()))
}

/// `Σ |û| |P(x)|`, the natural scale for pointwise rounding errors of an expansion.
pub fn abs_sum(p: &Poly, (x, y): (f64, f64)) -> f64 {
    p.iter().map(|(i, u)| u.norm() * zernike_core::poly::basis_value(p.alpha(), i, x, y).norm()).sum()
}

/// Largest coefficient difference relative to the largest coefficient of either side.
pub fn coeff_distance(a: &Poly, b: &Poly) -> f64 {
    let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(f64::MIN_POSITIVE);
    let diff = zernike_core::linear_combine(&[(Complex::new(1.0, 0.0), a), (Complex::new(-1.0, 0.0), b)]).unwrap();
    diff.max_abs_coeff() / scale
}

pub fn modes_up_to(deg: usize) -> Vec<ModeIndex> {
    (0..=deg).flat_map(|d| (0..=d).map(move |m| ModeIndex::new(m, d - m))).collect()
}
