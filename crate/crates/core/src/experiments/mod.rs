//! The projection-error sharpness experiment and its closed forms.
//!
//! For `j >= l` the polynomial
//!
//! ```text
//! t^(α,l)_j = Σ_{k=0}^{l} (-l)_k Γ(α+j+l-k+1)² (α+2j+2l-2k+1) / (k! Γ(j+l-k+1)² (α+2j+l-k+1)_{l+1}) · P^(α)_{j+l-k, j+l-k}
//! ```
//!
//! has single-mode `l`-th Wirtinger derivatives, while its residual past
//! degree `N = 2j+2l-1` is the `k = 0` term alone. Comparing seminorms of the
//! two gives the rate table.

mod sweeps;
mod table;
pub mod verify;

pub use sweeps::{
    exp_x1_expansion, l2_rate_sweep, markov_sweep, random_poly, MarkovReport, RateReport, SweepRow, TargetFunction,
};
pub use table::{
    compare_with_reference, default_j_list, egr, fit_slope, rate_table, RateRow, RateTable, ReferenceComparison,
    ReferenceRow, TableOptions, EGR_TOLERANCE, RAT_TOLERANCE, TABLE1_REFERENCE,
};

use num_complex::Complex;

use crate::error::{Result, ZernikeError};
use crate::poly::{check_alpha, ModeIndex, ZernikePoly};
use crate::projection::residual;
use crate::scalar::Real;
use crate::special::{ln_gamma_ratio_unchecked, ln_pochhammer_pos, pochhammer, LogScaled};

fn check_jl(l: usize, j: usize) -> Result<()> {
    if l == 0 {
        return Err(ZernikeError::Argument("l must be positive".into()));
    }
    if j < l {
        return Err(ZernikeError::Argument(format!("j = {j} must be at least l = {l}")));
    }
    Ok(())
}

/// Truncation degree `N = 2j + 2l - 1` paired with `j`.
pub fn truncation_degree(l: usize, j: usize) -> usize {
    2 * j + 2 * l - 1
}

pub fn build_t<T: Real>(alpha: T, l: usize, j: usize) -> Result<ZernikePoly<T>> {
    check_alpha(alpha)?;
    check_jl(l, j)?;
    let one = T::one();
    let (a, jj, ll) = (alpha, T::from_index(j), T::from_index(l));
    let mut acc = std::collections::BTreeMap::new();
    for k in 0..=l {
        let kk = T::from_index(k);
        let s = jj + ll - kk;
        let lead = pochhammer(-ll, k);
        let ln_mag = T::lit(2.0) * ln_gamma_ratio_unchecked(a + s + one, s + one)
            + (a + T::lit(2.0) * s + one).ln()
            - ln_gamma_ratio_unchecked(kk + one, one)
            - ln_pochhammer_pos(a + T::lit(2.0) * jj + ll - kk + one, l + 1);
        let c = (lead * LogScaled::from_log(ln_mag)).to_real();
        let d = j + l - k;
        acc.insert(ModeIndex::new(d, d), Complex::new(c, T::zero()));
    }
    Ok(ZernikePoly::from_map(alpha, acc))
}

/// `(N, R)` with `R = t - Π_N t`.
pub fn sharpness_residual<T: Real>(alpha: T, l: usize, j: usize) -> Result<(usize, ZernikePoly<T>)> {
    let t = build_t(alpha, l, j)?;
    let n = truncation_degree(l, j);
    Ok((n, residual(&t, n)))
}

fn closed_form_args<T: Real>(alpha: T, l: usize, j: usize) -> Result<(T, T, T)> {
    check_alpha(alpha)?;
    check_jl(l, j)?;
    Ok((alpha, T::from_index(j), T::from_index(l)))
}

/// `‖R‖²` at weight `ρ^α`.
pub fn closed_form_r_l2<T: Real>(alpha: T, l: usize, j: usize) -> Result<T> {
    let (a, jj, ll) = closed_form_args(alpha, l, j)?;
    let (one, two) = (T::one(), T::lit(2.0));
    let ln = two * ln_gamma_ratio_unchecked(a + one, one) - (two * jj + two * ll + a + one).ln()
        + two * ln_gamma_ratio_unchecked(a + jj + ll + one, jj + ll + one)
        + two * ln_gamma_ratio_unchecked(a + two * jj + ll + one, a + two * jj + two * ll + one);
    Ok(T::PI() * ln.exp())
}

/// `|R|²_{H¹}` in the Cartesian convention.
pub fn closed_form_r_h1<T: Real>(alpha: T, l: usize, j: usize) -> Result<T> {
    let (a, jj, ll) = closed_form_args(alpha, l, j)?;
    let (one, two) = (T::one(), T::lit(2.0));
    let ln = two * ln_gamma_ratio_unchecked(a + one, one)
        + two * ln_gamma_ratio_unchecked(a + jj + ll + one, jj + ll + one)
        + two * (a + two * jj + two * ll + one).ln()
        + (jj + ll).ln()
        + (a + jj + ll + one).ln()
        - (a + one).ln()
        - two * ln_pochhammer_pos(a + two * jj + ll + one, l + 1);
    Ok(T::lit(4.0) * T::PI() * ln.exp())
}

/// `Σ_q ‖∂_{z*}^q ∂_z^{l-q} t‖²` at weight `ρ^α`.
pub fn closed_form_t_seminorm_complex<T: Real>(alpha: T, l: usize, j: usize) -> Result<T> {
    let (a, jj, ll) = closed_form_args(alpha, l, j)?;
    let (one, two) = (T::one(), T::lit(2.0));
    let ln_front = two * ln_gamma_ratio_unchecked(a + one, one) - (two * jj + ll + a + one).ln();
    let sum: T = (0..=l)
        .map(|q| {
            let qq = T::from_index(q);
            (ln_front
                + ln_gamma_ratio_unchecked(a + jj + ll - qq + one, jj + ll - qq + one)
                + ln_gamma_ratio_unchecked(a + jj + qq + one, jj + qq + one))
            .exp()
        })
        .sum();
    Ok(T::PI() * sum)
}

/// Theoretical exponent `e(l, r)`: `3r/2 - l` on `[0, 1]`, `2r - 1/2 - l` beyond.
pub fn reference_exponent(l: usize, r: f64) -> Result<f64> {
    if !(0.0..=l as f64).contains(&r) {
        return Err(ZernikeError::Argument(format!("r = {r} outside [0, {l}]")));
    }
    let l = l as f64;
    Ok(if r <= 1.0 { 1.5 * r - l } else { -0.5 + 2.0 * r - l })
}
