//! Changes of weight parameter between Zernike families.
//!
//! Re-expanding `P^(α)_{m,n}` in the family `P^(γ)` only touches the diagonal
//! through `(m, n)`:
//!
//! ```text
//! P^(α)_{m,n} = Γ(m+1)Γ(n+1)Γ(α+1) / (Γ(α+m+1)Γ(α+n+1)Γ(γ+1))
//!     · Σ_{k=0}^{min(m,n)} (α-γ)_k Γ(α+m+n-k+1)/k!
//!         · Γ(γ+m-k+1)Γ(γ+n-k+1)(γ+m+n-2k+1) / (Γ(m-k+1)Γ(n-k+1)Γ(γ+m+n-k+2)) · P^(γ)_{m-k,n-k}
//! ```
//!
//! When lowering (`γ < α`) every term is positive. Raising by more than one
//! unit through this formula alternates in sign and loses digits above degree
//! ~200; [`reexpand`] therefore moves by unit steps with
//! [`raise_parameter_one`] or [`lower_parameter_one`] whenever the gap is an
//! integer.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::calculus::WirtingerDirection;
use crate::error::Result;
use crate::poly::{check_alpha, ModeIndex, ZernikePoly};
use crate::scalar::Real;
use crate::special::{ln_gamma_ratio_unchecked, ln_gamma_unchecked, pochhammer, LogScaled, Sign};

/// Connection coefficients of one mode: `(k, c_k)` with `P^(α)_{m,n} = Σ c_k P^(γ)_{m-k,n-k}`.
pub fn mode_connection<T: Real>(alpha: T, gamma: T, m: usize, n: usize) -> Vec<(usize, T)> {
    if alpha == gamma {
        return vec![(0, T::one())];
    }
    let one = T::one();
    let (mm, nn) = (T::from_index(m), T::from_index(n));
    let diff = alpha - gamma;
    let ln_front = ln_gamma_ratio_unchecked(mm + one, alpha + mm + one)
        + ln_gamma_ratio_unchecked(nn + one, alpha + nn + one)
        + ln_gamma_ratio_unchecked(alpha + one, gamma + one);
    let ln_gamma_diff = if diff > T::zero() { ln_gamma_unchecked(diff) } else { T::zero() };
    (0..=m.min(n))
        .map(|k| {
            let kk = T::from_index(k);
            // (α-γ)_k / k!
            let poch = if diff > T::zero() {
                LogScaled::from_log(ln_gamma_ratio_unchecked(diff + kk, kk + one) - ln_gamma_diff)
            } else {
                pochhammer(diff, k) * LogScaled::from_log(-ln_gamma_unchecked(kk + one))
            };
            let ln_rest = ln_gamma_ratio_unchecked(alpha + mm + nn - kk + one, gamma + mm + nn - kk + T::lit(2.0))
                + ln_gamma_ratio_unchecked(gamma + mm - kk + one, mm - kk + one)
                + ln_gamma_ratio_unchecked(gamma + nn - kk + one, nn - kk + one)
                + (gamma + mm + nn - T::lit(2.0) * kk + one).ln();
            let c = poch * LogScaled::from_log(ln_front + ln_rest);
            debug_assert!(diff < T::zero() || c.sign() != Sign::Negative);
            (k, c.to_real())
        })
        .collect()
}

/// Re-expands `p` in the family with parameter `gamma`, pointwise equal to `p`.
pub fn change_parameter<T: Real>(p: &ZernikePoly<T>, gamma: T) -> Result<ZernikePoly<T>> {
    check_alpha(gamma)?;
    let alpha = p.alpha();
    if alpha == gamma {
        return Ok(p.clone());
    }
    let mut acc: BTreeMap<ModeIndex, Complex<T>> = BTreeMap::new();
    for (idx, u) in p.iter() {
        for (k, c) in mode_connection(alpha, gamma, idx.m, idx.n) {
            if c != T::zero() {
                *acc.entry(ModeIndex::new(idx.m - k, idx.n - k)).or_default() += u * c;
            }
        }
    }
    Ok(ZernikePoly::from_map(gamma, acc))
}

/// Re-expands `p` at parameter `alpha + 1` using the two-term raising relation
///
/// ```text
/// (m+n+α+1) P^(α)_{m,n} = (m+α+1)(n+α+1)/(α+1) P^(α+1)_{m,n} - mn/(α+1) P^(α+1)_{m-1,n-1}
/// ```
pub fn raise_parameter_one<T: Real>(p: &ZernikePoly<T>) -> ZernikePoly<T> {
    let alpha = p.alpha();
    let one = T::one();
    let mut acc: BTreeMap<ModeIndex, Complex<T>> = BTreeMap::new();
    for (idx, u) in p.iter() {
        let (mm, nn) = (T::from_index(idx.m), T::from_index(idx.n));
        let denom = (mm + nn + alpha + one) * (alpha + one);
        *acc.entry(idx).or_default() += u * ((mm + alpha + one) * (nn + alpha + one) / denom);
        if idx.m > 0 && idx.n > 0 {
            *acc.entry(ModeIndex::new(idx.m - 1, idx.n - 1)).or_default() -= u * (mm * nn / denom);
        }
    }
    ZernikePoly::from_map(alpha + one, acc)
}

/// Re-expands `p` at parameter `alpha - 1` (which must exceed -1).
///
/// Solving the raising relation for `P^(α)_{m,n}` gives, along each diagonal,
/// `P^(α)_{m,n} = (c P^(α-1)_{m,n} + B P^(α)_{m-1,n-1}) / A` with positive
/// `A, B, c`, so a single top-down sweep suffices and no term ever cancels.
pub fn lower_parameter_one<T: Real>(p: &ZernikePoly<T>) -> Result<ZernikePoly<T>> {
    let one = T::one();
    let beta = p.alpha() - one;
    check_alpha(beta)?;
    let mut pending: BTreeMap<ModeIndex, Complex<T>> = p.coeffs().clone();
    let mut acc = BTreeMap::new();
    // BTreeMap order is lexicographic in (m, n), so the largest key always
    // has the largest radial index on its diagonal among those still pending.
    while let Some((idx, w)) = pending.pop_last() {
        let (mm, nn) = (T::from_index(idx.m), T::from_index(idx.n));
        let a = (mm + beta + one) * (nn + beta + one) / (beta + one);
        acc.insert(idx, w * ((mm + nn + beta + one) / a));
        if idx.m > 0 && idx.n > 0 {
            let b = mm * nn / (beta + one);
            *pending.entry(ModeIndex::new(idx.m - 1, idx.n - 1)).or_default() += w * (b / a);
        }
    }
    Ok(ZernikePoly::from_map(beta, acc))
}

/// Re-expands at `gamma`, stepping by unit raises or lowerings whenever
/// `gamma - alpha` is an integer and falling back to [`change_parameter`] otherwise.
pub fn reexpand<T: Real>(p: &ZernikePoly<T>, gamma: T) -> Result<ZernikePoly<T>> {
    check_alpha(gamma)?;
    let gap = gamma - p.alpha();
    if gap != T::zero() && gap == gap.round() {
        let steps = gap.abs().to_usize().unwrap_or(0);
        let mut q = p.clone();
        for _ in 0..steps {
            q = if gap > T::zero() { raise_parameter_one(&q) } else { lower_parameter_one(&q)? };
        }
        // the unit steps accumulate rounding in alpha itself
        return Ok(ZernikePoly::from_map(gamma, q.coeffs().clone()));
    }
    change_parameter(p, gamma)
}

/// `ln[(x+1)_l / (x+α+1)_l]` for `x >= 0`.
fn ln_poch_quotient<T: Real>(x: T, alpha: T, l: usize) -> T {
    let one = T::one();
    let ll = T::from_index(l);
    ln_gamma_ratio_unchecked(x + one + ll, x + alpha + one + ll) - ln_gamma_ratio_unchecked(x + one, x + alpha + one)
}

/// Coefficients of `∂p` in the same family `P^(α)`, straight from
///
/// ```text
/// (∂_{z*}u)_{m,n} = (m+n+α+1) Σ_l (m+1)_l/(m+α+1)_l · (n+1)_{l+1}/(n+α+1)_{l+1} · û_{m+l, n+1+l}
/// (∂_z u)_{m,n}   = (m+n+α+1) Σ_l (m+1)_{l+1}/(m+α+1)_{l+1} · (n+1)_l/(n+α+1)_l · û_{m+1+l, n+l}
/// ```
///
/// This is an independent route to `change_parameter(wirtinger_derivative(p, dir), p.alpha())`.
pub fn derivative_coeffs<T: Real>(p: &ZernikePoly<T>, dir: WirtingerDirection) -> ZernikePoly<T> {
    let alpha = p.alpha();
    let one = T::one();
    let mut acc: BTreeMap<ModeIndex, Complex<T>> = BTreeMap::new();
    for (src, u) in p.iter() {
        // target (m, n) = src - (l, l+1) for Dzstar, src - (l+1, l) for Dz
        let (dm, dn) = match dir {
            WirtingerDirection::Dzstar => (0, 1),
            WirtingerDirection::Dz => (1, 0),
        };
        if src.m < dm || src.n < dn {
            continue;
        }
        let lmax = (src.m - dm).min(src.n - dn);
        for l in 0..=lmax {
            let (m, n) = (src.m - dm - l, src.n - dn - l);
            let (mm, nn) = (T::from_index(m), T::from_index(n));
            let (lm, ln) = match dir {
                WirtingerDirection::Dzstar => (l, l + 1),
                WirtingerDirection::Dz => (l + 1, l),
            };
            let w = (ln_poch_quotient(mm, alpha, lm) + ln_poch_quotient(nn, alpha, ln)).exp() * (mm + nn + alpha + one);
            *acc.entry(ModeIndex::new(m, n)).or_default() += u * w;
        }
    }
    ZernikePoly::from_map(alpha, acc)
}

/// Zernike coefficients of the monomial `z^a z̄^b` at parameter `alpha`.
///
/// Writing `z^a z̄^b = r^{2 min} (r e^{±iθ})^{|a-b|}` and expanding
/// `((1+t)/2)^s` in `J^(α,q)_k(t)` gives only positive coefficients, so the
/// result carries full relative precision on every mode.
pub fn monomial_expansion<T: Real>(alpha: T, a: usize, b: usize) -> Result<ZernikePoly<T>> {
    check_alpha(alpha)?;
    let one = T::one();
    let s = a.min(b);
    let q = T::from_index(a.abs_diff(b));
    let ss = T::from_index(s);
    let mut acc = BTreeMap::new();
    // ((1+t)/2)^s = Σ_k s! Γ(q+s+1) (α+q+2k+1) Γ(α+q+k+1) / ((s-k)! Γ(q+k+1) Γ(α+q+s+k+2)) J^(α,q)_k(t)
    // and r^q e^{iqθ} J^(α,q)_k(2r²-1) = Γ(k+α+1)/(Γ(k+1)Γ(α+1)) P^(α)_{k+q, k} (or its reflection).
    for k in 0..=s {
        let kk = T::from_index(k);
        let ln_c = ln_gamma_ratio_unchecked(ss + one, ss - kk + one)
            + ln_gamma_ratio_unchecked(q + ss + one, q + kk + one)
            + ln_gamma_ratio_unchecked(alpha + q + kk + one, alpha + q + ss + kk + T::lit(2.0))
            + (alpha + q + T::lit(2.0) * kk + one).ln()
            + ln_gamma_ratio_unchecked(kk + alpha + one, kk + one)
            - ln_gamma_unchecked(alpha + one);
        let idx = if a >= b {
            ModeIndex::new(k + a - b, k)
        } else {
            ModeIndex::new(k, k + b - a)
        };
        acc.insert(idx, Complex::new(ln_c.exp(), T::zero()));
    }
    Ok(ZernikePoly::from_map(alpha, acc))
}
