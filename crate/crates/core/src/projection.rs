//! Orthogonal projection onto total degree `<= N`, which in the Zernike basis
//! is plain truncation of the coefficient map.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::calculus::norm_sq;
use crate::error::{Result, ZernikeError};
use crate::poly::{basis_value, check_alpha, mode_norm_sq_unchecked, ModeIndex, ZernikePoly};
use crate::quadrature::DiskQuadrature;
use crate::scalar::Real;

/// `Π_N p`: keeps the modes with `m + n <= n_max`.
pub fn truncate<T: Real>(p: &ZernikePoly<T>, n_max: usize) -> ZernikePoly<T> {
    p.filter(|idx| idx.degree() <= n_max)
}

/// `p - Π_N p`.
pub fn residual<T: Real>(p: &ZernikePoly<T>, n_max: usize) -> ZernikePoly<T> {
    p.filter(|idx| idx.degree() > n_max)
}

/// `‖p - Π_N p‖²` at the polynomial's own weight, as a Parseval tail.
pub fn tail_norm_sq<T: Real>(p: &ZernikePoly<T>, n_max: usize) -> T {
    norm_sq(&residual(p, n_max))
}

/// Coefficients `û_{m,n} = ⟨f, P_{m,n}⟩ / h_{m,n}` for `m + n <= n_max`, by quadrature.
///
/// `rule` must carry the same weight parameter and integrate products of two
/// polynomials of degree `n_max` exactly.
pub fn expand_function<T, F>(f: F, alpha: T, n_max: usize, rule: &DiskQuadrature<T>) -> Result<ZernikePoly<T>>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
{
    check_alpha(alpha)?;
    if rule.alpha != alpha {
        return Err(ZernikeError::ParameterMismatch(rule.alpha.as_f64(), alpha.as_f64()));
    }
    if !rule.is_exact_for_products(n_max) {
        return Err(ZernikeError::Precondition(format!(
            "rule (radial exactness {}, angular exactness {}) is not exact for degree {n_max} products",
            rule.radial_exactness, rule.angular_exactness
        )));
    }
    let points = rule.points();
    let samples: Vec<Complex<T>> = points.iter().map(|&(x1, x2, w)| f(x1, x2) * w).collect();
    let mut acc = BTreeMap::new();
    for deg in 0..=n_max {
        for m in 0..=deg {
            let idx = ModeIndex::new(m, deg - m);
            let ip = points
                .iter()
                .zip(&samples)
                .map(|(&(x1, x2, _), &fw)| fw * basis_value(alpha, idx, x1, x2).conj())
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
            acc.insert(idx, ip / mode_norm_sq_unchecked(alpha, idx.m, idx.n));
        }
    }
    Ok(ZernikePoly::from_map(alpha, acc))
}
