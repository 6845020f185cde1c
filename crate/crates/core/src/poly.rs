//! Sparse Zernike expansions and their pointwise evaluation.
//!
//! A [`ZernikePoly`] holds the coefficients of `u = Σ û_{m,n} P^(α)_{m,n}` where
//!
//! ```text
//! P^(α)_{m,n} = Γ(k+1)Γ(α+1)/Γ(k+α+1) · r^|m-n| e^{i(m-n)θ} J^(α,|m-n|)_k(2r²-1),   k = min(m,n)
//! ```
//!
//! are the disk polynomials orthogonal under `(1-|x|²)^α`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::jacobi::jacobi_value;
use crate::scalar::Real;
use crate::special::{ln_gamma_ratio_unchecked, ln_gamma_unchecked};

/// Double index `(m, n)` of a disk polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: usize,
    pub n: usize,
}

impl ModeIndex {
    pub const fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// Total degree `m + n`.
    pub fn degree(&self) -> usize {
        self.m + self.n
    }

    /// Angular order `m - n`.
    pub fn angular_order(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    /// Degree of the Jacobi factor, `min(m, n)`.
    pub fn radial_index(&self) -> usize {
        self.m.min(self.n)
    }

    /// `(n, m)`: the index of the mirror image under `x2 -> -x2`.
    pub fn reflect(&self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

impl From<(usize, usize)> for ModeIndex {
    fn from((m, n): (usize, usize)) -> Self {
        Self { m, n }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

pub(crate) fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > -T::one() && alpha.is_finite() {
        Ok(())
    } else {
        Err(ZernikeError::Parameter(alpha.as_f64()))
    }
}

/// Finite expansion in the disk polynomials `P^(α)_{m,n}`.
///
/// Zero coefficients are never stored. The empty expansion is the zero
/// polynomial and has degree 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZernikePoly<T> {
    alpha: T,
    coeffs: BTreeMap<ModeIndex, Complex<T>>,
}

impl<T: Real> ZernikePoly<T> {
    /// Builds an expansion from `(mode, coefficient)` pairs; see [`make_poly`].
    pub fn new<I>(alpha: T, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ModeIndex, Complex<T>)>,
    {
        check_alpha(alpha)?;
        let mut coeffs = BTreeMap::new();
        for (idx, c) in entries {
            match coeffs.entry(idx) {
                Entry::Occupied(_) => return Err(ZernikeError::DuplicateMode(idx)),
                Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        coeffs.retain(|_, c| !is_zero(c));
        Ok(Self { alpha, coeffs })
    }

    pub fn zero(alpha: T) -> Self {
        Self { alpha, coeffs: BTreeMap::new() }
    }

    /// The single basis element `P^(α)_{m,n}`.
    pub fn mode(alpha: T, m: usize, n: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(ModeIndex::new(m, n), Complex::new(T::one(), T::zero()));
        Self { alpha, coeffs }
    }

    /// Wraps an accumulated map, dropping exact zeros. The caller guarantees `alpha > -1`.
    pub(crate) fn from_map(alpha: T, mut coeffs: BTreeMap<ModeIndex, Complex<T>>) -> Self {
        coeffs.retain(|_, c| !is_zero(c));
        Self { alpha, coeffs }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn coeff(&self, m: usize, n: usize) -> Complex<T> {
        self.coeffs
            .get(&ModeIndex::new(m, n))
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn coeffs(&self) -> &BTreeMap<ModeIndex, Complex<T>> {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    /// Number of stored (non-zero) modes.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same as [`is_empty`](Self::is_empty): exact zeros are never stored.
    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// Largest `m + n` among stored modes, 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(ModeIndex::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::from_map(self.alpha, self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    /// Keeps the modes for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(ModeIndex) -> bool) -> Self {
        Self {
            alpha: self.alpha,
            coeffs: self.coeffs.iter().filter(|(k, _)| keep(**k)).map(|(k, v)| (*k, *v)).collect(),
        }
    }

    /// Swaps every `(m, n)` into `(n, m)`, leaving coefficients untouched.
    pub fn reflect(&self) -> Self {
        Self {
            alpha: self.alpha,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.reflect(), *v)).collect(),
        }
    }

    pub fn evaluate(&self, x1: T, x2: T) -> Complex<T> {
        evaluate(self, (x1, x2))
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.values().map(|c| c.norm()).fold(T::zero(), T::max)
    }
}

fn is_zero<T: Real>(c: &Complex<T>) -> bool {
    c.re == T::zero() && c.im == T::zero()
}

/// Builds a canonical [`ZernikePoly`]; rejects `alpha <= -1` and repeated modes.
pub fn make_poly<T: Real>(alpha: T, entries: &[(ModeIndex, Complex<T>)]) -> Result<ZernikePoly<T>> {
    ZernikePoly::new(alpha, entries.iter().copied())
}

/// Coefficient-wise `Σ c_i p_i`. All polynomials must share the same `alpha`.
pub fn linear_combine<T: Real>(terms: &[(Complex<T>, &ZernikePoly<T>)]) -> Result<ZernikePoly<T>> {
    let Some((_, first)) = terms.first() else {
        return Err(ZernikeError::Argument("linear_combine needs at least one term".into()));
    };
    let alpha = first.alpha;
    let mut acc: BTreeMap<ModeIndex, Complex<T>> = BTreeMap::new();
    for (c, p) in terms {
        if p.alpha != alpha {
            return Err(ZernikeError::ParameterMismatch(alpha.as_f64(), p.alpha.as_f64()));
        }
        for (k, v) in &p.coeffs {
            *acc.entry(*k).or_default() += v * c;
        }
    }
    Ok(ZernikePoly::from_map(alpha, acc))
}

/// `Γ(k+1)Γ(α+1)/Γ(k+α+1)`, the normalisation in front of the Jacobi factor.
pub(crate) fn basis_prefactor<T: Real>(alpha: T, k: usize) -> T {
    let kk = T::from_index(k);
    // written as a difference of two ratios so that k = 0 gives exactly 1
    (ln_gamma_ratio_unchecked(kk + T::one(), kk + alpha + T::one()) - ln_gamma_ratio_unchecked(T::one(), alpha + T::one())).exp()
}

/// Value of the single basis function `P^(α)_{m,n}` at `(x1, x2)`.
pub fn basis_value<T: Real>(alpha: T, idx: ModeIndex, x1: T, x2: T) -> Complex<T> {
    let q = idx.m.abs_diff(idx.n);
    let k = idx.radial_index();
    let z = if idx.m >= idx.n { Complex::new(x1, x2) } else { Complex::new(x1, -x2) };
    let t = T::lit(2.0) * (x1 * x1 + x2 * x2) - T::one();
    let radial = basis_prefactor(alpha, k) * jacobi_value(k, alpha, T::from_index(q), t);
    z.powu(q as u32) * radial
}

/// Evaluates `Σ û_{m,n} P^(α)_{m,n}(x)`.
///
/// Points outside the closed unit disk are accepted; the result is then a
/// polynomial extrapolation. At the origin only `m == n` modes contribute.
pub fn evaluate<T: Real>(p: &ZernikePoly<T>, point: (T, T)) -> Complex<T> {
    let (x1, x2) = point;
    p.coeffs
        .iter()
        .map(|(idx, c)| c * basis_value(p.alpha, *idx, x1, x2))
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
}

/// `ln h^(α)_{m,n}` without parameter checks.
pub(crate) fn ln_mode_norm_sq<T: Real>(alpha: T, m: usize, n: usize) -> T {
    let one = T::one();
    // ordered so that h(m, n) and h(n, m) round identically
    let (mm, nn) = (T::from_index(m.min(n)), T::from_index(m.max(n)));
    T::PI().ln() + T::lit(2.0) * ln_gamma_unchecked(alpha + one) - (mm + nn + alpha + one).ln()
        + ln_gamma_ratio_unchecked(mm + one, mm + alpha + one)
        + ln_gamma_ratio_unchecked(nn + one, nn + alpha + one)
}

pub(crate) fn mode_norm_sq_unchecked<T: Real>(alpha: T, m: usize, n: usize) -> T {
    ln_mode_norm_sq(alpha, m, n).exp()
}

/// `h^(α)_{m,n} = ‖P^(α)_{m,n}‖²` in `L²` with weight `(1-|x|²)^α`:
///
/// ```text
/// h = π Γ(α+1)² / (m+n+α+1) · Γ(m+1)/Γ(m+α+1) · Γ(n+1)/Γ(n+α+1)
/// ```
pub fn mode_norm_sq<T: Real>(alpha: T, m: usize, n: usize) -> Result<T> {
    check_alpha(alpha)?;
    Ok(mode_norm_sq_unchecked(alpha, m, n))
}

/// Eigenvalue `(m+n)(m+n+2+2α)` of the Zernike operator on mode `(m, n)`.
pub fn eigenvalue<T: Real>(alpha: T, m: usize, n: usize) -> T {
    let d = T::from_index(m + n);
    d * (d + T::lit(2.0) + T::lit(2.0) * alpha)
}
