//! Differential operators and weighted norms in coefficient space.
//!
//! The Wirtinger derivatives act on single modes and raise the parameter by one:
//!
//! ```text
//! ∂_{z*} P^(α)_{m,n} = (m+α+1) n / (α+1) · P^(α+1)_{m,n-1}
//! ∂_z    P^(α)_{m,n} = m (n+α+1) / (α+1) · P^(α+1)_{m-1,n}
//! ```
//!
//! with `∂_1 = ∂_z + ∂_{z*}` and `∂_2 = i(∂_z - ∂_{z*})`. Norms at a weight
//! other than a polynomial's own parameter are obtained by re-expansion, so
//! every quantity here is exact up to rounding.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::reexpand;
use crate::error::{Result, ZernikeError};
use crate::poly::{check_alpha, eigenvalue, mode_norm_sq_unchecked, ModeIndex, ZernikePoly};
use crate::scalar::Real;

/// Which family of `k`-th order derivatives enters a seminorm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeminormConvention {
    /// `Σ_{k1+k2=k} ‖∂_1^{k1} ∂_2^{k2} u‖²`
    #[default]
    Cartesian,
    /// `Σ_{k1+k2=k} ‖∂_z^{k1} ∂_{z*}^{k2} u‖²`
    #[serde(rename = "complex")]
    ComplexPair,
}

impl std::fmt::Display for SeminormConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeminormConvention::Cartesian => "cartesian",
            SeminormConvention::ComplexPair => "complex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WirtingerDirection {
    /// `∂_z = (∂_1 - i∂_2)/2`
    Dz,
    /// `∂_{z*} = (∂_1 + i∂_2)/2`
    Dzstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub fn wirtinger_derivative<T: Real>(p: &ZernikePoly<T>, dir: WirtingerDirection) -> ZernikePoly<T> {
    let alpha = p.alpha();
    let one = T::one();
    let mut acc = BTreeMap::new();
    for (idx, u) in p.iter() {
        let (mm, nn) = (T::from_index(idx.m), T::from_index(idx.n));
        match dir {
            WirtingerDirection::Dzstar if idx.n > 0 => {
                let f = (mm + alpha + one) * nn / (alpha + one);
                acc.insert(ModeIndex::new(idx.m, idx.n - 1), u * f);
            }
            WirtingerDirection::Dz if idx.m > 0 => {
                let f = mm * (nn + alpha + one) / (alpha + one);
                acc.insert(ModeIndex::new(idx.m - 1, idx.n), u * f);
            }
            _ => {}
        }
    }
    ZernikePoly::from_map(alpha + one, acc)
}

/// `∂_{z*}^{l2} ∂_z^{l1} p`, parameter raised by `l1 + l2`.
pub fn wirtinger_power<T: Real>(p: &ZernikePoly<T>, l1: usize, l2: usize) -> ZernikePoly<T> {
    let mut q = p.clone();
    for _ in 0..l1 {
        q = wirtinger_derivative(&q, WirtingerDirection::Dz);
    }
    for _ in 0..l2 {
        q = wirtinger_derivative(&q, WirtingerDirection::Dzstar);
    }
    q
}

fn add_into<T: Real>(acc: &mut BTreeMap<ModeIndex, Complex<T>>, p: &ZernikePoly<T>, c: Complex<T>) {
    for (idx, v) in p.iter() {
        *acc.entry(idx).or_default() += v * c;
    }
}

pub fn cartesian_derivative<T: Real>(p: &ZernikePoly<T>, axis: Axis) -> ZernikePoly<T> {
    let dz = wirtinger_derivative(p, WirtingerDirection::Dz);
    let dzs = wirtinger_derivative(p, WirtingerDirection::Dzstar);
    let (cz, czs) = match axis {
        Axis::X1 => (cplx(T::one()), cplx(T::one())),
        Axis::X2 => (Complex::new(T::zero(), T::one()), Complex::new(T::zero(), -T::one())),
    };
    let mut acc = BTreeMap::new();
    add_into(&mut acc, &dz, cz);
    add_into(&mut acc, &dzs, czs);
    ZernikePoly::from_map(p.alpha() + T::one(), acc)
}

/// `∂_1^{k1} ∂_2^{k2} p`, parameter raised by `k1 + k2`.
pub fn cartesian_power<T: Real>(p: &ZernikePoly<T>, k1: usize, k2: usize) -> ZernikePoly<T> {
    let mut q = p.clone();
    for _ in 0..k1 {
        q = cartesian_derivative(&q, Axis::X1);
    }
    for _ in 0..k2 {
        q = cartesian_derivative(&q, Axis::X2);
    }
    q
}

/// `x_2 ∂_1 p - x_1 ∂_2 p`, which equals `-∂_θ p`: each coefficient is multiplied by `-i(m-n)`.
pub fn angular_derivative<T: Real>(p: &ZernikePoly<T>) -> ZernikePoly<T> {
    let acc = p
        .iter()
        .map(|(idx, u)| {
            let f = -T::lit(idx.angular_order() as f64);
            (idx, u * Complex::new(T::zero(), f))
        })
        .collect();
    ZernikePoly::from_map(p.alpha(), acc)
}

/// `Σ û v̄ h` for two expansions in the same family.
fn diagonal_inner<T: Real>(p: &ZernikePoly<T>, q: &ZernikePoly<T>) -> Complex<T> {
    let alpha = p.alpha();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (idx, u) in p.iter() {
        let v = q.coeff(idx.m, idx.n);
        if v.re != T::zero() || v.im != T::zero() {
            acc += u * v.conj() * mode_norm_sq_unchecked(alpha, idx.m, idx.n);
        }
    }
    acc
}

/// `‖p‖²` at the polynomial's own weight: `Σ |û|² h` (Parseval).
pub fn norm_sq<T: Real>(p: &ZernikePoly<T>) -> T {
    let alpha = p.alpha();
    p.iter().map(|(idx, u)| u.norm_sqr() * mode_norm_sq_unchecked(alpha, idx.m, idx.n)).sum()
}

/// `‖p‖²` in `L²` with weight `ρ^weight_exp`.
pub fn weighted_norm_sq<T: Real>(p: &ZernikePoly<T>, weight_exp: T) -> Result<T> {
    check_alpha(weight_exp)?;
    Ok(norm_sq(&reexpand(p, weight_exp)?))
}

/// `⟨p, q⟩` in `L²` with weight `ρ^weight_exp`, both re-expanded at `weight_exp` first.
pub fn l2_inner_product<T: Real>(p: &ZernikePoly<T>, q: &ZernikePoly<T>, weight_exp: T) -> Result<Complex<T>> {
    check_alpha(weight_exp)?;
    if p.alpha() != q.alpha() {
        return Err(ZernikeError::ParameterMismatch(p.alpha().as_f64(), q.alpha().as_f64()));
    }
    let pw = reexpand(p, weight_exp)?;
    let qw = reexpand(q, weight_exp)?;
    Ok(diagonal_inner(&pw, &qw))
}

/// `|p|²_{H^k}` with weight `ρ^α`, `α = p.alpha()`; `k = 0` gives `‖p‖²`.
pub fn sobolev_seminorm_sq<T: Real>(p: &ZernikePoly<T>, k: usize, conv: SeminormConvention) -> T {
    let alpha = p.alpha();
    (0..=k)
        .map(|k1| {
            let d = match conv {
                SeminormConvention::Cartesian => cartesian_power(p, k1, k - k1),
                SeminormConvention::ComplexPair => wirtinger_power(p, k1, k - k1),
            };
            // lowering back to α is always admissible
            norm_sq(&reexpand(&d, alpha).expect("alpha > -1"))
        })
        .sum()
}

/// `‖p‖²_{H^k} = Σ_{i<=k} |p|²_{H^i}`.
pub fn sobolev_norm_sq<T: Real>(p: &ZernikePoly<T>, k: usize, conv: SeminormConvention) -> T {
    (0..=k).map(|i| sobolev_seminorm_sq(p, i, conv)).sum()
}

/// `‖∇p‖²` with the strengthened weight `ρ^{α+1}`, via `|∇u|² = 2(|∂_z u|² + |∂_{z*} u|²)`.
pub fn gradient_norm_sq_raised<T: Real>(p: &ZernikePoly<T>) -> T {
    let dz = wirtinger_derivative(p, WirtingerDirection::Dz);
    let dzs = wirtinger_derivative(p, WirtingerDirection::Dzstar);
    T::lit(2.0) * (norm_sq(&dz) + norm_sq(&dzs))
}

/// `‖∇p‖²` with the polynomial's own weight `ρ^α`.
pub fn gradient_norm_sq<T: Real>(p: &ZernikePoly<T>) -> T {
    let alpha = p.alpha();
    let dz = reexpand(&wirtinger_derivative(p, WirtingerDirection::Dz), alpha).expect("alpha > -1");
    let dzs = reexpand(&wirtinger_derivative(p, WirtingerDirection::Dzstar), alpha).expect("alpha > -1");
    T::lit(2.0) * (norm_sq(&dz) + norm_sq(&dzs))
}

/// `Σ (1 + λ_{m,n}) |û|² h_{m,n}`.
pub fn wz_norm_sq<T: Real>(p: &ZernikePoly<T>) -> T {
    let alpha = p.alpha();
    p.iter()
        .map(|(idx, u)| {
            (T::one() + eigenvalue(alpha, idx.m, idx.n)) * u.norm_sqr() * mode_norm_sq_unchecked(alpha, idx.m, idx.n)
        })
        .sum()
}

/// `Σ λ_{m,n} |û|² h_{m,n}`, the energy of the Zernike operator.
pub fn operator_energy<T: Real>(p: &ZernikePoly<T>) -> T {
    let alpha = p.alpha();
    p.iter()
        .map(|(idx, u)| eigenvalue(alpha, idx.m, idx.n) * u.norm_sqr() * mode_norm_sq_unchecked(alpha, idx.m, idx.n))
        .sum()
}

/// Applies `L^(α) u = -ρ^{-α} div(ρ^{α+1} ∇u) - (x_2∂_1 - x_1∂_2)² u`, diagonal in the basis.
pub fn apply_operator_l<T: Real>(p: &ZernikePoly<T>) -> ZernikePoly<T> {
    let alpha = p.alpha();
    let acc = p.iter().map(|(idx, u)| (idx, u * eigenvalue(alpha, idx.m, idx.n))).collect();
    ZernikePoly::from_map(alpha, acc)
}
