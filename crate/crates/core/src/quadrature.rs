//! Product quadrature on the unit disk for the weight `(1-|x|²)^α`.
//!
//! With `s = 2r² - 1` the weighted disk integral becomes
//!
//! ```text
//! ∫_{B²} f ρ^α dx = 2^{-α-2} ∫_0^{2π} ∫_{-1}^{1} f(r(s) cos θ, r(s) sin θ) (1-s)^α ds dθ,   r(s) = sqrt((1+s)/2)
//! ```
//!
//! The radial integral uses Gauss–Jacobi nodes for `(1-s)^α`, the angular one
//! the equiangular trapezoid rule. Nothing here touches the closed-form mode
//! norms, so agreement between the two is an independent check.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::jacobi::jacobi_value_and_derivative;
use crate::poly::check_alpha;
use crate::scalar::Real;
use crate::special::ln_gamma_ratio_unchecked;

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Gauss–Jacobi nodes (ascending) and weights for `(1-s)^a (1+s)^b` on `(-1, 1)`.
///
/// Newton iteration on the three-term recurrence, started from Chebyshev
/// points; roots already found are deflated out of the Newton update so each
/// iteration converges to a new root.
pub fn gauss_jacobi<T: Real>(n: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    check_alpha(a)?;
    check_alpha(b)?;
    if n == 0 {
        return Err(ZernikeError::Argument("Gauss–Jacobi rule needs at least one node".into()));
    }
    let one = T::one();
    let tol = T::lit(NEWTON_TOL).max(T::epsilon() * T::lit(4.0));
    let mut roots: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-type guess shifted by the asymptotic zero spacing, largest root first
        let theta = T::PI() * (T::from_index(i) + T::lit(0.75) + a / T::lit(2.0))
            / (T::from_index(n) + (a + b + one) / T::lit(2.0));
        let mut x = theta.cos();
        if let Some(&last) = roots.last() {
            if x >= last {
                x = last - (last + one) * T::lit(1e-3);
            }
        }
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = jacobi_value_and_derivative(n, a, b, x);
            let deflate: T = roots.iter().map(|&r| (x - r).recip()).sum();
            let step = p / (dp - p * deflate);
            let mut next = x - step;
            if !(next > -one && next < one) {
                next = if next >= one { (x + one) / T::lit(2.0) } else { (x - one) / T::lit(2.0) };
            }
            let done = (next - x).abs() <= tol * (one + x.abs());
            x = next;
            if done {
                break;
            }
        }
        roots.push(x);
    }
    roots.sort_by(|p, q| p.partial_cmp(q).expect("finite nodes"));

    let nn = T::from_index(n);
    // 2^{a+b+1} Γ(n+a+1)Γ(n+b+1) / (Γ(n+a+b+1) n!)
    let ln_c = (a + b + one) * T::LN_2()
        + ln_gamma_ratio_unchecked(nn + a + one, nn + one)
        + ln_gamma_ratio_unchecked(nn + b + one, nn + a + b + one);
    let c = ln_c.exp();
    let weights = roots
        .iter()
        .map(|&x| {
            let (_, dp) = jacobi_value_and_derivative(n, a, b, x);
            c / ((one - x * x) * dp * dp)
        })
        .collect();
    Ok((roots, weights))
}

/// Tensor rule on the disk: Gauss–Jacobi in `s = 2r²-1`, trapezoid in `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskQuadrature<T> {
    pub alpha: T,
    pub radial_nodes: Vec<T>,
    pub radial_weights: Vec<T>,
    /// `K`: nodes `θ_k = 2πk/K`, each with weight `2π/K`.
    pub angular_count: usize,
    /// Highest degree in `s` integrated exactly, `2 n_rad - 1`.
    pub radial_exactness: usize,
    /// Highest `|j|` for which `e^{ijθ}` is integrated exactly, `K - 1`.
    pub angular_exactness: usize,
}

impl<T: Real> DiskQuadrature<T> {
    /// Whether products of two polynomials of total degree `<= degree` are integrated exactly.
    pub fn is_exact_for_products(&self, degree: usize) -> bool {
        self.radial_exactness >= degree && self.angular_exactness >= 2 * degree
    }

    /// All `(x1, x2, w)` triples, with every constant factor folded into `w`.
    pub fn points(&self) -> Vec<(T, T, T)> {
        let two = T::lit(2.0);
        let k = T::from_index(self.angular_count);
        let scale = T::TAU() / k * two.powf(-self.alpha - two);
        let mut pts = Vec::with_capacity(self.radial_nodes.len() * self.angular_count);
        for (&s, &w) in self.radial_nodes.iter().zip(&self.radial_weights) {
            let r = ((T::one() + s) / two).sqrt();
            for j in 0..self.angular_count {
                let theta = T::TAU() * T::from_index(j) / k;
                pts.push((r * theta.cos(), r * theta.sin(), w * scale));
            }
        }
        pts
    }
}

/// Builds the disk rule with `n_rad` radial and `n_ang` angular nodes.
pub fn disk_rule<T: Real>(alpha: T, n_rad: usize, n_ang: usize) -> Result<DiskQuadrature<T>> {
    check_alpha(alpha)?;
    if n_ang == 0 {
        return Err(ZernikeError::Argument("disk rule needs at least one angular node".into()));
    }
    let (radial_nodes, radial_weights) = gauss_jacobi(n_rad, alpha, T::zero())?;
    Ok(DiskQuadrature {
        alpha,
        radial_nodes,
        radial_weights,
        angular_count: n_ang,
        radial_exactness: 2 * n_rad - 1,
        angular_exactness: n_ang - 1,
    })
}

/// Smallest rule that integrates products of two polynomials of degree `<= degree` exactly.
pub fn disk_rule_for_degree<T: Real>(alpha: T, degree: usize) -> Result<DiskQuadrature<T>> {
    disk_rule(alpha, degree / 2 + 1, 2 * degree + 1)
}

/// `∫_{B²} f ρ^α dx` approximated by `rule`.
pub fn integrate<T, F>(f: F, rule: &DiskQuadrature<T>) -> Complex<T>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
{
    rule.points()
        .into_iter()
        .map(|(x1, x2, w)| f(x1, x2) * w)
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
}
