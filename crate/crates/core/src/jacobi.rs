//! Univariate Jacobi polynomials `J^(a,b)_n`, normalised by `J^(a,b)_n(1) = C(n+a, n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::scalar::Real;
use crate::special::{pochhammer, LogScaled};

/// Degree and parameters of a Jacobi polynomial; `a` multiplies `ln(1-t)` in the weight, `b` multiplies `ln(1+t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams<T> {
    pub n: usize,
    pub a: T,
    pub b: T,
}

impl<T: Real> JacobiParams<T> {
    pub fn new(n: usize, a: T, b: T) -> Result<Self> {
        for p in [a, b] {
            if p <= -T::one() || !p.is_finite() {
                return Err(ZernikeError::Parameter(p.as_f64()));
            }
        }
        Ok(Self { n, a, b })
    }
}

/// Three-term recurrence in the degree; no parameter validation.
pub(crate) fn jacobi_value<T: Real>(n: usize, a: T, b: T, t: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let mut prev = one;
    if n == 0 {
        return prev;
    }
    let mut cur = ((a + b + two) * t + (a - b)) / two;
    for k in 1..n {
        let kk = T::from_index(k);
        let s = two * kk + a + b;
        let c1 = two * (kk + one) * (kk + a + b + one) * s;
        let c2 = (s + one) * (a * a - b * b);
        let c3 = (s + one) * (s + two) * s;
        let c4 = two * (kk + a) * (kk + b) * (s + two);
        let next = ((c2 + c3 * t) * cur - c4 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Value of `J^(a,b)_n(t)`.
pub fn jacobi_eval<T: Real>(params: &JacobiParams<T>, t: T) -> T {
    jacobi_value(params.n, params.a, params.b, t)
}

/// `J^(a,b)_n(t)` together with its derivative, via `d/dt J^(a,b)_n = (n+a+b+1)/2 · J^(a+1,b+1)_{n-1}`.
pub(crate) fn jacobi_value_and_derivative<T: Real>(n: usize, a: T, b: T, t: T) -> (T, T) {
    let v = jacobi_value(n, a, b, t);
    if n == 0 {
        return (v, T::zero());
    }
    let d = (T::from_index(n) + a + b + T::one()) / T::lit(2.0) * jacobi_value(n - 1, a + T::one(), b + T::one(), t);
    (v, d)
}

/// Connection coefficients `c_0..c_n` with `J^(source_a, b)_n = Σ_k c_k J^(target_a, b)_k`.
///
/// Each coefficient is a product of Pochhammer symbols evaluated in the log
/// domain. The degenerate case `target_a + b = -1`, where the closed form only
/// holds in the limit, is rejected.
pub fn jacobi_connection<T: Real>(n: usize, source_a: T, target_a: T, b: T) -> Result<Vec<T>> {
    JacobiParams::new(n, source_a, b)?;
    JacobiParams::new(n, target_a, b)?;
    let one = T::one();
    let two = T::lit(2.0);
    let ab = target_a + b;
    if ab + one == T::zero() {
        return Err(ZernikeError::UnsupportedParameter(format!(
            "target_a + b = -1 (target_a = {}, b = {})",
            target_a.as_f64(),
            b.as_f64()
        )));
    }
    let nn = T::from_index(n);
    let lead = pochhammer(b + one, n) / pochhammer(ab + two, n);
    let coeffs = (0..=n)
        .map(|k| {
            let kk = T::from_index(k);
            let num = pochhammer(source_a - target_a, n - k)
                * pochhammer(ab + one, k)
                * LogScaled::from_real(ab + two * kk + one)
                * pochhammer(b + source_a + nn + one, k);
            let den = pochhammer(one, n - k)
                * pochhammer(b + one, k)
                * LogScaled::from_real(ab + one)
                * pochhammer(ab + nn + two, k);
            (lead * num / den).to_real()
        })
        .collect();
    Ok(coeffs)
}
