use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{sharpness_residual, truncation_degree};
use super::table::fit_slope;
use crate::basis::monomial_expansion;
use crate::calculus::{norm_sq, sobolev_seminorm_sq, SeminormConvention};
use crate::error::{Result, ZernikeError};
use crate::poly::{mode_norm_sq_unchecked, ModeIndex, ZernikePoly};
use crate::projection::{expand_function, tail_norm_sq};
use crate::quadrature::{integrate, DiskQuadrature};
use crate::scalar::Real;

/// Extra degrees kept beyond the largest requested truncation when expanding `exp(x1)`.
const EXP_GUARD_DEGREES: usize = 40;

/// What [`l2_rate_sweep`] projects.
pub enum TargetFunction<'a> {
    /// A polynomial; errors are exact Parseval tails.
    Polynomial(ZernikePoly<f64>),
    /// `exp(x1)`, expanded exactly through its double Taylor series in `z, z̄`.
    ExpX1,
    /// The sharpness family `t^(α,l)_j`; requested degrees must have the form `2j + 2l - 1`.
    /// Errors are `‖R‖ / |t|_{H^l}` in the complex-pair convention.
    SharpnessFamily { l: usize },
    /// Any callable, expanded and measured with the supplied rule.
    Sampled { f: &'a (dyn Fn(f64, f64) -> Complex<f64> + Sync), rule: &'a DiskQuadrature<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    /// `‖u - Π_N u‖` at weight `ρ^α`.
    pub error: f64,
    /// `error · (N+1)^k`, bounded for `u ∈ H^k` and tending to zero for smooth `u`.
    pub scaled_error: f64,
    /// Log-slope against the previous row.
    pub local_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub alpha: f64,
    pub k: usize,
    pub rows: Vec<SweepRow>,
    /// Least-squares log-slope over all rows with nonzero error.
    pub fitted_slope: Option<f64>,
}

impl RateReport {
    /// Each local slope is strictly more negative than the one before.
    pub fn is_superalgebraic(&self) -> bool {
        let slopes: Vec<f64> = self.rows.iter().filter_map(|r| r.local_slope).collect();
        slopes.len() >= 2 && slopes.windows(2).all(|w| w[1] < w[0])
    }
}

/// Exact coefficients of `exp(x1) = Σ_{a,b} z^a z̄^b / (2^{a+b} a! b!)` through total degree `max_degree`.
///
/// Every contribution is positive, so the coefficients keep full relative
/// precision even where they are far below quadrature roundoff.
pub fn exp_x1_expansion<T: Real>(alpha: T, max_degree: usize) -> Result<ZernikePoly<T>> {
    let mut acc: BTreeMap<ModeIndex, Complex<T>> = BTreeMap::new();
    let ln_fact = |k: usize| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    for s in 0..=max_degree {
        for a in 0..=s {
            let b = s - a;
            let w = T::lit((-(s as f64) * std::f64::consts::LN_2 - ln_fact(a) - ln_fact(b)).exp());
            for (idx, c) in monomial_expansion(alpha, a, b)?.iter() {
                *acc.entry(idx).or_default() += c * w;
            }
        }
    }
    ZernikePoly::new(alpha, acc)
}

fn check_degrees(degrees: &[usize]) -> Result<()> {
    if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZernikeError::Argument("degrees must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// `‖u - Π_N u‖` for each `N` in `degrees`, with local and fitted log-slopes.
pub fn l2_rate_sweep(target: &TargetFunction<'_>, alpha: f64, k: usize, degrees: &[usize]) -> Result<RateReport> {
    check_degrees(degrees)?;
    let max_n = *degrees.last().expect("non-empty");
    let errors: Vec<f64> = match target {
        TargetFunction::Polynomial(p) => {
            if p.alpha() != alpha {
                return Err(ZernikeError::ParameterMismatch(p.alpha(), alpha));
            }
            degrees.iter().map(|&n| tail_norm_sq(p, n).sqrt()).collect()
        }
        TargetFunction::ExpX1 => {
            let u = exp_x1_expansion(alpha, max_n + EXP_GUARD_DEGREES)?;
            degrees.iter().map(|&n| tail_norm_sq(&u, n).sqrt()).collect()
        }
        TargetFunction::SharpnessFamily { l } => degrees
            .iter()
            .map(|&n| {
                let twice_j = (n + 1).checked_sub(2 * l).filter(|v| v % 2 == 0 && v / 2 >= *l);
                let j = twice_j
                    .map(|v| v / 2)
                    .ok_or_else(|| ZernikeError::Argument(format!("N = {n} is not 2j + 2l - 1 with j >= l = {l}")))?;
                debug_assert_eq!(truncation_degree(*l, j), n);
                let (_, r) = sharpness_residual(alpha, *l, j)?;
                let t = super::build_t(alpha, *l, j)?;
                Ok((norm_sq(&r) / sobolev_seminorm_sq(&t, *l, SeminormConvention::ComplexPair)).sqrt())
            })
            .collect::<Result<_>>()?,
        TargetFunction::Sampled { f, rule } => degrees
            .iter()
            .map(|&n| {
                let p = expand_function(f, alpha, n, rule)?;
                let v = integrate(|x1, x2| Complex::new((f(x1, x2) - p.evaluate(x1, x2)).norm_sqr(), 0.0), rule);
                Ok(v.re.max(0.0).sqrt())
            })
            .collect::<Result<_>>()?,
    };

    let mut rows: Vec<SweepRow> = Vec::with_capacity(degrees.len());
    for (&n, &error) in degrees.iter().zip(&errors) {
        let local_slope = rows.last().and_then(|prev: &SweepRow| {
            (prev.error > 0.0 && error > 0.0).then(|| (error / prev.error).ln() / (n as f64 / prev.n as f64).ln())
        });
        let scaled_error = error * ((n + 1) as f64).powi(k as i32);
        rows.push(SweepRow { n, error, scaled_error, local_slope });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.error > 0.0).map(|r| (r.n as f64, r.error)).unzip();
    let fitted_slope = (xs.len() >= 2).then(|| fit_slope(&xs, &ys));
    Ok(RateReport { alpha, k, rows, fitted_slope })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub alpha: f64,
    pub max_degree: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest `‖∇p‖ / (N² ‖p‖)` observed.
    pub max_ratio: f64,
    pub argmax_degree: usize,
    pub mean_ratio: f64,
}

/// Random polynomial of exact degree `n`: every mode with `m + n <= N` gets
/// a standard complex normal scaled by `1/sqrt(h)`, so each mode carries the
/// same expected `L²` mass.
pub fn random_poly<R: Rng>(alpha: f64, n: usize, rng: &mut R) -> ZernikePoly<f64> {
    let mut acc = BTreeMap::new();
    for deg in 0..=n {
        for m in 0..=deg {
            let scale = mode_norm_sq_unchecked(alpha, m, deg - m).sqrt().recip();
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            acc.insert(ModeIndex::new(m, deg - m), Complex::new(re, im) * scale);
        }
    }
    ZernikePoly::from_map(alpha, acc)
}

/// `‖∇p‖_{ρ^α} / (N² ‖p‖_{ρ^α})` over `trials` random polynomials with degree uniform in `1..=max_degree`.
pub fn markov_sweep(alpha: f64, max_degree: usize, trials: usize, seed: u64) -> Result<MarkovReport> {
    crate::poly::check_alpha(alpha)?;
    if max_degree == 0 || trials == 0 {
        return Err(ZernikeError::Argument("max_degree and trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_ratio, mut argmax_degree, mut total) = (0.0_f64, 0, 0.0);
    for _ in 0..trials {
        let n = rng.random_range(1..=max_degree);
        let p = random_poly(alpha, n, &mut rng);
        let grad = sobolev_seminorm_sq(&p, 1, SeminormConvention::Cartesian);
        let ratio = (grad / norm_sq(&p)).sqrt() / (n * n) as f64;
        total += ratio;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_degree = n;
        }
    }
    Ok(MarkovReport { alpha, max_degree, trials, seed, max_ratio, argmax_degree, mean_ratio: total / trials as f64 })
}
