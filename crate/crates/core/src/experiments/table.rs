use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_t, truncation_degree};
use crate::calculus::{sobolev_norm_sq, sobolev_seminorm_sq, SeminormConvention};
use crate::error::{Result, ZernikeError};
use crate::projection::residual;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow<T> {
    #[serde(rename = "N")]
    pub n: usize,
    pub j: usize,
    /// `rat_r` for `r = 0..=l`.
    pub rat: Vec<T>,
    /// `egr_r` against the previous row; `None` on the first row.
    pub egr: Vec<Option<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable<T> {
    pub alpha: T,
    pub l: usize,
    pub convention: SeminormConvention,
    /// Full norms instead of seminorms in both numerator and denominator.
    pub use_norms: bool,
    pub rows: Vec<RateRow<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TableOptions {
    pub convention: SeminormConvention,
    pub use_norms: bool,
}

/// `j = l + 2^i` for `i = 1..=12`; at `l = 3` the truncation degrees run 15, 19, 27, ..., 8203.
pub fn default_j_list(l: usize) -> Vec<usize> {
    (1..=12).map(|i| l + (1usize << i)).collect()
}

/// `egr = ln(rat / rat') / ln(N / N')`.
pub fn egr<T: Real>(rat: T, rat_prev: T, n: usize, n_prev: usize) -> T {
    (rat / rat_prev).ln() / (T::from_index(n) / T::from_index(n_prev)).ln()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn row_ratios<T: Real>(alpha: T, l: usize, j: usize, opts: TableOptions) -> Result<Vec<T>> {
    let t = build_t(alpha, l, j)?;
    let r_poly = residual(&t, truncation_degree(l, j));
    let measure = |p, k| {
        if opts.use_norms {
            sobolev_norm_sq(p, k, opts.convention)
        } else {
            sobolev_seminorm_sq(p, k, opts.convention)
        }
    };
    let denom = measure(&t, l);
    Ok((0..=l).map(|r| (measure(&r_poly, r) / denom).sqrt()).collect())
}

pub fn rate_table<T: Real>(alpha: T, l: usize, j_list: &[usize], opts: TableOptions) -> Result<RateTable<T>> {
    if j_list.is_empty() {
        return Err(ZernikeError::Argument("empty j list".into()));
    }
    if j_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZernikeError::Argument("j list must be strictly increasing".into()));
    }
    let ratios: Vec<Vec<T>> = j_list
        .par_iter()
        .map(|&j| row_ratios(alpha, l, j, opts))
        .collect::<Result<_>>()?;
    let mut rows: Vec<RateRow<T>> = Vec::with_capacity(j_list.len());
    for (&j, rat) in j_list.iter().zip(ratios) {
        let n = truncation_degree(l, j);
        let egr_row = match rows.last() {
            None => vec![None; l + 1],
            Some(prev) => rat.iter().zip(&prev.rat).map(|(&a, &b)| Some(egr(a, b, n, prev.n))).collect(),
        };
        rows.push(RateRow { n, j, rat, egr: egr_row });
    }
    Ok(RateTable { alpha, l, convention: opts.convention, use_norms: opts.use_norms, rows })
}

impl<T: Real> RateTable<T> {
    /// CSV with header `N,rat0,egr0,...`; floats in shortest round-trip form, `egr` empty on the first row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N");
        for r in 0..=self.l {
            write!(out, ",rat{r},egr{r}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.n).unwrap();
            for (rat, egr) in row.rat.iter().zip(&row.egr) {
                write!(out, ",{:?}", rat.as_f64()).unwrap();
                match egr {
                    Some(e) => write!(out, ",{:?}", e.as_f64()).unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Slope of `ln rat_r` against `ln N` over the last `count` rows.
    pub fn tail_slope(&self, r: usize, count: usize) -> f64 {
        let tail = &self.rows[self.rows.len().saturating_sub(count)..];
        let xs: Vec<f64> = tail.iter().map(|row| row.n as f64).collect();
        let ys: Vec<f64> = tail.iter().map(|row| row.rat[r].as_f64()).collect();
        fit_slope(&xs, &ys)
    }

    /// Log-log plotting columns: `N`, every `rat_r`, and `C N^{e(l,r)}` anchored at the last row.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("N,logN");
        for r in 0..=self.l {
            write!(out, ",rat{r},log_rat{r}").unwrap();
        }
        for r in 0..=self.l {
            write!(out, ",ref{r},log_ref{r}").unwrap();
        }
        out.push('\n');
        let last = self.rows.last().expect("non-empty table");
        for row in &self.rows {
            let nf = row.n as f64;
            write!(out, "{},{:?}", row.n, nf.log10()).unwrap();
            for rat in &row.rat {
                write!(out, ",{:?},{:?}", rat.as_f64(), rat.as_f64().log10()).unwrap();
            }
            for r in 0..=self.l {
                let e = super::reference_exponent(self.l, r as f64).expect("r within [0, l]");
                let v = last.rat[r].as_f64() * (nf / last.n as f64).powf(e);
                write!(out, ",{:?},{:?}", v, v.log10()).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// One row of the published table at `α = 9.9`, `l = 3`: `(N, [rat0..rat3], [egr0..egr3])`.
pub type ReferenceRow = (usize, [f64; 4], Option<[f64; 4]>);

pub const TABLE1_REFERENCE: [ReferenceRow; 12] = [
    (15, [3.11e-05, 1.20e-03, 4.55e-02, 1.61e+00], None),
    (19, [1.66e-05, 8.06e-04, 4.06e-02, 1.96e+00], Some([-2.665, -1.687, -0.480, 0.820])),
    (27, [6.29e-06, 4.44e-04, 3.57e-02, 2.83e+00], Some([-2.754, -1.698, -0.369, 1.041])),
    (43, [1.67e-06, 2.02e-04, 3.25e-02, 5.28e+00], Some([-2.847, -1.692, -0.205, 1.342])),
    (75, [3.29e-07, 8.02e-05, 3.23e-02, 1.34e+01], Some([-2.921, -1.661, -0.008, 1.677])),
    (139, [5.29e-08, 2.96e-05, 3.60e-02, 4.54e+01], Some([-2.965, -1.615, 0.174, 1.977])),
    (267, [7.53e-09, 1.06e-05, 4.41e-02, 1.91e+02], Some([-2.986, -1.571, 0.311, 2.197])),
    (523, [1.01e-09, 3.77e-06, 5.75e-02, 9.17e+02], Some([-2.994, -1.540, 0.397, 2.336])),
    (1035, [1.30e-10, 1.33e-06, 7.80e-02, 4.76e+03], Some([-2.997, -1.522, 0.446, 2.414])),
    (2059, [1.65e-11, 4.72e-07, 1.08e-01, 2.58e+04], Some([-2.999, -1.511, 0.472, 2.456])),
    (4107, [2.08e-12, 1.67e-07, 1.51e-01, 1.43e+05], Some([-2.999, -1.506, 0.486, 2.478])),
    (8203, [2.61e-13, 5.90e-08, 2.12e-01, 7.99e+05], Some([-3.000, -1.503, 0.493, 2.489])),
];

/// Relative tolerance on `rat` after rounding to three significant figures.
pub const RAT_TOLERANCE: f64 = 5e-3;
/// Absolute tolerance on `egr`.
pub const EGR_TOLERANCE: f64 = 2e-3;

fn round_sig3(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(2 - e);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub rows_checked: usize,
    pub max_rat_rel_err: f64,
    pub max_egr_abs_err: f64,
    pub failures: Vec<String>,
}

impl ReferenceComparison {
    pub fn matches(&self) -> bool {
        self.failures.is_empty() && self.rows_checked == TABLE1_REFERENCE.len()
    }
}

/// Compares a table against the published values row by row (matched on `N`).
pub fn compare_with_reference<T: Real>(table: &RateTable<T>) -> ReferenceComparison {
    let mut cmp = ReferenceComparison { rows_checked: 0, max_rat_rel_err: 0.0, max_egr_abs_err: 0.0, failures: vec![] };
    if table.l != 3 {
        cmp.failures.push(format!("reference has l = 3, table has l = {}", table.l));
        return cmp;
    }
    for (n, rats, egrs) in TABLE1_REFERENCE.iter() {
        let Some(row) = table.rows.iter().find(|r| r.n == *n) else {
            cmp.failures.push(format!("row N={n} missing"));
            continue;
        };
        cmp.rows_checked += 1;
        for r in 0..4 {
            let got = round_sig3(row.rat[r].as_f64());
            let rel = (got - rats[r]).abs() / rats[r].abs();
            cmp.max_rat_rel_err = cmp.max_rat_rel_err.max(rel);
            if rel > RAT_TOLERANCE {
                cmp.failures.push(format!("N={n} rat{r}: got {got:.3e}, reference {:.3e}", rats[r]));
            }
            if let (Some(expected), Some(got)) = (egrs, row.egr[r]) {
                let err = (got.as_f64() - expected[r]).abs();
                cmp.max_egr_abs_err = cmp.max_egr_abs_err.max(err);
                if err > EGR_TOLERANCE {
                    cmp.failures.push(format!("N={n} egr{r}: got {:.4}, reference {:.3}", got.as_f64(), expected[r]));
                }
            }
        }
    }
    cmp
}
