//! Empirical moments of a function table under the uniform measure on its
//! positions: mean, second moment, variance, the off-diagonal pair means
//! and windowed lag covariances.
//!
//! Everything is accumulated in exact integers and divided once at the end.
//!
//! The off-diagonal pair mean `M_ij = Σ_{i≠j} f(i)f(j) / (n(n-1))` and the
//! product form `(S² - Σf²) / n²` share the numerator `S² - Σf²`, so their
//! ratio is exactly `n/(n-1)` whenever the numerator is nonzero. The
//! "pairwise independence" relation between them is an algebraic
//! near-identity rather than a property of `f`.

use std::io::{self, Write};

use serde::Serialize;

use crate::arith::FunctionTable;
use crate::error::{Error, Result};
use crate::window::Window;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub n: u64,
    pub sum: i64,
    pub sum_sq: i64,
    pub mean: f64,
    pub second_moment: f64,
    /// `second_moment - mean²`, from the exact rational `(nΣf² - (Σf)²)/n²`.
    pub variance: f64,
}

pub fn moment_summary_of(table: &FunctionTable) -> Result<MomentSummary> {
    if table.is_empty() {
        return Err(Error::Argument("moments of an empty table".into()));
    }
    let (sum, sum_sq) = sums(table.values());
    let n = table.len() as u64;
    let nf = n as f64;
    let var_num = i128::from(n) * i128::from(sum_sq) - i128::from(sum) * i128::from(sum);
    Ok(MomentSummary {
        n,
        sum,
        sum_sq,
        mean: sum as f64 / nf,
        second_moment: sum_sq as f64 / nf,
        variance: var_num as f64 / (u128::from(n) * u128::from(n)) as f64,
    })
}

fn sums(values: &[i8]) -> (i64, i64) {
    values.iter().fold((0i64, 0i64), |(s, q), &v| {
        let v = i64::from(v);
        (s + v, q + v * v)
    })
}

/// `S(n)² - Σ f(k)²`, the common numerator of both pair means.
pub fn pair_numerator(table: &FunctionTable) -> i128 {
    let (s, q) = sums(table.values());
    i128::from(s) * i128::from(s) - i128::from(q)
}

/// `M_ij[f, n]`: mean of `f(i)f(j)` over ordered pairs `i ≠ j`.
pub fn pair_mean_offdiag(table: &FunctionTable) -> Result<f64> {
    let n = table.len() as u128;
    if n < 2 {
        return Err(Error::Argument("off-diagonal pair mean needs n >= 2".into()));
    }
    Ok(pair_numerator(table) as f64 / (n * (n - 1)) as f64)
}

/// `M_i[f, n]·M_j[f, n]` in the form `(S(n)² - Σf²)/n²`.
pub fn pair_mean_product(table: &FunctionTable) -> Result<f64> {
    let n = table.len() as u128;
    if n < 1 {
        return Err(Error::Argument("pair mean product needs n >= 1".into()));
    }
    Ok(pair_numerator(table) as f64 / (n * n) as f64)
}

/// Exact numerator `W·Σ f(k)f(k+ℓ) - Σ f(k) · Σ f(k+ℓ)` of the windowed
/// lag covariance; the covariance is this divided by `W²`.
pub fn lag_covariance_numerator(table: &FunctionTable, lag: u64, window: Window) -> Result<i128> {
    if lag == 0 {
        return Err(Error::Argument("lag must be positive".into()));
    }
    if window.len < 2 {
        return Err(Error::Argument(format!("window length {} < 2", window.len)));
    }
    let (a, b) = window.pair_slices(table, lag)?;
    let (mut sa, mut sb, mut sab) = (0i64, 0i64, 0i64);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (i64::from(x), i64::from(y));
        sa += x;
        sb += y;
        sab += x * y;
    }
    Ok(window.len as i128 * i128::from(sab) - i128::from(sa) * i128::from(sb))
}

/// Empirical `cov(f(k), f(k+ℓ))` for `k` uniform over `window`, centred by
/// the two separate window means.
pub fn lag_covariance(table: &FunctionTable, lag: u64, window: Window) -> Result<f64> {
    let num = lag_covariance_numerator(table, lag, window)?;
    let w = window.len as u128;
    Ok(num as f64 / (w * w) as f64)
}

/// Lag covariances over the default window `[start, n - ℓ]` per lag.
pub fn covariance_profile(table: &FunctionTable, lags: &[u64]) -> Result<Vec<(u64, f64)>> {
    lags.iter()
        .map(|&lag| Ok((lag, lag_covariance(table, lag, Window::full(table, lag)?)?)))
        .collect()
}

pub fn write_covariance_csv<W: Write>(rows: &[(u64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "lag,covariance")?;
    for (lag, c) in rows {
        writeln!(out, "{lag},{c}")?;
    }
    Ok(())
}
