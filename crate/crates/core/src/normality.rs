//! Distributional diagnostics for residual samples: standardization,
//! the standard normal CDF, the Kolmogorov–Smirnov distance, shape moments
//! and a fixed-range histogram.
//!
//! The residuals `R(1), ..., R(n)` of one summatory function are strongly
//! dependent, so the KS distance is descriptive only. `pass_hint` compares
//! it with a configurable threshold and is not a hypothesis test.

use std::f64::consts::SQRT_2;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::summatory::{NeumaierSum, ResidualSeries};

pub const DEFAULT_KS_THRESHOLD: f64 = 0.05;
pub const DEFAULT_BINS: usize = 40;
pub const HISTOGRAM_LIMIT: f64 = 5.0;
/// Smallest residual sample accepted by [`normality_report`].
pub const MIN_REPORT_SAMPLE: usize = 100;

fn compensated_mean<I: Iterator<Item = f64>>(xs: I, n: usize) -> f64 {
    let mut acc = NeumaierSum::default();
    xs.for_each(|x| acc.add(x));
    acc.value() / n as f64
}

fn check_finite(sample: &[f64]) -> Result<()> {
    match sample.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::Argument(format!("non-finite sample value at position {i}"))),
        None => Ok(()),
    }
}

/// Location and scale with denominator `n`, by corrected two-pass sums.
fn location_scale(sample: &[f64]) -> (f64, f64) {
    let n = sample.len();
    let m0 = compensated_mean(sample.iter().copied(), n);
    let m = m0 + compensated_mean(sample.iter().map(|x| x - m0), n);
    let var = compensated_mean(sample.iter().map(|x| (x - m) * (x - m)), n);
    (m, var.sqrt())
}

/// `(x - mean) / sd` with population moments.
pub fn standardize(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.len() < 2 {
        return Err(Error::Argument(format!("standardize needs at least 2 values, got {}", sample.len())));
    }
    check_finite(sample)?;
    let (m, sd) = location_scale(sample);
    if sd.is_nan() || sd <= 0.0 {
        return Err(Error::DegenerateSample("sample variance is zero".into()));
    }
    Ok(sample.iter().map(|x| (x - m) / sd).collect())
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("normal_cdf of non-finite {x}")));
    }
    Ok(0.5 * libm::erfc(-x / SQRT_2))
}

/// `sup |F̂(x) - Φ(x)|` over the sample's empirical CDF.
pub fn ks_statistic(sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Argument("KS statistic of an empty sample".into()));
    }
    check_finite(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x)?;
        d = d.max((i + 1) as f64 / n - phi).max(phi - i as f64 / n);
    }
    Ok(d)
}

/// Skewness and excess kurtosis of a standardized sample.
pub fn moment_summary(standardized: &[f64]) -> Result<(f64, f64)> {
    if standardized.len() < 2 {
        return Err(Error::Argument("moment summary needs at least 2 values".into()));
    }
    check_finite(standardized)?;
    let n = standardized.len();
    let m = compensated_mean(standardized.iter().copied(), n);
    let central = |p: i32| compensated_mean(standardized.iter().map(|x| (x - m).powi(p)), n);
    let var = central(2);
    if (var - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("sample is not standardized (variance {var})")));
    }
    Ok((central(3), central(4) - 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    /// Lower edge; `None` for the underflow bin.
    pub lo: Option<f64>,
    pub count: u64,
}

/// Equal-width bins over `[-5, 5)` plus an underflow bin first and an
/// overflow bin (`x >= 5`) last.
pub fn histogram(sample: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::Argument("histogram needs at least one bin".into()));
    }
    let width = 2.0 * HISTOGRAM_LIMIT / bins as f64;
    let mut counts = vec![0u64; bins + 2];
    for &x in sample {
        let slot = if x < -HISTOGRAM_LIMIT {
            0
        } else if x >= HISTOGRAM_LIMIT {
            bins + 1
        } else {
            1 + (((x + HISTOGRAM_LIMIT) / width) as usize).min(bins - 1)
        };
        counts[slot] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lo: match i {
                0 => None,
                i if i == bins + 1 => Some(HISTOGRAM_LIMIT),
                i => Some(-HISTOGRAM_LIMIT + (i - 1) as f64 * width),
            },
            count,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PassHint {
    Consistent,
    Inconsistent,
    NotAssessed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityReport {
    pub sample_size: usize,
    pub mean_before: f64,
    pub std_before: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks_statistic: f64,
    pub ks_threshold: Option<f64>,
    pub pass_hint: PassHint,
    pub histogram: Vec<HistogramBin>,
}

impl NormalityReport {
    pub fn write_histogram_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "bin_lo,count")?;
        for b in &self.histogram {
            match b.lo {
                Some(lo) => writeln!(out, "{lo},{}", b.count)?,
                None => writeln!(out, "-inf,{}", b.count)?,
            }
        }
        Ok(())
    }
}

pub fn normality_report(
    residuals: &ResidualSeries,
    bins: usize,
    ks_threshold: Option<f64>,
) -> Result<NormalityReport> {
    normality_report_from_sample(&residuals.residuals, bins, ks_threshold)
}

/// Same as [`normality_report`] for an arbitrary sample.
pub fn normality_report_from_sample(
    sample: &[f64],
    bins: usize,
    ks_threshold: Option<f64>,
) -> Result<NormalityReport> {
    if sample.len() < MIN_REPORT_SAMPLE {
        return Err(Error::Argument(format!(
            "normality report needs at least {MIN_REPORT_SAMPLE} values, got {}",
            sample.len()
        )));
    }
    if let Some(t) = ks_threshold {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Argument(format!("KS threshold must lie in (0, 1], got {t}")));
        }
    }
    let z = standardize(sample)?;
    let (mean_before, std_before) = location_scale(sample);
    let ks = ks_statistic(&z)?;
    let (skewness, excess_kurtosis) = moment_summary(&z)?;
    let pass_hint = match ks_threshold {
        Some(t) if ks <= t => PassHint::Consistent,
        Some(_) => PassHint::Inconsistent,
        None => PassHint::NotAssessed,
    };
    Ok(NormalityReport {
        sample_size: sample.len(),
        mean_before,
        std_before,
        skewness,
        excess_kurtosis,
        ks_statistic: ks,
        ks_threshold,
        pass_hint,
        histogram: histogram(&z, bins)?,
    })
}
