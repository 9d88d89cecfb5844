//! Summatory series `S(k) = f(1) + ... + f(k)`, reciprocal-weighted sums,
//! mean-limit classification and linear-model residuals.

use std::io::{self, Write};

use serde::Serialize;

use crate::arith::{ArithmeticFunctionSpec, FunctionId, FunctionTable};
use crate::error::{Error, Result};

/// Default `ε` below which `S(n)/n` is treated as zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 0.01;
/// Default relative spread `δ` allowed across the last checkpoints.
pub const DEFAULT_STABILITY_THRESHOLD: f64 = 0.1;

/// Exact prefix sums; `sums[0] = 0` and `sums[k] = S(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummatorySeries {
    id: FunctionId,
    sums: Vec<i64>,
}

impl SummatorySeries {
    pub fn id(&self) -> &FunctionId {
        &self.id
    }

    /// Number of terms summed.
    pub fn n(&self) -> u64 {
        (self.sums.len() - 1) as u64
    }

    /// `S(k)` for `0 <= k <= n`.
    pub fn at(&self, k: u64) -> Option<i64> {
        usize::try_from(k).ok().and_then(|i| self.sums.get(i)).copied()
    }

    /// `S(1), ..., S(n)`.
    pub fn sums(&self) -> &[i64] {
        &self.sums[1..]
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,value")?;
        for (k, s) in self.sums.iter().enumerate().skip(1) {
            writeln!(out, "{k},{s}")?;
        }
        Ok(())
    }
}

fn require_origin(table: &FunctionTable) -> Result<()> {
    if table.start() != 1 {
        return Err(Error::Precondition(format!(
            "summatory functions start at k = 1, table starts at {}",
            table.start()
        )));
    }
    Ok(())
}

pub fn prefix_sums(table: &FunctionTable) -> Result<SummatorySeries> {
    require_origin(table)?;
    let mut sums = Vec::with_capacity(table.len() + 1);
    sums.push(0i64);
    let mut acc = 0i64;
    for &v in table.values() {
        acc += i64::from(v);
        sums.push(acc);
    }
    Ok(SummatorySeries {
        id: table.spec().id.clone(),
        sums,
    })
}

/// `W(k) = f(1)/1 + ... + f(k)/k`, accumulated left to right with
/// Neumaier compensation. Entry `i` holds `W(i + 1)`.
pub fn weighted_prefix_sums(table: &FunctionTable) -> Result<Vec<f64>> {
    require_origin(table)?;
    let mut acc = NeumaierSum::default();
    Ok(table
        .iter()
        .map(|(k, v)| {
            acc.add(f64::from(v) / k as f64);
            acc.value()
        })
        .collect())
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanClass {
    Zero,
    Nonzero,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    pub sum: i64,
    pub ratio: f64,
}

/// Finite-`n` evidence about `lim S(n)/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanLimitEstimate {
    pub checkpoints: Vec<Checkpoint>,
    pub final_ratio: f64,
    pub classification: MeanClass,
    pub zero_threshold: f64,
    pub stability_threshold: f64,
}

/// Classifies `S(n)/n` over ascending checkpoints.
///
/// `zero` when the last ratio is within `ε` and the last three within `2ε`;
/// `nonzero` when the last ratio exceeds `ε` and the last three agree to a
/// relative spread of `δ`; otherwise `unstable`.
pub fn mean_estimate(
    series: &SummatorySeries,
    checkpoints: &[u64],
    zero_threshold: f64,
    stability_threshold: f64,
) -> Result<MeanLimitEstimate> {
    if checkpoints.len() < 3 {
        return Err(Error::Argument(format!(
            "need at least 3 checkpoints, got {}",
            checkpoints.len()
        )));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("checkpoints must be positive and strictly ascending".into()));
    }
    if *checkpoints.last().unwrap() > series.n() {
        return Err(Error::Argument(format!(
            "checkpoint {} exceeds series length {}",
            checkpoints.last().unwrap(),
            series.n()
        )));
    }
    if !(zero_threshold > 0.0 && stability_threshold > 0.0) {
        return Err(Error::Argument("thresholds must be positive".into()));
    }

    let points: Vec<Checkpoint> = checkpoints
        .iter()
        .map(|&n| {
            let sum = series.at(n).expect("checked above");
            Checkpoint {
                n,
                sum,
                ratio: sum as f64 / n as f64,
            }
        })
        .collect();
    let final_ratio = points.last().unwrap().ratio;
    let tail: Vec<f64> = points[points.len() - 3..].iter().map(|c| c.ratio).collect();
    let spread = tail
        .iter()
        .flat_map(|a| tail.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);

    let classification = if final_ratio.abs() <= zero_threshold
        && tail.iter().all(|r| r.abs() <= 2.0 * zero_threshold)
    {
        MeanClass::Zero
    } else if final_ratio.abs() > zero_threshold && spread <= stability_threshold * final_ratio.abs() {
        MeanClass::Nonzero
    } else {
        MeanClass::Unstable
    };

    Ok(MeanLimitEstimate {
        checkpoints: points,
        final_ratio,
        classification,
        zero_threshold,
        stability_threshold,
    })
}

/// `R(k) = S(k) - c·k` for `k = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    pub id: FunctionId,
    pub slope: f64,
    pub residuals: Vec<f64>,
}

pub fn residual_series(series: &SummatorySeries, slope: f64) -> Result<ResidualSeries> {
    if !slope.is_finite() {
        return Err(Error::Argument(format!("residual slope must be finite, got {slope}")));
    }
    let residuals = series
        .sums()
        .iter()
        .enumerate()
        .map(|(i, &s)| s as f64 - slope * (i + 1) as f64)
        .collect();
    Ok(ResidualSeries {
        id: series.id.clone(),
        slope,
        residuals,
    })
}

/// The analytic mean when the spec has one, else the empirical `S(n)/n`.
pub fn default_slope(spec: &ArithmeticFunctionSpec, series: &SummatorySeries) -> f64 {
    spec.known_mean
        .unwrap_or_else(|| series.at(series.n()).unwrap() as f64 / series.n() as f64)
}
