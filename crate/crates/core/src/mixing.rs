//! Empirical strong-mixing coefficients.
//!
//! The supremum in `α(ℓ) = sup |P(AB) - P(A)P(B)|` is taken over events
//! that constrain a single coordinate on each side: `A = {f(k) ∈ S₁}` and
//! `B = {f(k+ℓ) ∈ S₂}` for subsets `S₁, S₂` of the value alphabet, with
//! `k` uniform over a window. Multi-coordinate events are not considered.
//!
//! For squarefree-type functions the measured coefficients do not vanish at
//! small lags: divisibility of both `k` and `k+ℓ` by the same `p²` couples
//! the two positions whenever `p² | ℓ`. The analytic models below are kept
//! separate from the measurements so the two can be compared.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{FunctionId, FunctionTable};
use crate::error::{Error, Result};
use crate::window::Window;

/// Largest alphabet for which subsets are enumerated exhaustively.
pub const MAX_ALPHABET: usize = 8;

/// Default slope below which a profile looks summable.
pub const DEFAULT_SUMMABLE_SLOPE: f64 = -1.1;
/// Default slope at or above which a profile looks non-summable. `Σ ℓ^s`
/// diverges exactly for `s >= -1`.
pub const DEFAULT_NON_SUMMABLE_SLOPE: f64 = -1.0;
/// Slopes strictly below this count as decaying.
pub const DEFAULT_DECAY_SLOPE: f64 = 0.0;
/// Slack applied when comparing fitted slopes against the bounds.
pub const SLOPE_TOLERANCE: f64 = 1e-9;

const SHARD: usize = 1 << 16;

/// Pair counts of `(f(k), f(k+ℓ))` for `k` in a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointDistribution {
    pub lag: u64,
    pub window: Window,
    pub alphabet: Vec<i8>,
    /// Row-major `|alphabet|²` counts; rows index `f(k)`, columns `f(k+ℓ)`.
    pub counts: Vec<u64>,
}

impl JointDistribution {
    fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn total(&self) -> u64 {
        self.window.len as u64
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.size() + b]
    }

    pub fn row_counts(&self) -> Vec<u64> {
        (0..self.size())
            .map(|a| (0..self.size()).map(|b| self.count(a, b)).sum())
            .collect()
    }

    pub fn col_counts(&self) -> Vec<u64> {
        (0..self.size())
            .map(|b| (0..self.size()).map(|a| self.count(a, b)).sum())
            .collect()
    }

    /// Joint frequency `P̂(a, b)` by alphabet values.
    pub fn frequency(&self, a: i8, b: i8) -> f64 {
        let ia = self.alphabet.iter().position(|&x| x == a);
        let ib = self.alphabet.iter().position(|&x| x == b);
        match (ia, ib) {
            (Some(i), Some(j)) => self.count(i, j) as f64 / self.total() as f64,
            _ => 0.0,
        }
    }

    pub fn joint(&self) -> Vec<Vec<f64>> {
        let w = self.total() as f64;
        (0..self.size())
            .map(|a| (0..self.size()).map(|b| self.count(a, b) as f64 / w).collect())
            .collect()
    }

    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let w = self.total() as f64;
        let norm = |v: Vec<u64>| v.into_iter().map(|c| c as f64 / w).collect();
        (norm(self.row_counts()), norm(self.col_counts()))
    }
}

pub fn joint_distribution(table: &FunctionTable, lag: u64, window: Window) -> Result<JointDistribution> {
    if window.len == 0 {
        return Err(Error::Argument("window must not be empty".into()));
    }
    let alphabet = table.spec().alphabet.clone();
    if alphabet.len() > MAX_ALPHABET {
        return Err(Error::Argument(format!(
            "alphabet of {} values exceeds the enumeration limit {MAX_ALPHABET}",
            alphabet.len()
        )));
    }
    let (xs, ys) = window.pair_slices(table, lag)?;
    let mut index = [0u8; 256];
    for (i, &v) in alphabet.iter().enumerate() {
        index[v as u8 as usize] = i as u8;
    }
    let size = alphabet.len();
    let count_shard = |(x, y): (&[i8], &[i8])| {
        let mut counts = vec![0u64; size * size];
        for (&a, &b) in x.iter().zip(y) {
            let i = index[a as u8 as usize] as usize;
            let j = index[b as u8 as usize] as usize;
            counts[i * size + j] += 1;
        }
        counts
    };
    let counts = xs
        .par_chunks(SHARD)
        .zip(ys.par_chunks(SHARD))
        .map(count_shard)
        .reduce(
            || vec![0u64; size * size],
            |mut acc, part| {
                acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                acc
            },
        );
    Ok(JointDistribution {
        lag,
        window,
        alphabet,
        counts,
    })
}

/// `max |P̂(A×B) - P̂₁(A)·P̂₂(B)|` over all value subsets `A`, `B`, computed
/// on exact counts and divided once.
pub fn mixing_coefficient(joint: &JointDistribution) -> f64 {
    let size = joint.size();
    let rows = joint.row_counts();
    let cols = joint.col_counts();
    let w = i128::from(joint.total());
    let mask_sum = |mask: usize, v: &[u64]| -> i128 {
        (0..size).filter(|i| mask >> i & 1 == 1).map(|i| i128::from(v[i])).sum()
    };
    let mut best = 0i128;
    for a in 0..1usize << size {
        let ra = mask_sum(a, &rows);
        // Joint mass of rows in A, per column.
        let cells: Vec<u64> = (0..size)
            .map(|j| (0..size).filter(|i| a >> i & 1 == 1).map(|i| joint.count(i, j)).sum())
            .collect();
        for b in 0..1usize << size {
            let cab = mask_sum(b, &cells);
            let dev = (w * cab - ra * mask_sum(b, &cols)).abs();
            best = best.max(dev);
        }
    }
    best as f64 / (joint.total() as u128 * joint.total() as u128) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingEntry {
    pub lag: u64,
    pub alpha: f64,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingProfile {
    pub id: FunctionId,
    pub window: Window,
    pub entries: Vec<MixingEntry>,
    /// Least-squares slope of `ln α̂` against `ln ℓ` over entries with
    /// `α̂ > 0`; absent with fewer than two such lags.
    pub loglog_slope: Option<f64>,
}

impl MixingProfile {
    /// Builds a profile from `(lag, α)` pairs supplied directly.
    pub fn from_alphas(id: FunctionId, window: Window, alphas: &[(u64, f64)]) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Argument("mixing profile needs at least one lag".into()));
        }
        let mut running = 0.0;
        let mut entries = Vec::with_capacity(alphas.len());
        for &(lag, alpha) in alphas {
            if lag == 0 {
                return Err(Error::Argument("lags must be positive".into()));
            }
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::Argument(format!("α = {alpha} at lag {lag} is outside [0, 1]")));
            }
            running += alpha;
            entries.push(MixingEntry {
                lag,
                alpha,
                partial_sum: running,
            });
        }
        let loglog_slope = loglog_slope(&entries);
        Ok(Self {
            id,
            window,
            entries,
            loglog_slope,
        })
    }

    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.alpha == 0.0)
    }

    pub fn max_alpha(&self) -> f64 {
        self.entries.iter().map(|e| e.alpha).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "lag,alpha,partial_sum")?;
        for e in &self.entries {
            writeln!(out, "{},{},{}", e.lag, e.alpha, e.partial_sum)?;
        }
        Ok(())
    }
}

fn loglog_slope(entries: &[MixingEntry]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| e.alpha > 0.0)
        .map(|e| ((e.lag as f64).ln(), e.alpha.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn mixing_profile(table: &FunctionTable, lags: &[u64], window: Window) -> Result<MixingProfile> {
    if lags.is_empty() {
        return Err(Error::Argument("mixing profile needs at least one lag".into()));
    }
    let alphas = lags
        .iter()
        .map(|&lag| Ok((lag, mixing_coefficient(&joint_distribution(table, lag, window)?))))
        .collect::<Result<Vec<_>>>()?;
    MixingProfile::from_alphas(table.spec().id.clone(), window, &alphas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Summability {
    SummableLooking,
    NonSummableLooking,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeBounds {
    pub summable_below: f64,
    pub non_summable_from: f64,
    pub decay_below: f64,
}

impl Default for SlopeBounds {
    fn default() -> Self {
        Self {
            summable_below: DEFAULT_SUMMABLE_SLOPE,
            non_summable_from: DEFAULT_NON_SUMMABLE_SLOPE,
            decay_below: DEFAULT_DECAY_SLOPE,
        }
    }
}

/// Power-law reading of a finite profile. An identically zero profile sums
/// to zero and counts as summable.
pub fn classify_summability(profile: &MixingProfile, bounds: &SlopeBounds) -> Summability {
    if profile.all_zero() {
        return Summability::SummableLooking;
    }
    match profile.loglog_slope {
        Some(s) if s < bounds.summable_below - SLOPE_TOLERANCE => Summability::SummableLooking,
        Some(s) if s >= bounds.non_summable_from - SLOPE_TOLERANCE => Summability::NonSummableLooking,
        _ => Summability::Inconclusive,
    }
}

pub fn decays(profile: &MixingProfile, bounds: &SlopeBounds) -> bool {
    profile.all_zero() || profile.loglog_slope.is_some_and(|s| s < bounds.decay_below)
}

/// Leading term `(1/ln k)·(1/ln(k+n))` of the mixing coefficient between
/// "k is prime" and "k+n is composite".
pub fn prime_mixing_model(k: u64, n: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("prime mixing model needs k >= 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::Domain("prime mixing model needs n >= 1".into()));
    }
    Ok(prime_model_term(k as f64, (k + n) as f64))
}

fn prime_model_term(k: f64, k_plus_n: f64) -> f64 {
    1.0 / (k.ln() * k_plus_n.ln())
}

/// Analytic mixing coefficient at position `k`, lag `n`, where one is
/// available: the prime model above, and zero for squarefree indicators
/// (the events at `k` and `k+n` taken as independent).
pub fn analytic_mixing_model(id: &FunctionId, k: u64, n: u64) -> Option<Result<f64>> {
    match id {
        FunctionId::PrimeIndicator => Some(prime_mixing_model(k, n)),
        FunctionId::Squarefree => Some(Ok(0.0)),
        _ => None,
    }
}

/// Profile of analytic model values at `k = window.start` over `lags`.
pub fn model_profile(id: &FunctionId, lags: &[u64], window: Window) -> Option<Result<MixingProfile>> {
    analytic_mixing_model(id, window.start, 1)?.ok();
    let alphas: Result<Vec<(u64, f64)>> = lags
        .iter()
        .map(|&lag| Ok((lag, analytic_mixing_model(id, window.start, lag).expect("model exists")?)))
        .collect();
    Some(alphas.and_then(|a| MixingProfile::from_alphas(id.clone(), window, &a)))
}
