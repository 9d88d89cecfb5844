//! Finite-depth check of the sufficient conditions under which a summatory
//! function with bounded terms has a normal limit law: bounded terms,
//! nonzero variance, nonzero mean limit `lim S(n)/n`, bounded second
//! moment, decaying and summable mixing coefficients.
//!
//! Failing a condition means the function is not covered by the sufficient
//! conditions. It says nothing against normality.

use serde::{Serialize, Serializer};

use crate::arith::{sieve_table, ArithmeticFunctionSpec, FunctionId, FunctionTable};
use crate::error::{Error, Result};
use crate::mixing::{self, MixingProfile, SlopeBounds, Summability};
use crate::moments::{moment_summary_of, MomentSummary};
use crate::normality::{self, NormalityReport};
use crate::summatory::{self, MeanClass, MeanLimitEstimate};
use crate::window::Window;

/// Smallest analysis depth accepted.
pub const MIN_DEPTH: u64 = 10_000;
pub const DEFAULT_DEPTH: u64 = 1_000_000;
pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-6;
pub const DEFAULT_MAX_LAG: u64 = 100;

const SATISFIED_NOTE: &str =
    "all sufficient conditions for a normal limit law hold at this depth";
const FAILED_NOTE: &str =
    "not covered by the sufficient conditions; no claim is made about normality";
const INDETERMINATE_NOTE: &str =
    "no condition failed but some evidence is inconclusive at this depth";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPolicy {
    /// `k₀ = max(2, N/2)`, `W = N/2 - max lag`.
    UpperHalf,
    #[serde(untagged)]
    Explicit(Window),
}

/// Where the mixing flags take their evidence from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingSource {
    /// Analytic model when the function has one, measured profile otherwise.
    PreferModel,
    /// Always the measured profile.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub depth: u64,
    pub zero_threshold: f64,
    pub stability_threshold: f64,
    pub variance_floor: f64,
    pub slopes: SlopeBounds,
    pub ks_threshold: f64,
    pub bins: usize,
    /// Defaults to `N/100, N/10, N`.
    pub checkpoints: Option<Vec<u64>>,
    pub lags: Vec<u64>,
    pub window: WindowPolicy,
    pub mixing_source: MixingSource,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            depth: DEFAULT_DEPTH,
            zero_threshold: summatory::DEFAULT_ZERO_THRESHOLD,
            stability_threshold: summatory::DEFAULT_STABILITY_THRESHOLD,
            variance_floor: DEFAULT_VARIANCE_FLOOR,
            slopes: SlopeBounds::default(),
            ks_threshold: normality::DEFAULT_KS_THRESHOLD,
            bins: normality::DEFAULT_BINS,
            checkpoints: None,
            lags: (1..=DEFAULT_MAX_LAG).collect(),
            window: WindowPolicy::UpperHalf,
            mixing_source: MixingSource::PreferModel,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("zero_threshold", self.zero_threshold),
            ("stability_threshold", self.stability_threshold),
            ("variance_floor", self.variance_floor),
            ("ks_threshold", self.ks_threshold),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Argument(format!("{name} must be positive, got {v}")));
        }
        if self.depth < MIN_DEPTH {
            return Err(Error::Argument(format!("depth must be at least {MIN_DEPTH}, got {}", self.depth)));
        }
        if self.bins == 0 {
            return Err(Error::Argument("bins must be positive".into()));
        }
        if self.lags.is_empty() || self.lags.contains(&0) {
            return Err(Error::Argument("lags must be a nonempty list of positive integers".into()));
        }
        if self.slopes.summable_below > self.slopes.non_summable_from {
            return Err(Error::Argument("summable slope bound exceeds the non-summable bound".into()));
        }
        Ok(())
    }

    pub fn checkpoints_for(&self, n: u64) -> Vec<u64> {
        self.checkpoints
            .clone()
            .unwrap_or_else(|| vec![n / 100, n / 10, n])
    }

    fn window_for(&self, n: u64) -> Result<Window> {
        match self.window {
            WindowPolicy::UpperHalf => {
                Window::upper_half(n, *self.lags.iter().max().expect("validated"))
            }
            WindowPolicy::Explicit(w) => Ok(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionName {
    Bounded,
    VarianceNonzero,
    MeanLimitNonzero,
    SecondMomentBounded,
    MixingDecay,
    MixingSummable,
}

impl ConditionName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionName::Bounded => "bounded",
            ConditionName::VarianceNonzero => "variance_nonzero",
            ConditionName::MeanLimitNonzero => "mean_limit_nonzero",
            ConditionName::SecondMomentBounded => "second_moment_bounded",
            ConditionName::MixingDecay => "mixing_decay",
            ConditionName::MixingSummable => "mixing_summable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub flag: bool,
    /// False when the evidence neither confirms nor refutes the condition.
    pub conclusive: bool,
    pub measured: Option<f64>,
    pub threshold: f64,
    pub detail: String,
}

impl Condition {
    fn decided(flag: bool, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            flag,
            conclusive: true,
            measured: Some(measured),
            threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conditions {
    pub bounded: Condition,
    pub variance_nonzero: Condition,
    pub mean_limit_nonzero: Condition,
    pub second_moment_bounded: Condition,
    pub mixing_decay: Condition,
    pub mixing_summable: Condition,
}

impl Conditions {
    /// The six conditions in report order.
    pub fn named(&self) -> [(ConditionName, &Condition); 6] {
        [
            (ConditionName::Bounded, &self.bounded),
            (ConditionName::VarianceNonzero, &self.variance_nonzero),
            (ConditionName::MeanLimitNonzero, &self.mean_limit_nonzero),
            (ConditionName::SecondMomentBounded, &self.second_moment_bounded),
            (ConditionName::MixingDecay, &self.mixing_decay),
            (ConditionName::MixingSummable, &self.mixing_summable),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    SatisfiesSufficientConditions,
    FailsConditions(Vec<ConditionName>),
    Indeterminate(Vec<ConditionName>),
}

impl Verdict {
    pub fn from_conditions(conditions: &Conditions) -> Self {
        let named = conditions.named();
        let failed: Vec<ConditionName> = named
            .iter()
            .filter(|(_, c)| !c.flag && c.conclusive)
            .map(|(n, _)| *n)
            .collect();
        let open: Vec<ConditionName> = named
            .iter()
            .filter(|(_, c)| !c.flag && !c.conclusive)
            .map(|(n, _)| *n)
            .collect();
        if !failed.is_empty() {
            Verdict::FailsConditions(failed)
        } else if !open.is_empty() {
            Verdict::Indeterminate(open)
        } else {
            Verdict::SatisfiesSufficientConditions
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::SatisfiesSufficientConditions => "satisfies_sufficient_conditions",
            Verdict::FailsConditions(_) => "fails_conditions",
            Verdict::Indeterminate(_) => "indeterminate",
        }
    }

    pub fn interpretation(&self) -> &'static str {
        match self {
            Verdict::SatisfiesSufficientConditions => SATISFIED_NOTE,
            Verdict::FailsConditions(_) => FAILED_NOTE,
            Verdict::Indeterminate(_) => INDETERMINATE_NOTE,
        }
    }

    pub fn conditions(&self) -> &[ConditionName] {
        match self {
            Verdict::SatisfiesSufficientConditions => &[],
            Verdict::FailsConditions(c) | Verdict::Indeterminate(c) => c,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            status: &'static str,
            conditions: &'a [ConditionName],
            interpretation: &'static str,
        }
        Repr {
            status: self.status(),
            conditions: self.conditions(),
            interpretation: self.interpretation(),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingEvidence {
    /// `analytic_model` or `empirical_profile`: which profile set the flags.
    pub source: &'static str,
    pub empirical: MixingProfile,
    pub empirical_summability: Summability,
    pub model: Option<MixingProfile>,
    pub model_summability: Option<Summability>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub function: FunctionId,
    pub n: u64,
    pub verdict: Verdict,
    pub conditions: Conditions,
    pub mean_estimate: MeanLimitEstimate,
    pub moments: MomentSummary,
    pub mixing: MixingEvidence,
    pub residual_slope: f64,
    pub normality: Option<NormalityReport>,
    pub normality_note: Option<String>,
}

/// Sieves `1..=depth` for a built-in and runs [`check_sufficient_conditions`].
pub fn check_builtin(id: FunctionId, thresholds: &Thresholds) -> Result<VerdictReport> {
    thresholds.validate()?;
    let spec = ArithmeticFunctionSpec::builtin(id)?;
    let depth = usize::try_from(thresholds.depth)
        .map_err(|_| Error::Range(format!("depth {} does not fit in memory", thresholds.depth)))?;
    let table = sieve_table(&spec, 1, depth)?;
    check_sufficient_conditions(&table, thresholds)
}

/// Runs the full pipeline on a table anchored at `k = 1`. The table length
/// is the analysis depth; `thresholds.depth` only applies to
/// [`check_builtin`].
pub fn check_sufficient_conditions(table: &FunctionTable, thresholds: &Thresholds) -> Result<VerdictReport> {
    thresholds.validate()?;
    let n = table.len() as u64;
    if n < MIN_DEPTH {
        return Err(Error::Argument(format!("analysis depth {n} is below {MIN_DEPTH}")));
    }
    let spec = table.spec();
    let series = summatory::prefix_sums(table)?;
    let mean = summatory::mean_estimate(
        &series,
        &thresholds.checkpoints_for(n),
        thresholds.zero_threshold,
        thresholds.stability_threshold,
    )?;
    let moments = moment_summary_of(table)?;
    let window = thresholds.window_for(n)?;
    let slope = summatory::default_slope(spec, &series);

    let (empirical, normality) = rayon::join(
        || mixing::mixing_profile(table, &thresholds.lags, window),
        || {
            summatory::residual_series(&series, slope).and_then(|r| {
                normality::normality_report(&r, thresholds.bins, Some(thresholds.ks_threshold))
            })
        },
    );
    let empirical = empirical?;
    let (normality, normality_note) = match normality {
        Ok(report) => (Some(report), None),
        Err(Error::DegenerateSample(msg)) => (None, Some(format!("residuals are degenerate: {msg}"))),
        Err(e) => return Err(e),
    };

    let model = match thresholds.mixing_source {
        MixingSource::PreferModel => mixing::model_profile(&spec.id, &thresholds.lags, window).transpose()?,
        MixingSource::Empirical => None,
    };
    let bounds = &thresholds.slopes;
    let deciding = model.as_ref().unwrap_or(&empirical);
    let mixing = MixingEvidence {
        source: if model.is_some() { "analytic_model" } else { "empirical_profile" },
        empirical_summability: mixing::classify_summability(&empirical, bounds),
        model_summability: model.as_ref().map(|m| mixing::classify_summability(m, bounds)),
        empirical: empirical.clone(),
        model: model.clone(),
    };

    let max_abs = table.values().iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let bound_sq = spec.bound * spec.bound;
    let conditions = Conditions {
        bounded: Condition::decided(
            f64::from(max_abs) <= spec.bound,
            f64::from(max_abs),
            spec.bound,
            "max |f(k)| against the declared bound",
        ),
        variance_nonzero: Condition::decided(
            moments.variance > thresholds.variance_floor,
            moments.variance,
            thresholds.variance_floor,
            "variance of f over 1..n",
        ),
        mean_limit_nonzero: Condition::decided(
            mean.classification == MeanClass::Nonzero,
            mean.final_ratio,
            thresholds.zero_threshold,
            match mean.classification {
                MeanClass::Zero => "S(n)/n classified zero",
                MeanClass::Nonzero => "S(n)/n classified nonzero",
                MeanClass::Unstable => "S(n)/n classified unstable",
            },
        ),
        second_moment_bounded: Condition::decided(
            moments.second_moment <= bound_sq,
            moments.second_moment,
            bound_sq,
            "mean of f² against L²",
        ),
        mixing_decay: decay_condition(deciding, bounds, mixing.source),
        mixing_summable: summable_condition(deciding, bounds, mixing.source),
    };

    Ok(VerdictReport {
        function: spec.id.clone(),
        n,
        verdict: Verdict::from_conditions(&conditions),
        conditions,
        mean_estimate: mean,
        moments,
        mixing,
        residual_slope: slope,
        normality,
        normality_note,
    })
}

fn decay_condition(profile: &MixingProfile, bounds: &SlopeBounds, source: &str) -> Condition {
    let detail = format!("log-log slope of the {source}");
    if profile.all_zero() {
        return Condition::decided(true, 0.0, bounds.decay_below, format!("{source} is identically zero"));
    }
    match profile.loglog_slope {
        Some(s) => Condition::decided(s < bounds.decay_below, s, bounds.decay_below, detail),
        None => Condition {
            flag: false,
            conclusive: false,
            measured: None,
            threshold: bounds.decay_below,
            detail: format!("{detail} is undefined"),
        },
    }
}

fn summable_condition(profile: &MixingProfile, bounds: &SlopeBounds, source: &str) -> Condition {
    let class = mixing::classify_summability(profile, bounds);
    let measured = if profile.all_zero() { Some(0.0) } else { profile.loglog_slope };
    Condition {
        flag: class == Summability::SummableLooking,
        conclusive: class != Summability::Inconclusive,
        measured,
        threshold: bounds.summable_below,
        detail: format!(
            "{source} classified {}",
            match class {
                Summability::SummableLooking => "summable-looking",
                Summability::NonSummableLooking => "non-summable-looking",
                Summability::Inconclusive => "inconclusive",
            }
        ),
    }
}
