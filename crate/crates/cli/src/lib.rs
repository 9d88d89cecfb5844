//! Argument model and command implementations behind the `sumlab` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{value_parser, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sumlab_core::mixing::{self, SlopeBounds, Summability};
use sumlab_core::moments::{self, MomentSummary};
use sumlab_core::normality::{self, NormalityReport};
use sumlab_core::oeis::{self, Client, CrossCheckReport, SequenceId};
use sumlab_core::summatory;
use sumlab_core::synthetic::{synthetic_table, SyntheticKind};
use sumlab_core::verdict::{self, MixingSource, Thresholds, WindowPolicy};
use sumlab_core::{ArithmeticFunctionSpec, FunctionId, FunctionTable, MixingProfile, Window};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl From<sumlab_core::Error> for CliError {
    fn from(e: sumlab_core::Error) -> Self {
        use sumlab_core::Error as E;
        match e {
            E::Argument(_) | E::Domain(_) | E::Range(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Statistics of bounded arithmetic functions and their summatory functions.
#[derive(Debug, Parser)]
#[command(name = "sumlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Never open the network; OEIS lookups use fixtures and the cache only
    #[arg(long, global = true, display_order = 100)]
    pub offline: bool,

    /// Output format (default depends on the command)
    #[arg(long, global = true, display_order = 100, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file (atomically) instead of stdout
    #[arg(long, global = true, display_order = 100, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Seed for synthetic baselines (ChaCha8)
    #[arg(long, global = true, display_order = 100, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f(1..=n)
    Sieve {
        #[command(flatten)]
        input: Input,
    },
    /// Summatory function S(k) = f(1) + ... + f(k)
    Sum {
        #[command(flatten)]
        input: Input,
        /// Sum f(k)/k instead of f(k)
        #[arg(long)]
        weighted: bool,
    },
    /// Moments, pair means and lag covariances
    Moments {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lags: LagArgs,
    },
    /// Empirical mixing profile over a window
    Mixing {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lags: LagArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        slopes: SlopeArgs,
    },
    /// Normality diagnostics of the summatory residuals
    Normtest {
        #[command(flatten)]
        input: Input,
        /// Use the weighted sums f(1)/1 + ... + f(k)/k as the sample
        #[arg(long)]
        weighted: bool,
        /// Mean slope subtracted from S(k) (default: the known mean, else S(n)/n)
        #[arg(long, allow_negative_numbers = true)]
        slope: Option<f64>,
        #[command(flatten)]
        normal: NormalArgs,
    },
    /// Check the sufficient conditions for a normal limit law
    Verdict {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lags: LagArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        slopes: SlopeArgs,
        #[command(flatten)]
        normal: NormalArgs,
        /// Classification threshold for |S(n)/n|
        #[arg(long, default_value_t = summatory::DEFAULT_ZERO_THRESHOLD)]
        zero_threshold: f64,
        /// Allowed relative drift of S(n)/n between checkpoints
        #[arg(long, default_value_t = summatory::DEFAULT_STABILITY_THRESHOLD)]
        stability_threshold: f64,
        /// Smallest variance counted as nonzero
        #[arg(long, default_value_t = verdict::DEFAULT_VARIANCE_FLOOR)]
        variance_floor: f64,
        /// Checkpoints for the mean ratio, comma separated (default: N/100,N/10,N)
        #[arg(long, value_delimiter = ',', value_parser = value_parser!(u64).range(1..))]
        checkpoints: Vec<u64>,
        /// Decide the mixing flags from the measured profile even when an analytic model exists
        #[arg(long)]
        empirical_mixing: bool,
    },
    /// Compare summatory values with an OEIS b-file
    OeisCheck {
        /// Sequence id such as A002321 (default: the sequence known for --function)
        #[arg(long)]
        id: Option<String>,
        /// Built-in function whose summatory function is compared
        #[arg(long)]
        function: String,
        /// Number of terms to compute (default: the extent of the reference)
        #[arg(long, value_parser = value_parser!(u64).range(1..))]
        n: Option<u64>,
        /// Offset added to reference indices before comparing
        #[arg(long, allow_negative_numbers = true)]
        shift: Option<i64>,
        /// First k compared
        #[arg(long, default_value_t = 1)]
        from: u64,
        /// Last k compared (default: n)
        #[arg(long)]
        to: Option<u64>,
        /// Cache directory (default: $SUMLAB_CACHE_DIR or .sumlab-cache)
        #[arg(long, value_name = "PATH")]
        cache_dir: Option<PathBuf>,
    },
    /// Seeded baseline tables
    Synthetic {
        /// iid-sign, iid-bit, alternating-sign, alternating-bit or constant
        #[arg(long)]
        kind: String,
        /// Number of terms
        #[arg(long, value_parser = value_parser!(u64).range(1..))]
        n: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Built-in function: mobius, liouville, squarefree or prime_indicator
    #[arg(long, value_name = "ID")]
    pub function: Option<String>,
    /// CSV file with header `k,value` and k = 1..n
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Input {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of terms (required with --function except for verdict; truncates --input)
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    /// Declared bound on |f(k)| for --input
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
}

#[derive(Debug, Args)]
pub struct LagArgs {
    /// Use lags 1..=MAX_LAG
    #[arg(long, default_value_t = verdict::DEFAULT_MAX_LAG, value_parser = value_parser!(u64).range(1..))]
    pub max_lag: u64,
    /// Explicit lags, comma separated (overrides --max-lag)
    #[arg(long, value_delimiter = ',', value_parser = value_parser!(u64).range(1..))]
    pub lags: Vec<u64>,
}

impl LagArgs {
    fn lags(&self) -> Vec<u64> {
        if self.lags.is_empty() {
            (1..=self.max_lag).collect()
        } else {
            self.lags.clone()
        }
    }
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// First k of the mixing window (default: N/2)
    #[arg(long, requires = "window_len")]
    pub window_start: Option<u64>,
    /// Width of the mixing window (default: N/2 - largest lag)
    #[arg(long, requires = "window_start")]
    pub window_len: Option<usize>,
}

impl WindowArgs {
    fn policy(&self) -> WindowPolicy {
        match (self.window_start, self.window_len) {
            (Some(start), Some(len)) => WindowPolicy::Explicit(Window::new(start, len)),
            _ => WindowPolicy::UpperHalf,
        }
    }
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    /// Log-log slope below which the profile looks summable
    #[arg(long, allow_negative_numbers = true, default_value_t = mixing::DEFAULT_SUMMABLE_SLOPE)]
    pub summable_slope: f64,
    /// Log-log slope from which the profile looks non-summable
    #[arg(long, allow_negative_numbers = true, default_value_t = mixing::DEFAULT_NON_SUMMABLE_SLOPE)]
    pub non_summable_slope: f64,
    /// Log-log slope below which the profile counts as decaying
    #[arg(long, allow_negative_numbers = true, default_value_t = mixing::DEFAULT_DECAY_SLOPE)]
    pub decay_slope: f64,
}

impl SlopeArgs {
    fn bounds(&self) -> Result<SlopeBounds> {
        if self.summable_slope > self.non_summable_slope {
            return Err(CliError::Usage(
                "--summable-slope must not exceed --non-summable-slope".into(),
            ));
        }
        Ok(SlopeBounds {
            summable_below: self.summable_slope,
            non_summable_from: self.non_summable_slope,
            decay_below: self.decay_slope,
        })
    }
}

#[derive(Debug, Args)]
pub struct NormalArgs {
    /// Histogram bins on [-5, 5]
    #[arg(long, default_value_t = normality::DEFAULT_BINS as u64, value_parser = value_parser!(u64).range(1..))]
    pub bins: u64,
    /// KS distance up to which the sample counts as consistent with N(0, 1)
    #[arg(long, default_value_t = normality::DEFAULT_KS_THRESHOLD)]
    pub ks_threshold: f64,
}

/// Reads a `k,value` CSV with `k = 1..n` contiguous. Errors name the file
/// row (the header is row 1).
pub fn load_table_csv(path: &Path, bound: f64) -> Result<FunctionTable> {
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(CliError::Usage(format!("--bound must be a finite non-negative number, got {bound}")));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());
    let file = fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() != 2 || &headers[0] != "k" || &headers[1] != "value" {
        return Err(CliError::Data(format!("{}: row 1: expected header `k,value`", path.display())));
    }
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let bad = |what: String| CliError::Data(format!("{}: row {row}: {what}", path.display()));
        let record = record.map_err(|e| bad(e.to_string()))?;
        let k: u64 = record[0].parse().map_err(|_| bad(format!("k `{}` is not a positive integer", &record[0])))?;
        let expected = values.len() as u64 + 1;
        if k != expected {
            return Err(bad(format!("expected k = {expected}, found {k}")));
        }
        let v: i64 = record[1].parse().map_err(|_| bad(format!("value `{}` is not an integer", &record[1])))?;
        if v.unsigned_abs() as f64 > bound {
            return Err(bad(format!("value {v} exceeds the declared bound {bound}")));
        }
        let v = i8::try_from(v).map_err(|_| bad(format!("value {v} is out of range")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    let mut alphabet = values.clone();
    alphabet.sort_unstable();
    alphabet.dedup();
    let spec = ArithmeticFunctionSpec::custom(name, alphabet, bound.max(1.0))?;
    Ok(FunctionTable::new(spec, 1, values)?)
}

fn builtin(name: &str) -> Result<ArithmeticFunctionSpec> {
    let id: FunctionId = name
        .parse()
        .map_err(|_| CliError::Usage(format!("--function: unknown function id `{name}`")))?;
    Ok(ArithmeticFunctionSpec::builtin(id)?)
}

fn to_usize(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("--n {n} is too large")))
}

impl Input {
    fn load(&self, default_n: Option<u64>) -> Result<FunctionTable> {
        match (&self.source.function, &self.source.input) {
            (Some(name), _) => {
                let spec = builtin(name)?;
                let n = self
                    .n
                    .or(default_n)
                    .ok_or_else(|| CliError::Usage("--n is required with --function".into()))?;
                Ok(sumlab_core::sieve_table(&spec, 1, to_usize(n)?)?)
            }
            (None, Some(path)) => {
                let table = load_table_csv(path, self.bound)?;
                match self.n {
                    Some(n) if n > table.len() as u64 => Err(CliError::Usage(format!(
                        "--n {n} exceeds the {} rows of {}",
                        table.len(),
                        path.display()
                    ))),
                    Some(n) => {
                        let values = table.values()[..to_usize(n)?].to_vec();
                        Ok(FunctionTable::new(table.spec().clone(), 1, values)?)
                    }
                    None => Ok(table),
                }
            }
            (None, None) => Err(CliError::Usage("one of --function or --input is required".into())),
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write(&mut out).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(out)
}

fn write_values(out: &mut Vec<u8>, values: impl Iterator<Item = (u64, String)>) -> io::Result<()> {
    writeln!(out, "k,value")?;
    for (k, v) in values {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ValuesJson<'a, T: Serialize> {
    function: &'a str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    values: &'a [T],
}

#[derive(Serialize)]
struct CovarianceRow {
    lag: u64,
    covariance: f64,
}

#[derive(Serialize)]
struct MomentsJson<'a> {
    function: &'a FunctionId,
    summary: MomentSummary,
    pair_mean_offdiag: Option<f64>,
    pair_mean_product: Option<f64>,
    covariances: Vec<CovarianceRow>,
}

#[derive(Serialize)]
struct MixingJson {
    profile: MixingProfile,
    summability: Summability,
    decays: bool,
    model: Option<MixingProfile>,
    model_summability: Option<Summability>,
}

#[derive(Serialize)]
struct NormtestJson<'a> {
    function: &'a FunctionId,
    sample: &'static str,
    slope: Option<f64>,
    report: NormalityReport,
}

#[derive(Serialize)]
struct OeisJson<'a> {
    sequence: &'a SequenceId,
    source: oeis::Source,
    shift: i64,
    passed: bool,
    report: &'a CrossCheckReport,
}

fn max_lag(lags: &[u64]) -> u64 {
    lags.iter().copied().max().unwrap_or(1)
}

/// Runs the parsed command and returns the bytes it emits.
pub fn execute(cli: &Cli) -> Result<Vec<u8>> {
    let format = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Sieve { input } => {
            let table = input.load(None)?;
            match format(Format::Csv) {
                Format::Csv => csv_bytes(|o| write_values(o, table.iter().map(|(k, v)| (k, v.to_string())))),
                Format::Json => json(&ValuesJson {
                    function: table.spec().id.as_str(),
                    n: table.len(),
                    weighted: None,
                    seed: None,
                    values: table.values(),
                }),
            }
        }
        Command::Sum { input, weighted } => {
            let table = input.load(None)?;
            let id = table.spec().id.as_str();
            if *weighted {
                let w = summatory::weighted_prefix_sums(&table)?;
                match format(Format::Csv) {
                    Format::Csv => csv_bytes(|o| write_values(o, (1..).zip(w.iter().map(f64::to_string)))),
                    Format::Json => json(&ValuesJson { function: id, n: w.len(), weighted: Some(true), seed: None, values: &w }),
                }
            } else {
                let series = summatory::prefix_sums(&table)?;
                match format(Format::Csv) {
                    Format::Csv => csv_bytes(|o| series.write_csv(o)),
                    Format::Json => json(&ValuesJson {
                        function: id,
                        n: series.sums().len(),
                        weighted: Some(false),
                        seed: None,
                        values: series.sums(),
                    }),
                }
            }
        }
        Command::Moments { input, lags } => {
            let table = input.load(None)?;
            let lags = lags.lags();
            if max_lag(&lags) >= table.len() as u64 {
                return Err(CliError::Usage(format!(
                    "--max-lag/--lags: lag {} leaves no pairs in {} terms",
                    max_lag(&lags),
                    table.len()
                )));
            }
            let summary = moments::moment_summary_of(&table)?;
            let offdiag = moments::pair_mean_offdiag(&table).ok();
            let product = moments::pair_mean_product(&table).ok();
            let covariances = moments::covariance_profile(&table, &lags)?;
            match format(Format::Csv) {
                Format::Csv => csv_bytes(|o| {
                    writeln!(o, "quantity,value")?;
                    let rows = [
                        ("n", summary.n.to_string()),
                        ("sum", summary.sum.to_string()),
                        ("sum_sq", summary.sum_sq.to_string()),
                        ("mean", summary.mean.to_string()),
                        ("second_moment", summary.second_moment.to_string()),
                        ("variance", summary.variance.to_string()),
                        ("pair_mean_offdiag", offdiag.map(|v| v.to_string()).unwrap_or_default()),
                        ("pair_mean_product", product.map(|v| v.to_string()).unwrap_or_default()),
                    ];
                    for (q, v) in rows {
                        writeln!(o, "{q},{v}")?;
                    }
                    for (lag, c) in &covariances {
                        writeln!(o, "covariance_lag_{lag},{c}")?;
                    }
                    Ok(())
                }),
                Format::Json => json(&MomentsJson {
                    function: &table.spec().id,
                    summary,
                    pair_mean_offdiag: offdiag,
                    pair_mean_product: product,
                    covariances: covariances
                        .into_iter()
                        .map(|(lag, covariance)| CovarianceRow { lag, covariance })
                        .collect(),
                }),
            }
        }
        Command::Mixing { input, lags, window, slopes } => {
            let table = input.load(None)?;
            let lags = lags.lags();
            let bounds = slopes.bounds()?;
            let window = match window.policy() {
                WindowPolicy::Explicit(w) => w,
                WindowPolicy::UpperHalf => Window::upper_half(table.len() as u64, max_lag(&lags))?,
            };
            let profile = mixing::mixing_profile(&table, &lags, window)?;
            match format(Format::Csv) {
                Format::Csv => csv_bytes(|o| profile.write_csv(o)),
                Format::Json => {
                    let model = mixing::model_profile(&table.spec().id, &lags, window).transpose()?;
                    json(&MixingJson {
                        summability: mixing::classify_summability(&profile, &bounds),
                        decays: mixing::decays(&profile, &bounds),
                        model_summability: model.as_ref().map(|m| mixing::classify_summability(m, &bounds)),
                        model,
                        profile,
                    })
                }
            }
        }
        Command::Normtest { input, weighted, slope, normal } => {
            let table = input.load(None)?;
            let threshold = Some(normal.ks_threshold);
            let (sample, used_slope, report) = if *weighted {
                let w = summatory::weighted_prefix_sums(&table)?;
                let report = normality::normality_report_from_sample(&w, normal.bins as usize, threshold)?;
                ("weighted_sums", None, report)
            } else {
                let series = summatory::prefix_sums(&table)?;
                let slope = slope.unwrap_or_else(|| summatory::default_slope(table.spec(), &series));
                let residuals = summatory::residual_series(&series, slope)?;
                let report = normality::normality_report(&residuals, normal.bins as usize, threshold)?;
                ("residuals", Some(slope), report)
            };
            match format(Format::Json) {
                Format::Csv => csv_bytes(|o| report.write_histogram_csv(o)),
                Format::Json => json(&NormtestJson {
                    function: &table.spec().id,
                    sample,
                    slope: used_slope,
                    report,
                }),
            }
        }
        Command::Verdict {
            input,
            lags,
            window,
            slopes,
            normal,
            zero_threshold,
            stability_threshold,
            variance_floor,
            checkpoints,
            empirical_mixing,
        } => {
            let table = input.load(Some(verdict::DEFAULT_DEPTH))?;
            let thresholds = Thresholds {
                depth: (table.len() as u64).max(verdict::MIN_DEPTH),
                zero_threshold: *zero_threshold,
                stability_threshold: *stability_threshold,
                variance_floor: *variance_floor,
                slopes: slopes.bounds()?,
                ks_threshold: normal.ks_threshold,
                bins: normal.bins as usize,
                checkpoints: (!checkpoints.is_empty()).then(|| checkpoints.clone()),
                lags: lags.lags(),
                window: window.policy(),
                mixing_source: if *empirical_mixing { MixingSource::Empirical } else { MixingSource::PreferModel },
            };
            let report = verdict::check_sufficient_conditions(&table, &thresholds)?;
            match format(Format::Json) {
                Format::Csv => csv_bytes(|o| {
                    writeln!(o, "condition,flag,conclusive,measured,threshold")?;
                    for (name, c) in report.conditions.named() {
                        let measured = c.measured.map(|m| m.to_string()).unwrap_or_default();
                        writeln!(o, "{},{},{},{measured},{}", name.as_str(), c.flag, c.conclusive, c.threshold)?;
                    }
                    Ok(())
                }),
                Format::Json => json(&report),
            }
        }
        Command::OeisCheck { id, function, n, shift, from, to, cache_dir } => {
            let spec = builtin(function)?;
            let known = oeis::known_sequence_for(&spec.id);
            let id: SequenceId = match (id, known) {
                (Some(raw), _) => raw.parse().map_err(|_| CliError::Usage(format!("--id: invalid sequence id `{raw}`")))?,
                (None, Some(k)) => k.sequence_id(),
                (None, None) => {
                    return Err(CliError::Usage(format!("--id is required for `{function}`")));
                }
            };
            let shift = shift.unwrap_or_else(|| {
                oeis::known_sequence(&id).filter(|k| k.function() == spec.id).map_or(0, |k| k.index_shift)
            });
            let cache = cache_dir.clone().unwrap_or_else(oeis::default_cache_dir);
            let client = Client::new(cache, cli.offline);
            let (source, reference) = client.fetch_sequence(&id)?;
            let reference = reference.shifted(shift);
            let last_ref = reference.pairs().last().map_or(0, |&(k, _)| k.max(0) as u64);
            let n = n.unwrap_or(last_ref.max(1));
            let to = to.unwrap_or(n.min(last_ref.max(*from)));
            if *from == 0 || *from > to || to > n {
                return Err(CliError::Usage(format!("--from/--to: range {from}..={to} must lie in 1..={n}")));
            }
            let table = sumlab_core::sieve_table(&spec, 1, to_usize(n)?)?;
            let series = summatory::prefix_sums(&table)?;
            let report = oeis::cross_check(&series, &reference, *from..=to)?;
            match format(Format::Json) {
                Format::Csv => csv_bytes(|o| {
                    writeln!(o, "k,computed,reference")?;
                    for m in &report.mismatches {
                        let show = |v: Option<i64>| v.map(|v| v.to_string()).unwrap_or_default();
                        writeln!(o, "{},{},{}", m.k, show(m.computed), show(m.reference))?;
                    }
                    Ok(())
                }),
                Format::Json => json(&OeisJson {
                    sequence: &id,
                    source: source.source,
                    shift,
                    passed: report.passed(),
                    report: &report,
                }),
            }
        }
        Command::Synthetic { kind, n } => {
            let kind: SyntheticKind = kind
                .parse()
                .map_err(|_| CliError::Usage(format!("--kind: unknown synthetic kind `{kind}`")))?;
            let table = synthetic_table(kind, to_usize(*n)?, cli.seed)?;
            match format(Format::Csv) {
                Format::Csv => csv_bytes(|o| write_values(o, table.iter().map(|(k, v)| (k, v.to_string())))),
                Format::Json => json(&ValuesJson {
                    function: kind.as_str(),
                    n: table.len(),
                    weighted: None,
                    seed: Some(cli.seed),
                    values: table.values(),
                }),
            }
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| CliError::Data(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e))?;
    Ok(())
}

/// Executes and emits; the caller turns the error into an exit code.
pub fn run(cli: &Cli) -> Result<()> {
    let bytes = execute(cli)?;
    match &cli.output {
        Some(path) => write_atomic(path, &bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Data(format!("stdout: {e}")))
        }
    }
}
