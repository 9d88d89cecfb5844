//! OEIS b-file access with an on-disk cache and bundled fixtures.
//!
//! Lookup order is fixture, then cache, then network. Offline clients never
//! reach the transport.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::thread;
use std::time::Duration;

use serde::{Serialize, Serializer};

use crate::arith::{point_value, ArithmeticFunctionSpec, FunctionId};
use crate::error::{Error, Result};
use crate::summatory::SummatorySeries;

pub const CACHE_ENV: &str = "SUMLAB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".sumlab-cache";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_RETRIES: u32 = 2;
pub const DEFAULT_BACKOFF: Duration = Duration::from_millis(500);

/// An OEIS A-number such as `A002321`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceId(String);

impl SequenceId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Numeric part, as used in b-file names (`b002321.txt`).
    pub fn digits(&self) -> &str {
        &self.0[1..]
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        if b.len() == 7 && b[0] == b'A' && b[1..].iter().all(u8::is_ascii_digit) {
            Ok(SequenceId(s.to_owned()))
        } else {
            Err(Error::Argument(format!("`{s}` is not an OEIS id (expected A followed by 6 digits)")))
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for SequenceId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Network,
    Cache,
    Fixture,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceRef {
    pub id: SequenceId,
    pub source: Source,
}

/// `(index, value)` pairs with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IndexedValues(Vec<(i64, i64)>);

impl IndexedValues {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<Self> {
        if let Some(pos) = pairs.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(Error::Format {
                line: pos + 2,
                message: format!("index {} does not increase past {}", pairs[pos + 1].0, pairs[pos].0),
            });
        }
        Ok(Self(pairs))
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: i64) -> Option<i64> {
        self.0
            .binary_search_by_key(&index, |&(i, _)| i)
            .ok()
            .map(|p| self.0[p].1)
    }

    /// Adds `shift` to every index.
    pub fn shifted(&self, shift: i64) -> Self {
        Self(self.0.iter().map(|&(i, v)| (i + shift, v)).collect())
    }

    /// Canonical b-file text, one `index value` line per entry.
    pub fn to_bfile(&self) -> String {
        let mut out = String::with_capacity(self.0.len() * 8);
        for (i, v) in &self.0 {
            out.push_str(&format!("{i} {v}\n"));
        }
        out
    }
}

/// Parses b-file text: `#` comment lines, blank lines, and `index value`
/// data lines with strictly increasing indices.
pub fn parse_bfile(text: &str) -> Result<IndexedValues> {
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parsed = match (fields.next(), fields.next(), fields.next()) {
            (Some(i), Some(v), None) => i.parse::<i64>().ok().zip(v.parse::<i64>().ok()),
            _ => None,
        };
        let (index, value) = parsed.ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected `index value`, found `{line}`"),
        })?;
        if let Some(&(prev, _)) = pairs.last() {
            if index <= prev {
                return Err(Error::Format {
                    line: lineno,
                    message: format!("index {index} does not increase past {prev}"),
                });
            }
        }
        pairs.push((index, value));
    }
    Ok(IndexedValues(pairs))
}

/// A sequence with a bundled fixture and the function whose summatory
/// series it tabulates. Reference index `i` corresponds to `k = i + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownSequence {
    pub id: &'static str,
    pub description: &'static str,
    pub index_shift: i64,
    fixture: &'static str,
}

impl KnownSequence {
    pub fn function(&self) -> FunctionId {
        match self.id {
            "A002321" => FunctionId::Mobius,
            "A002819" => FunctionId::Liouville,
            _ => FunctionId::Squarefree,
        }
    }

    pub fn sequence_id(&self) -> SequenceId {
        self.id.parse().expect("registry ids are valid")
    }

    pub fn fixture_text(&self) -> &'static str {
        self.fixture
    }
}

pub const KNOWN_SEQUENCES: [KnownSequence; 3] = [
    KnownSequence {
        id: "A002321",
        description: "Mertens function M(n)",
        index_shift: 0,
        fixture: include_str!("../fixtures/b002321.txt"),
    },
    KnownSequence {
        id: "A002819",
        description: "summatory Liouville function L(n)",
        index_shift: 0,
        fixture: include_str!("../fixtures/b002819.txt"),
    },
    KnownSequence {
        id: "A013928",
        description: "number of squarefree numbers < n, so a(n) = Q(n - 1)",
        index_shift: -1,
        fixture: include_str!("../fixtures/b013928.txt"),
    },
];

pub fn known_sequence(id: &SequenceId) -> Option<&'static KnownSequence> {
    KNOWN_SEQUENCES.iter().find(|s| s.id == id.as_str())
}

pub fn known_sequence_for(function: &FunctionId) -> Option<&'static KnownSequence> {
    KNOWN_SEQUENCES.iter().find(|s| &s.function() == function)
}

/// Renders the fixture for `seq` from the trial-division evaluator: the
/// first `terms` values starting at index 1.
pub fn oracle_bfile(seq: &KnownSequence, terms: u64) -> Result<String> {
    let spec = ArithmeticFunctionSpec::builtin(seq.function())?;
    let mut out = format!(
        "# {} {}\n# indices 1..{terms}, values from trial-division factorization\n",
        seq.id, seq.description
    );
    let mut sum = 0i64;
    let mut k = 0u64;
    for i in 1..=terms as i64 {
        let target = u64::try_from(i + seq.index_shift).unwrap_or(0);
        while k < target {
            k += 1;
            sum += i64::from(point_value(&spec, k)?);
        }
        out.push_str(&format!("{i} {sum}\n"));
    }
    Ok(out)
}

/// Fetches raw b-file text over some transport.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> std::result::Result<String, String>;
}

/// HTTPS transport with a fixed timeout.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        Self {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new(DEFAULT_TIMEOUT)
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> std::result::Result<String, String> {
        self.agent
            .get(url)
            .call()
            .map_err(|e| e.to_string())?
            .into_string()
            .map_err(|e| e.to_string())
    }
}

pub fn bfile_url(id: &SequenceId) -> String {
    format!("https://oeis.org/{id}/b{}.txt", id.digits())
}

/// Cache directory from `SUMLAB_CACHE_DIR`, else `.sumlab-cache/`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub struct Client {
    cache_dir: PathBuf,
    offline: bool,
    retries: u32,
    backoff: Duration,
    transport: Box<dyn Transport>,
}

impl Client {
    pub fn new(cache_dir: impl Into<PathBuf>, offline: bool) -> Self {
        Self::with_transport(cache_dir, offline, Box::new(HttpTransport::default()))
    }

    pub fn with_transport(cache_dir: impl Into<PathBuf>, offline: bool, transport: Box<dyn Transport>) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            offline,
            retries: DEFAULT_RETRIES,
            backoff: DEFAULT_BACKOFF,
            transport,
        }
    }

    pub fn with_retry_policy(mut self, retries: u32, backoff: Duration) -> Self {
        self.retries = retries;
        self.backoff = backoff;
        self
    }

    pub fn cache_path(&self, id: &SequenceId) -> PathBuf {
        self.cache_dir.join(format!("{id}.txt"))
    }

    pub fn fetch_sequence(&self, id: &SequenceId) -> Result<(SequenceRef, IndexedValues)> {
        let found = |source| SequenceRef { id: id.clone(), source };
        if let Some(known) = known_sequence(id) {
            return Ok((found(Source::Fixture), parse_bfile(known.fixture)?));
        }
        let path = self.cache_path(id);
        if path.exists() {
            return Ok((found(Source::Cache), parse_bfile(&fs::read_to_string(&path)?)?));
        }
        if self.offline {
            return Err(Error::Unavailable(id.to_string()));
        }
        let values = parse_bfile(&self.download(id)?)?;
        write_atomically(&self.cache_dir, &path, values.to_bfile().as_bytes())?;
        Ok((found(Source::Network), values))
    }

    fn download(&self, id: &SequenceId) -> Result<String> {
        let url = bfile_url(id);
        let mut last = String::new();
        for attempt in 0..=self.retries {
            if attempt > 0 {
                thread::sleep(self.backoff * 2u32.pow(attempt - 1));
            }
            match self.transport.get(&url) {
                Ok(text) => return Ok(text),
                Err(e) => last = e,
            }
        }
        Err(Error::Transport {
            retries: self.retries,
            message: format!("{url}: {last}"),
        })
    }
}

fn write_atomically(dir: &Path, path: &Path, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub k: u64,
    /// `None` when the index lies outside the computed series.
    pub computed: Option<i64>,
    /// `None` when the reference has no entry for the index.
    pub reference: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub from: u64,
    pub to: u64,
    pub compared: u64,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `S(k)` with `reference[k]` for every `k` in `range`. Indices
/// missing on either side are reported, never skipped.
pub fn cross_check(
    series: &SummatorySeries,
    reference: &IndexedValues,
    range: RangeInclusive<u64>,
) -> Result<CrossCheckReport> {
    let (from, to) = (*range.start(), *range.end());
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for k in range {
        let computed = if k >= 1 { series.at(k) } else { None };
        let expected = i64::try_from(k).ok().and_then(|i| reference.get(i));
        match (computed, expected) {
            (Some(c), Some(r)) => {
                compared += 1;
                if c != r {
                    mismatches.push(Mismatch { k, computed, reference: expected });
                }
            }
            _ => mismatches.push(Mismatch { k, computed, reference: expected }),
        }
    }
    if compared == 0 {
        return Err(Error::Argument(format!(
            "no index in [{from}, {to}] is covered by both the series and the reference"
        )));
    }
    Ok(CrossCheckReport {
        from,
        to,
        compared,
        mismatches,
    })
}
