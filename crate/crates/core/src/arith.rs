//! Bounded arithmetic functions: definitions, a trial-division reference
//! evaluator, and a segmented sieve for bulk evaluation over ranges.
//!
//! Domain indices `k` are 1-based; storage is 0-based. All conversions go
//! through [`FunctionTable::index_of`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default number of values processed per sieve block.
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 16;

/// Identifier of an arithmetic function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctionId {
    Mobius,
    Liouville,
    Squarefree,
    PrimeIndicator,
    /// Values supplied from outside (CSV input, synthetic baselines).
    Custom(String),
}

impl FunctionId {
    pub const BUILTINS: [FunctionId; 4] = [
        FunctionId::Mobius,
        FunctionId::Liouville,
        FunctionId::Squarefree,
        FunctionId::PrimeIndicator,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            FunctionId::Mobius => "mobius",
            FunctionId::Liouville => "liouville",
            FunctionId::Squarefree => "squarefree",
            FunctionId::PrimeIndicator => "prime_indicator",
            FunctionId::Custom(name) => name,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, FunctionId::Custom(_))
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mobius" => Ok(FunctionId::Mobius),
            "liouville" => Ok(FunctionId::Liouville),
            "squarefree" => Ok(FunctionId::Squarefree),
            "prime_indicator" => Ok(FunctionId::PrimeIndicator),
            other => Err(Error::Argument(format!("unknown function id `{other}`"))),
        }
    }
}

impl Serialize for FunctionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Metadata of a bounded arithmetic function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArithmeticFunctionSpec {
    pub id: FunctionId,
    /// Bound `L` with `|f(k)| <= L` for every `k`.
    pub bound: f64,
    /// Sorted set of values the function may take.
    pub alphabet: Vec<i8>,
    /// Analytic limit of `S(n)/n`, when known.
    pub known_mean: Option<f64>,
}

impl ArithmeticFunctionSpec {
    pub fn builtin(id: FunctionId) -> Result<Self> {
        let (alphabet, known_mean) = match id {
            FunctionId::Mobius => (vec![-1, 0, 1], None),
            FunctionId::Liouville => (vec![-1, 1], None),
            FunctionId::Squarefree => (vec![0, 1], Some(6.0 / (PI * PI))),
            FunctionId::PrimeIndicator => (vec![0, 1], Some(0.0)),
            FunctionId::Custom(ref name) => {
                return Err(Error::Argument(format!("`{name}` is not a built-in function")))
            }
        };
        Ok(Self {
            id,
            bound: 1.0,
            alphabet,
            known_mean,
        })
    }

    /// A spec for externally supplied values. The alphabet is sorted and
    /// deduplicated; every entry must respect `bound`.
    pub fn custom(name: impl Into<String>, mut alphabet: Vec<i8>, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::Argument(format!("bound must be positive and finite, got {bound}")));
        }
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(Error::Argument("alphabet must not be empty".into()));
        }
        if let Some(v) = alphabet.iter().find(|v| f64::from(v.unsigned_abs()) > bound) {
            return Err(Error::Argument(format!("value {v} exceeds bound {bound}")));
        }
        Ok(Self {
            id: FunctionId::Custom(name.into()),
            bound,
            alphabet,
            known_mean: None,
        })
    }

    pub fn contains(&self, value: i8) -> bool {
        self.alphabet.binary_search(&value).is_ok()
    }
}

/// The four built-in functions in registry order.
pub fn builtin_specs() -> Vec<ArithmeticFunctionSpec> {
    FunctionId::BUILTINS
        .iter()
        .cloned()
        .map(|id| ArithmeticFunctionSpec::builtin(id).expect("builtin"))
        .collect()
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub k: u64,
    /// `(prime, exponent)` pairs ascending by prime.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn total_primes(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factorizes `k` by trial division. This is the reference evaluator the
/// sieve is checked against, so it stays deliberately simple.
pub fn factorize(k: u64) -> Result<Factorization> {
    if k == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    let mut factors = Vec::new();
    let mut rest = k;
    let mut d = 2u64;
    while d <= rest / d {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { k, factors })
}

fn value_from_counts(id: &FunctionId, distinct: u32, total: u32) -> i8 {
    match id {
        FunctionId::Mobius => {
            if distinct != total {
                0
            } else if distinct % 2 == 1 {
                -1
            } else {
                1
            }
        }
        FunctionId::Liouville => {
            if total % 2 == 1 {
                -1
            } else {
                1
            }
        }
        FunctionId::Squarefree => i8::from(distinct == total),
        FunctionId::PrimeIndicator => i8::from(total == 1),
        FunctionId::Custom(_) => unreachable!("custom functions have no closed form"),
    }
}

/// Evaluates a built-in function at `k` via [`factorize`].
pub fn point_value(spec: &ArithmeticFunctionSpec, k: u64) -> Result<i8> {
    if !spec.id.is_builtin() {
        return Err(Error::Argument(format!("`{}` has no point evaluator", spec.id)));
    }
    let fac = factorize(k)?;
    Ok(value_from_counts(
        &spec.id,
        fac.distinct_primes() as u32,
        fac.total_primes(),
    ))
}

/// A contiguous block of values `f(start), f(start + 1), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    spec: ArithmeticFunctionSpec,
    start: u64,
    values: Vec<i8>,
}

impl FunctionTable {
    /// Builds a table, checking every value against the spec's alphabet.
    pub fn new(spec: ArithmeticFunctionSpec, start: u64, values: Vec<i8>) -> Result<Self> {
        if start == 0 {
            return Err(Error::Domain("tables are indexed from k = 1".into()));
        }
        if values.is_empty() {
            return Err(Error::Argument("table must not be empty".into()));
        }
        if let Some(pos) = values.iter().position(|&v| !spec.contains(v)) {
            return Err(Error::Argument(format!(
                "value {} at k = {} is outside the alphabet of `{}`",
                values[pos],
                start + pos as u64,
                spec.id
            )));
        }
        Ok(Self { spec, start, values })
    }

    pub fn spec(&self) -> &ArithmeticFunctionSpec {
        &self.spec
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One past the last covered `k`.
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Storage index of domain index `k`, if covered.
    pub fn index_of(&self, k: u64) -> Option<usize> {
        if k >= self.start && k < self.end() {
            Some((k - self.start) as usize)
        } else {
            None
        }
    }

    pub fn get(&self, k: u64) -> Option<i8> {
        self.index_of(k).map(|i| self.values[i])
    }

    /// Values for `k` in `[from, from + len)`; `None` if not fully covered.
    pub fn slice(&self, from: u64, len: usize) -> Option<&[i8]> {
        let i = self.index_of(from)?;
        self.values.get(i..i.checked_add(len)?)
    }

    /// `(k, f(k))` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as u64, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub block_size: usize,
    pub parallel: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            block_size: DEFAULT_BLOCK_SIZE,
            parallel: true,
        }
    }
}

/// Evaluates a built-in over `[start, start + length)` with default settings.
pub fn sieve_table(spec: &ArithmeticFunctionSpec, start: u64, length: usize) -> Result<FunctionTable> {
    sieve_table_with(spec, start, length, SieveConfig::default())
}

/// Segmented sieve. For every prime `p <= sqrt(end)` and every power
/// `p^e <= end`, multiples of `p^e` accumulate one factor of `p` into a
/// running product and the prime-factor counters; squared-prime hits are
/// visible as `total != distinct`. A cofactor left over once the product
/// falls short of `k` is a single prime above `sqrt(end)`.
pub fn sieve_table_with(
    spec: &ArithmeticFunctionSpec,
    start: u64,
    length: usize,
    config: SieveConfig,
) -> Result<FunctionTable> {
    if !spec.id.is_builtin() {
        return Err(Error::Argument(format!("`{}` cannot be sieved", spec.id)));
    }
    if start == 0 {
        return Err(Error::Domain("sieve range must start at k >= 1".into()));
    }
    if length == 0 {
        return Err(Error::Argument("sieve length must be positive".into()));
    }
    if config.block_size == 0 {
        return Err(Error::Argument("block size must be positive".into()));
    }
    let end = start
        .checked_add(length as u64)
        .filter(|&e| e <= i64::MAX as u64)
        .ok_or_else(|| Error::Range(format!("range [{start}, {start} + {length}) overflows")))?;

    let primes = small_primes((end - 1).isqrt());
    let mut values = vec![0i8; length];
    let run = |(b, block): (usize, &mut [i8])| {
        let lo = start + (b * config.block_size) as u64;
        sieve_block(&spec.id, lo, block, &primes);
    };
    if config.parallel {
        values.par_chunks_mut(config.block_size).enumerate().for_each(run);
    } else {
        values.chunks_mut(config.block_size).enumerate().for_each(run);
    }
    FunctionTable::new(spec.clone(), start, values)
}

fn sieve_block(id: &FunctionId, lo: u64, out: &mut [i8], primes: &[u64]) {
    let hi = lo + out.len() as u64;
    let mut prod = vec![1u64; out.len()];
    let mut distinct = vec![0u8; out.len()];
    let mut total = vec![0u8; out.len()];
    let limit = (hi - 1).isqrt();

    for &p in primes.iter().take_while(|&&p| p <= limit) {
        let mut pe = p;
        loop {
            let first = lo.div_ceil(pe) * pe;
            let mut m = first;
            while m < hi {
                let i = (m - lo) as usize;
                prod[i] *= p;
                total[i] += 1;
                if pe == p {
                    distinct[i] += 1;
                }
                m += pe;
            }
            match pe.checked_mul(p) {
                Some(next) if next < hi => pe = next,
                _ => break,
            }
        }
    }

    for (i, slot) in out.iter_mut().enumerate() {
        let k = lo + i as u64;
        let (mut d, mut t) = (u32::from(distinct[i]), u32::from(total[i]));
        if prod[i] < k {
            d += 1;
            t += 1;
        }
        *slot = value_from_counts(id, d, t);
    }
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
