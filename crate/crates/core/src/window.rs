use serde::Serialize;

use crate::arith::FunctionTable;
use crate::error::{Error, Result};

/// Positions `k` in `[start, start + len)` over which pair statistics of
/// `(f(k), f(k + lag))` are averaged with uniform weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: u64,
    pub len: usize,
}

impl Window {
    pub fn new(start: u64, len: usize) -> Self {
        Self { start, len }
    }

    /// `[start, n - lag]` over the whole table.
    pub fn full(table: &FunctionTable, lag: u64) -> Result<Self> {
        let len = (table.len() as u64)
            .checked_sub(lag)
            .filter(|&l| l > 0)
            .ok_or_else(|| Error::Argument(format!("lag {lag} leaves no room in a table of {}", table.len())))?;
        Ok(Self::new(table.start(), len as usize))
    }

    /// Second half of a table anchored at 1 with length `n`: starts at
    /// `max(2, n/2)` and leaves room for the largest lag.
    pub fn upper_half(n: u64, max_lag: u64) -> Result<Self> {
        let start = (n / 2).max(2);
        let len = (n / 2)
            .checked_sub(max_lag)
            .filter(|&l| l > 0)
            .ok_or_else(|| Error::Argument(format!("n = {n} is too small for lags up to {max_lag}")))?;
        Ok(Self::new(start, len as usize))
    }

    /// Value slices for `f(k)` and `f(k + lag)` over the window.
    pub(crate) fn pair_slices<'a>(&self, table: &'a FunctionTable, lag: u64) -> Result<(&'a [i8], &'a [i8])> {
        let shifted = self.start.checked_add(lag).ok_or_else(|| Error::Argument("lag overflows".into()))?;
        match (table.slice(self.start, self.len), table.slice(shifted, self.len)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Argument(format!(
                "window [{}, {}) shifted by {lag} leaves the table [{}, {})",
                self.start,
                self.start + self.len as u64,
                table.start(),
                table.end()
            ))),
        }
    }
}
