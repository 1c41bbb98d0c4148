//! Indicator observations, period pairs and the zero-value policy.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One year's raw observations, keyed by indicator name.
///
/// `adjusted` lists indicators whose value was replaced by the zero policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRecord {
    pub year: i32,
    pub values: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjusted: Vec<String>,
}

impl IndicatorRecord {
    pub fn new(year: i32) -> Self {
        Self {
            year,
            values: IndexMap::new(),
            adjusted: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_owned(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Value for `key`, or a domain error if the record lacks it.
    pub fn require(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::MissingIndicator {
            year: self.year,
            key: key.to_owned(),
        })
    }

    pub fn is_adjusted(&self) -> bool {
        !self.adjusted.is_empty()
    }

    /// Keys whose value is not strictly positive (NaN included).
    // negated comparison so NaN counts as non-positive
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn non_positive_keys(&self) -> Vec<String> {
        self.values
            .iter()
            .filter(|(_, v)| !(**v > 0.0))
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// Two observations to decompose between, `start` earlier than `end`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodPair {
    pub start: IndicatorRecord,
    pub end: IndicatorRecord,
}

impl PeriodPair {
    pub fn new(start: IndicatorRecord, end: IndicatorRecord) -> Result<Self> {
        if end.year <= start.year {
            return Err(Error::PeriodOrder {
                start: start.year,
                end: end.year,
            });
        }
        Ok(Self { start, end })
    }

    /// Pair without the year-order check. Used for reversed (end, start)
    /// decompositions.
    pub fn unordered(start: IndicatorRecord, end: IndicatorRecord) -> Self {
        Self { start, end }
    }

    pub fn start_year(&self) -> i32 {
        self.start.year
    }

    pub fn end_year(&self) -> i32 {
        self.end.year
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.start.year, self.end.year)
    }
}

/// Default substitute for zero or negative values.
pub const DEFAULT_ZERO_DELTA: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroMode {
    Reject,
    Substitute,
}

/// How non-positive indicator values are handled before decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPolicy {
    mode: ZeroMode,
    delta: f64,
}

impl Default for ZeroPolicy {
    fn default() -> Self {
        Self::reject()
    }
}

impl ZeroPolicy {
    pub fn reject() -> Self {
        Self {
            mode: ZeroMode::Reject,
            delta: DEFAULT_ZERO_DELTA,
        }
    }

    /// Small-value substitution; `delta` must lie in `(0, 1e-6)`.
    pub fn substitute(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1e-6) {
            return Err(Error::InvalidZeroPolicy(format!(
                "delta must lie in (0, 1e-6), got {delta}"
            )));
        }
        Ok(Self {
            mode: ZeroMode::Substitute,
            delta,
        })
    }

    pub fn mode(&self) -> ZeroMode {
        self.mode
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn apply(&self, record: IndicatorRecord) -> Result<IndicatorRecord> {
        apply_zero_policy(record, self)
    }
}

/// Applies `policy` to every value of `record`.
///
/// Substitute mode replaces any value below `delta` (zero and negatives
/// included) with `delta` and flags it; reject mode fails on any
/// non-positive value.
// negated comparison so NaN is replaced as well
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn apply_zero_policy(
    mut record: IndicatorRecord,
    policy: &ZeroPolicy,
) -> Result<IndicatorRecord> {
    match policy.mode {
        ZeroMode::Reject => {
            let bad = record.non_positive_keys();
            if bad.is_empty() {
                Ok(record)
            } else {
                Err(Error::NonPositiveIndicators {
                    year: record.year,
                    indicators: bad,
                })
            }
        }
        ZeroMode::Substitute => {
            for (key, value) in record.values.iter_mut() {
                if !(*value >= policy.delta) {
                    *value = policy.delta;
                    if !record.adjusted.contains(key) {
                        record.adjusted.push(key.clone());
                    }
                }
            }
            Ok(record)
        }
    }
}
