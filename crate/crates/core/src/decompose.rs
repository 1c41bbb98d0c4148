//! Additive and multiplicative LMDI decomposition over a [`FactorChain`].
//!
//! For a period `0 -> t` with aggregate `C` and factor ratios `x_i`:
//!
//! ```text
//! A        = L(C_t, C_0)
//! effect_i = A * ln(x_i,t / x_i,0)
//! D_i      = x_i,t / x_i,0
//! ```
//!
//! Because the chain telescopes, `sum(effect_i) = C_t - C_0` and
//! `prod(D_i) = C_t / C_0` with no residual.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::chain::{FactorChain, FactorDef};
use crate::error::{Error, Result};
use crate::logmean::log_mean_unchecked;
use crate::record::{IndicatorRecord, PeriodPair};

/// Per-factor contributions for one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectVector {
    pub start_year: i32,
    pub end_year: i32,
    /// Log-mean weight `L(C_t, C_0)`.
    pub weight: f64,
    pub delta_c: f64,
    pub effects: IndexMap<String, f64>,
    /// Signed percent of `delta_c`; `None` when `delta_c == 0`.
    pub shares: IndexMap<String, Option<f64>>,
}

impl EffectVector {
    pub fn label(&self) -> String {
        format!("{}-{}", self.start_year, self.end_year)
    }

    pub fn effect(&self, name: &str) -> Option<f64> {
        self.effects.get(name).copied()
    }

    /// `sum(effects) - delta_c`; zero up to rounding for a perfect decomposition.
    pub fn residual(&self) -> f64 {
        self.effects.values().sum::<f64>() - self.delta_c
    }

    pub fn shares_defined(&self) -> bool {
        self.shares.values().all(Option::is_some)
    }
}

/// Whether a factor pushed the aggregate up, down, or not at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectDirection {
    Expanding,
    Restraining,
    Neutral,
}

impl EffectDirection {
    pub fn of(effect: f64) -> Self {
        if effect > 0.0 {
            Self::Expanding
        } else if effect < 0.0 {
            Self::Restraining
        } else {
            Self::Neutral
        }
    }
}

impl fmt::Display for EffectDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Expanding => "expanding",
            Self::Restraining => "restraining",
            Self::Neutral => "neutral",
        })
    }
}

/// How periods are formed from a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMode {
    /// Consecutive year pairs.
    Annual,
    /// Every year against the first year.
    BaseYear,
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Annual => "annual",
            Self::BaseYear => "base_year",
        })
    }
}

impl FromStr for ChainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "annual" => Ok(Self::Annual),
            "base_year" | "base-year" => Ok(Self::BaseYear),
            other => Err(format!("unknown chaining mode `{other}`")),
        }
    }
}

/// Fetches every chain indicator for both endpoints and checks positivity.
fn check_records(
    start: &IndicatorRecord,
    end: &IndicatorRecord,
    chain: &FactorChain,
) -> Result<()> {
    let keys = chain.indicator_keys();
    for rec in [start, end] {
        let mut bad = Vec::new();
        for &key in &keys {
            let v = rec.require(key)?;
            if !(v > 0.0 && v.is_finite()) {
                bad.push(key.to_owned());
            }
        }
        if !bad.is_empty() {
            return Err(Error::NonPositiveIndicators {
                year: rec.year,
                indicators: bad,
            });
        }
    }
    Ok(())
}

fn factor_value(rec: &IndicatorRecord, key: &str) -> f64 {
    // presence checked in check_pair
    rec.values[key]
}

/// `x_t / x_0` for one factor, plus its logarithm.
fn factor_change(start: &IndicatorRecord, end: &IndicatorRecord, f: &FactorDef) -> (f64, f64) {
    let num = factor_value(end, &f.numerator) / factor_value(start, &f.numerator);
    let ratio = match &f.denominator {
        Some(d) => num * (factor_value(start, d) / factor_value(end, d)),
        None => num,
    };
    if ratio.is_normal() && ratio.is_finite() {
        return (ratio, ratio.ln());
    }
    // Overflow or underflow in the ratio product; fall back to log space.
    let ln = |r: &IndicatorRecord, k: &str| factor_value(r, k).ln();
    let mut log_change = ln(end, &f.numerator) - ln(start, &f.numerator);
    if let Some(d) = &f.denominator {
        log_change -= ln(end, d) - ln(start, d);
    }
    (log_change.exp(), log_change)
}

/// Additive LMDI decomposition of `C_t - C_0` over `chain`.
pub fn decompose_additive(pair: &PeriodPair, chain: &FactorChain) -> Result<EffectVector> {
    additive(&pair.start, &pair.end, chain)
}

fn additive(
    start: &IndicatorRecord,
    end: &IndicatorRecord,
    chain: &FactorChain,
) -> Result<EffectVector> {
    check_records(start, end, chain)?;
    let (c0, ct) = (
        factor_value(start, chain.aggregate()),
        factor_value(end, chain.aggregate()),
    );
    let weight = log_mean_unchecked(ct, c0);
    let effects: IndexMap<String, f64> = chain
        .factors()
        .iter()
        .map(|f| (f.name.clone(), weight * factor_change(start, end, f).1))
        .collect();
    let delta_c = ct - c0;
    let shares = shares_of(&effects, delta_c);
    Ok(EffectVector {
        start_year: start.year,
        end_year: end.year,
        weight,
        delta_c,
        effects,
        shares,
    })
}

/// Multiplicative decomposition: `D_i = x_i,t / x_i,0` per factor, with
/// `prod(D_i) = C_t / C_0`.
pub fn decompose_multiplicative(
    pair: &PeriodPair,
    chain: &FactorChain,
) -> Result<IndexMap<String, f64>> {
    check_records(&pair.start, &pair.end, chain)?;
    Ok(chain
        .factors()
        .iter()
        .map(|f| (f.name.clone(), factor_change(&pair.start, &pair.end, f).0))
        .collect())
}

fn shares_of(effects: &IndexMap<String, f64>, delta_c: f64) -> IndexMap<String, Option<f64>> {
    effects
        .iter()
        .map(|(k, &e)| {
            let share = (delta_c != 0.0).then(|| 100.0 * e / delta_c);
            (k.clone(), share)
        })
        .collect()
}

/// Signed percentage of `delta_c` carried by each effect. Every share is
/// `None` when `delta_c` is zero.
pub fn contribution_shares(ev: &EffectVector) -> IndexMap<String, Option<f64>> {
    shares_of(&ev.effects, ev.delta_c)
}

fn check_series(series: &[IndicatorRecord]) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::TooFewRecords(series.len()));
    }
    for w in series.windows(2) {
        if w[0].year == w[1].year {
            return Err(Error::DuplicateYear(w[1].year));
        }
        if w[1].year < w[0].year {
            return Err(Error::PeriodOrder {
                start: w[0].year,
                end: w[1].year,
            });
        }
    }
    Ok(())
}

/// `(start, end)` indices into `series` for each period of `mode`.
fn period_indices(len: usize, mode: ChainMode) -> impl Iterator<Item = (usize, usize)> {
    (1..len).map(move |i| match mode {
        ChainMode::Annual => (i - 1, i),
        ChainMode::BaseYear => (0, i),
    })
}

/// Forms the periods of `series` according to `mode`.
pub fn period_pairs(series: &[IndicatorRecord], mode: ChainMode) -> Result<Vec<PeriodPair>> {
    check_series(series)?;
    Ok(period_indices(series.len(), mode)
        .map(|(a, b)| PeriodPair::unordered(series[a].clone(), series[b].clone()))
        .collect())
}

/// Decomposes every period of `series`. Output is ordered by end year.
pub fn chain_periods(
    series: &[IndicatorRecord],
    chain: &FactorChain,
    mode: ChainMode,
) -> Result<Vec<EffectVector>> {
    check_series(series)?;
    period_indices(series.len(), mode)
        .map(|(a, b)| additive(&series[a], &series[b], chain))
        .collect()
}
