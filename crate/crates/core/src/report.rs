//! Decomposition reports and their CSV / JSON renderings.
//!
//! The CSV layout follows the usual LMDI table: one value row per period
//! followed by a row of bracketed contribution shares, then a cumulative
//! summary block for the first-to-last pair.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::chain::FactorChain;
use crate::decompose::{
    chain_periods, decompose_additive, ChainMode, EffectDirection, EffectVector,
};
use crate::error::{Error, Result};
use crate::record::{IndicatorRecord, PeriodPair, ZeroPolicy};

/// Marker printed in place of a share when the period's ΔC is zero.
pub const UNDEFINED_SHARE: &str = "n/a";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjustment {
    pub year: i32,
    pub indicators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub chain: String,
    pub aggregate: String,
    pub factors: Vec<String>,
    pub mode: ChainMode,
    pub zero_policy: ZeroPolicy,
    /// Records touched by the zero policy.
    pub adjustments: Vec<Adjustment>,
    pub periods: Vec<EffectVector>,
    /// Decomposition of the first-to-last endpoint pair. This is not the sum
    /// of annual effects.
    pub cumulative: EffectVector,
}

impl DecompositionReport {
    /// Decomposes `series` (already passed through `policy`) into a report.
    pub fn build(
        series: &[IndicatorRecord],
        chain: &FactorChain,
        mode: ChainMode,
        policy: ZeroPolicy,
    ) -> Result<Self> {
        let periods = chain_periods(series, chain, mode)?;
        let first = series.first().expect("chain_periods checked length");
        let last = series.last().expect("chain_periods checked length");
        let cumulative = decompose_additive(&PeriodPair::new(first.clone(), last.clone())?, chain)?;
        let adjustments = series
            .iter()
            .filter(|r| r.is_adjusted())
            .map(|r| Adjustment {
                year: r.year,
                indicators: r.adjusted.clone(),
            })
            .collect();
        Ok(Self {
            chain: chain.name().to_owned(),
            aggregate: chain.aggregate().to_owned(),
            factors: chain.factor_names().map(str::to_owned).collect(),
            mode,
            zero_policy: policy,
            adjustments,
            periods,
            cumulative,
        })
    }

    /// Full-precision JSON that parses back to an identical report.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text)?;
        for ev in report
            .periods
            .iter()
            .chain(std::iter::once(&report.cumulative))
        {
            if ev.effects.keys().ne(report.factors.iter()) {
                return Err(Error::MalformedReport(format!(
                    "period {} does not list the report's factors in order",
                    ev.label()
                )));
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::UnsupportedFormat(s.to_owned())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Two-decimal rendering without a negative zero.
pub fn format_value(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

fn format_share(share: Option<f64>) -> String {
    match share {
        Some(s) => format!("({}%)", format_value(s)),
        None => UNDEFINED_SHARE.to_owned(),
    }
}

fn round2(x: f64) -> f64 {
    let r: f64 = format_value(x).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn render_report(report: &DecompositionReport, format: ReportFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_report(report, format, &mut buf)?;
    Ok(buf)
}

pub fn write_report<W: Write>(
    report: &DecompositionReport,
    format: ReportFormat,
    out: W,
) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv(report, out),
        ReportFormat::Json => write_json(report, out),
    }
}

fn write_csv<W: Write>(report: &DecompositionReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(out);
    let header = ["Year".to_owned(), "ΔC".to_owned()]
        .into_iter()
        .chain(report.factors.iter().cloned());
    w.write_record(header)?;

    let mut block = |label: String, ev: &EffectVector| -> Result<()> {
        let values = [label, format_value(ev.delta_c)]
            .into_iter()
            .chain(ev.effects.values().map(|&e| format_value(e)));
        w.write_record(values)?;
        let shares = [String::new(), String::new()]
            .into_iter()
            .chain(ev.shares.values().map(|&s| format_share(s)));
        w.write_record(shares)?;
        Ok(())
    };
    for ev in &report.periods {
        block(ev.label(), ev)?;
    }
    block(
        format!("Cumulative {}", report.cumulative.label()),
        &report.cumulative,
    )?;
    w.flush()?;
    Ok(())
}

fn period_json(ev: &EffectVector) -> Value {
    let effects: Map<String, Value> = ev
        .effects
        .iter()
        .map(|(k, &v)| (k.clone(), json!(round2(v))))
        .collect();
    let shares: Map<String, Value> = ev
        .shares
        .iter()
        .map(|(k, &s)| {
            let v = match s {
                Some(s) => json!(round2(s)),
                None => json!(UNDEFINED_SHARE),
            };
            (k.clone(), v)
        })
        .collect();
    let directions: Map<String, Value> = ev
        .effects
        .iter()
        .map(|(k, &v)| (k.clone(), json!(EffectDirection::of(v).to_string())))
        .collect();
    json!({
        "period": ev.label(),
        "start_year": ev.start_year,
        "end_year": ev.end_year,
        "delta_c": round2(ev.delta_c),
        "effects": effects,
        "shares": shares,
        "directions": directions,
    })
}

fn write_json<W: Write>(report: &DecompositionReport, mut out: W) -> Result<()> {
    let adjustments: Vec<Value> = report
        .adjustments
        .iter()
        .map(|a| json!({ "year": a.year, "indicators": a.indicators }))
        .collect();
    let doc = json!({
        "chain": report.chain,
        "aggregate": report.aggregate,
        "factors": report.factors,
        "mode": report.mode.to_string(),
        "zero_policy": report.zero_policy,
        "adjustments": adjustments,
        "periods": report.periods.iter().map(period_json).collect::<Vec<_>>(),
        "cumulative": period_json(&report.cumulative),
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Share sums per period, for checking the 100% invariant. `None` for
/// periods whose shares are undefined.
pub fn share_totals(report: &DecompositionReport) -> IndexMap<String, Option<f64>> {
    report
        .periods
        .iter()
        .chain(std::iter::once(&report.cumulative))
        .map(|ev| {
            let total = ev
                .shares
                .values()
                .try_fold(0.0, |acc, s| s.map(|s| acc + s));
            (ev.label(), total)
        })
        .collect()
}
