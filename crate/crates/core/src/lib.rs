//! Logarithmic Mean Divisia Index (LMDI) decomposition of an aggregate into
//! the contributions of a multiplicative factor chain.
//!
//! The engine works on any chain whose factor ratios telescope to the
//! aggregate; [`kaya`] provides the five-factor Kaya identity for CO₂
//! emissions. Decompositions are residual-free: additive effects sum to
//! `C_t - C_0` and multiplicative effects multiply to `C_t / C_0`.
//!
//! ```
//! use kaya_lmdi::{kaya, PeriodPair};
//!
//! let start = kaya::kaya_record(2008, 95224.62, 48166.0, 18230.0, 539834.0, 20635460.0);
//! let end = kaya::kaya_record(2022, 58638.12, 41562.0, 13289.0, 1409783.0, 19042455.0);
//! let effects = kaya::kaya_decompose(&PeriodPair::new(start, end).unwrap()).unwrap();
//! assert!((effects.sum() - -36586.5).abs() < 1e-6);
//! ```

pub mod chain;
pub mod dataset;
pub mod decompose;
mod error;
pub mod kaya;
pub mod logmean;
pub mod output;
pub mod record;
pub mod report;
pub mod svg;

pub use chain::{FactorChain, FactorDef};
pub use dataset::{load_dataset, load_dataset_path, write_dataset, LoadOptions};
pub use decompose::{
    chain_periods, contribution_shares, decompose_additive, decompose_multiplicative, ChainMode,
    EffectDirection, EffectVector,
};
pub use error::{Error, ErrorKind, Result};
pub use kaya::{kaya_chain, kaya_decompose, kaya_record, KayaEffects};
pub use logmean::log_mean;
pub use record::{apply_zero_policy, IndicatorRecord, PeriodPair, ZeroMode, ZeroPolicy};
pub use report::{render_report, write_report, DecompositionReport, ReportFormat};
pub use svg::{render_waterfall_svg, waterfall_bars, WaterfallBar};
