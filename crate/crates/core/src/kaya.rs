//! The five-factor Kaya identity
//!
//! ```text
//! C = C/F * F/E * E/G * G/P * P
//! ```
//!
//! with C = CO₂ emissions (Gg), F = fossil (primary) energy, E = total energy
//! consumption (both ktoe), G = GDP and P = population.

use serde::{Deserialize, Serialize};

use crate::chain::{FactorChain, FactorDef};
use crate::decompose::{decompose_additive, EffectVector};
use crate::error::Result;
use crate::record::{IndicatorRecord, PeriodPair};

pub const CO2: &str = "co2";
/// Also published as "primary energy resources".
pub const FOSSIL_ENERGY: &str = "fossil_energy";
/// Also published as "energy consumption" / "final energy consumption".
pub const TOTAL_ENERGY: &str = "total_energy";
pub const GDP: &str = "gdp";
pub const POPULATION: &str = "population";

/// Indicator columns in schema order.
pub const INDICATORS: [&str; 5] = [CO2, FOSSIL_ENERGY, TOTAL_ENERGY, GDP, POPULATION];

pub const CARBON_INTENSITY: &str = "ΔI";
pub const ENERGY_MIX: &str = "ΔM";
pub const GENERATING_EFFICIENCY: &str = "ΔL";
pub const ECONOMY: &str = "ΔB";
pub const POPULATION_EFFECT: &str = "ΔP";

pub const CHAIN_NAME: &str = "kaya5";

/// `[C/F, F/E, E/G, G/P, P]` named ΔI, ΔM, ΔL, ΔB, ΔP.
pub fn kaya_chain() -> FactorChain {
    FactorChain::new(
        CHAIN_NAME,
        CO2,
        vec![
            FactorDef::ratio(CARBON_INTENSITY, CO2, FOSSIL_ENERGY),
            FactorDef::ratio(ENERGY_MIX, FOSSIL_ENERGY, TOTAL_ENERGY),
            FactorDef::ratio(GENERATING_EFFICIENCY, TOTAL_ENERGY, GDP),
            FactorDef::ratio(ECONOMY, GDP, POPULATION),
            FactorDef::level(POPULATION_EFFECT, POPULATION),
        ],
    )
    .expect("kaya chain telescopes")
}

/// Builds a record with the five Kaya indicators.
pub fn kaya_record(
    year: i32,
    co2: f64,
    fossil_energy: f64,
    total_energy: f64,
    gdp: f64,
    population: f64,
) -> IndicatorRecord {
    IndicatorRecord::new(year)
        .with(CO2, co2)
        .with(FOSSIL_ENERGY, fossil_energy)
        .with(TOTAL_ENERGY, total_energy)
        .with(GDP, gdp)
        .with(POPULATION, population)
}

/// Kaya effects in Gg CO₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KayaEffects {
    pub delta_c: f64,
    pub carbon_intensity: f64,
    pub energy_mix: f64,
    pub generating_efficiency: f64,
    pub economy: f64,
    pub population_effect: f64,
}

impl KayaEffects {
    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    /// Effects in chain order (ΔI, ΔM, ΔL, ΔB, ΔP).
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.carbon_intensity,
            self.energy_mix,
            self.generating_efficiency,
            self.economy,
            self.population_effect,
        ]
    }

    fn from_vector(ev: &EffectVector) -> Self {
        Self {
            delta_c: ev.delta_c,
            carbon_intensity: ev.effects[CARBON_INTENSITY],
            energy_mix: ev.effects[ENERGY_MIX],
            generating_efficiency: ev.effects[GENERATING_EFFICIENCY],
            economy: ev.effects[ECONOMY],
            population_effect: ev.effects[POPULATION_EFFECT],
        }
    }
}

pub fn kaya_decompose(pair: &PeriodPair) -> Result<KayaEffects> {
    decompose_additive(pair, &kaya_chain()).map(|ev| KayaEffects::from_vector(&ev))
}
