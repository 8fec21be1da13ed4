//! JSON scenario and sweep configuration.
//!
//! ```json
//! {
//!   "main":  {"m": 2, "m_s": 3, "gamma_bar_db": 10},
//!   "eaves": {"m": 1, "m_s": 2, "gamma_bar_db": 0},
//!   "sweep": {"snr_db_start": -10, "snr_db_stop": 40, "snr_db_step": 5,
//!             "vary": "m_D", "vary_values": [1, 2, 4],
//!             "metrics": ["pnsc", "asc"], "oracle": "none"},
//!   "mc":    {"n": 100000, "seed": 7}
//! }
//! ```
//!
//! `validate` also accepts `"scenarios": [{"main": .., "eaves": ..}, ..]`.

use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fading::{FadingParams, WiretapScenario};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    pub m: f64,
    pub m_s: f64,
    pub gamma_bar_db: f64,
}

impl LinkConfig {
    pub fn params(&self) -> Result<FadingParams> {
        if !self.gamma_bar_db.is_finite() {
            return Err(Error::domain(format!(
                "gamma_bar_db must be finite, got {}",
                self.gamma_bar_db
            )));
        }
        FadingParams::from_db(self.m, self.m_s, self.gamma_bar_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub main: LinkConfig,
    pub eaves: LinkConfig,
}

impl ScenarioConfig {
    pub fn scenario(&self) -> Result<WiretapScenario> {
        Ok(WiretapScenario::new(
            self.main.params()?,
            self.eaves.params()?,
        ))
    }
}

/// Parameter varied across the traces of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum VaryParam {
    #[serde(rename = "m_D")]
    MD,
    #[serde(rename = "m_E")]
    ME,
    #[serde(rename = "m_sD")]
    MsD,
    #[serde(rename = "m_sE")]
    MsE,
    /// Values in dB.
    #[serde(rename = "gamma_bar_E")]
    GammaBarE,
}

impl VaryParam {
    pub fn name(self) -> &'static str {
        match self {
            VaryParam::MD => "m_D",
            VaryParam::ME => "m_E",
            VaryParam::MsD => "m_sD",
            VaryParam::MsE => "m_sE",
            VaryParam::GammaBarE => "gamma_bar_E",
        }
    }

    pub fn apply(self, s: &WiretapScenario, value: f64) -> Result<WiretapScenario> {
        let mut out = *s;
        match self {
            VaryParam::MD => out.main = s.main.with_m(value)?,
            VaryParam::ME => out.eaves = s.eaves.with_m(value)?,
            VaryParam::MsD => out.main = s.main.with_m_s(value)?,
            VaryParam::MsE => out.eaves = s.eaves.with_m_s(value)?,
            VaryParam::GammaBarE => {
                out.eaves = s.eaves.with_gamma_bar(crate::fading::db_to_linear(value))?
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Pnsc,
    Asc,
    AscAsym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    #[default]
    None,
    Mc,
    Quad,
    Both,
}

impl OracleMode {
    pub fn mc(self) -> bool {
        matches!(self, OracleMode::Mc | OracleMode::Both)
    }

    pub fn quad(self) -> bool {
        matches!(self, OracleMode::Quad | OracleMode::Both)
    }
}

fn all_metrics() -> Vec<Metric> {
    vec![Metric::Pnsc, Metric::Asc, Metric::AscAsym]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub vary: VaryParam,
    pub vary_values: Vec<f64>,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub oracle: OracleMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n: u64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n: 1_000_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub main: Option<LinkConfig>,
    pub eaves: Option<LinkConfig>,
    pub sweep: Option<SweepConfig>,
    pub mc: Option<McConfig>,
    pub scenarios: Option<Vec<ScenarioConfig>>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The single `main`/`eaves` scenario.
    pub fn scenario(&self) -> Result<WiretapScenario> {
        match (&self.main, &self.eaves) {
            (Some(main), Some(eaves)) => ScenarioConfig {
                main: *main,
                eaves: *eaves,
            }
            .scenario(),
            _ => Err(Error::domain("config needs both `main` and `eaves`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let c = Config::from_json(
            r#"{"main": {"m": 2, "m_s": 3, "gamma_bar_db": 10},
                "eaves": {"m": 1, "m_s": 2, "gamma_bar_db": 0},
                "sweep": {"snr_db_start": 0, "snr_db_stop": 10, "snr_db_step": 5,
                          "vary": "m_sE", "vary_values": [1.5, 3]},
                "mc": {"n": 5000, "seed": 3}}"#,
        )
        .unwrap();
        let s = c.scenario().unwrap();
        assert!((s.main.gamma_bar() - 10.0).abs() < 1e-12);
        let sw = c.sweep.unwrap();
        assert_eq!(sw.vary, VaryParam::MsE);
        assert_eq!(sw.metrics, all_metrics());
        assert_eq!(sw.oracle, OracleMode::None);
        assert_eq!(c.mc.unwrap().seed, 3);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Config::from_json(r#"{"main": {"m": 1, "m_s": 1, "gamma_bar": 1}}"#).is_err());
        assert!(Config::from_json(r#"{"extra": 1}"#).is_err());
        let c = Config::from_json(r#"{"main": {"m": -1, "m_s": 1, "gamma_bar_db": 0}, "eaves": {"m": 1, "m_s": 1, "gamma_bar_db": 0}}"#)
            .unwrap();
        assert!(c.scenario().is_err());
        assert!(Config::default().scenario().is_err());
    }
}
