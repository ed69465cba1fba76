use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::prices::load_prices;
use crate::curve::ExtractOptions;
use crate::error::{Error, Result};
use crate::instances::summer_ambient;
use crate::model::{sample_ev_fleet, AcParams, BatteryParams, Ev, EvFleetParams, PriceSeries, ResourceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceUnit {
    PerMwh,
    /// Converted to per-MWh on load.
    PerKwh,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceSource {
    /// Relative paths resolve against the config file's directory.
    pub path: PathBuf,
    pub delta_t: f64,
    pub currency: String,
    pub unit: PriceUnit,
}

/// AC parameters with an optional ambient series; the synthetic summer day
/// fills in when it is missing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcConfig {
    pub thermal_resistance: f64,
    pub heat_capacity: f64,
    pub cooling_power_max: f64,
    #[serde(default = "one")]
    pub cop: f64,
    pub temp_init: f64,
    pub temp_min: f64,
    pub temp_max: f64,
    #[serde(default)]
    pub ambient: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResourceConfig {
    IdealBattery(BatteryParams),
    ImperfectBattery(BatteryParams),
    Ac(AcConfig),
    Ev(Ev),
    /// Sampled into a cluster of single EVs.
    EvFleet(EvFleetParams),
    Cluster { members: Vec<ResourceConfig> },
}

impl ResourceConfig {
    fn resolve(&self, prices: &PriceSeries, seed: Option<u64>) -> Result<ResourceSpec> {
        Ok(match self {
            ResourceConfig::IdealBattery(p) => ResourceSpec::IdealBattery(p.clone()),
            ResourceConfig::ImperfectBattery(p) => ResourceSpec::ImperfectBattery(p.clone()),
            ResourceConfig::Ev(ev) => ResourceSpec::Ev(ev.clone()),
            ResourceConfig::Ac(a) => ResourceSpec::Ac(AcParams {
                thermal_resistance: a.thermal_resistance,
                heat_capacity: a.heat_capacity,
                cooling_power_max: a.cooling_power_max,
                cop: a.cop,
                temp_init: a.temp_init,
                temp_min: a.temp_min,
                temp_max: a.temp_max,
                ambient: a
                    .ambient
                    .clone()
                    .unwrap_or_else(|| summer_ambient(prices.horizon(), prices.delta_t)),
            }),
            ResourceConfig::EvFleet(f) => {
                let mut f = f.clone();
                if let Some(s) = seed {
                    f.rng_seed = s;
                }
                ResourceSpec::Cluster {
                    members: sample_ev_fleet(&f, prices)?,
                }
            }
            ResourceConfig::Cluster { members } => {
                let mut out = Vec::with_capacity(members.len());
                for m in members {
                    match m.resolve(prices, seed)? {
                        ResourceSpec::Cluster { members } => out.extend(members),
                        r => out.push(r),
                    }
                }
                ResourceSpec::Cluster { members: out }
            }
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractConfig {
    #[serde(default)]
    pub init_samples: Option<usize>,
    #[serde(default)]
    pub price_tol: Option<f64>,
    #[serde(default)]
    pub level_tol: Option<f64>,
}

impl ExtractConfig {
    pub fn options(&self) -> ExtractOptions {
        let mut o = ExtractOptions::default();
        if let Some(n) = self.init_samples {
            o.init_samples = n;
        }
        o.price_tol = self.price_tol;
        o.level_tol = self.level_tol;
        o
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub resource: ResourceConfig,
    pub prices: PriceSource,
    #[serde(default)]
    pub extract: ExtractConfig,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Directory the config was loaded from.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn price_path(&self) -> PathBuf {
        self.base_dir.join(&self.prices.path)
    }

    pub fn load_prices(&self) -> Result<PriceSeries> {
        let mut p = load_prices(self.price_path(), self.prices.delta_t)?;
        if self.prices.unit == PriceUnit::PerKwh {
            p.future_prices.iter_mut().for_each(|c| *c *= 1000.0);
        }
        Ok(p.with_currency(self.prices.currency.clone()))
    }

    /// Loads the prices and builds the validated resource.
    pub fn resolve(&self) -> Result<(ResourceSpec, PriceSeries)> {
        let prices = self.load_prices()?;
        let r = self.resource.resolve(&prices, self.seed)?;
        r.validate()?;
        Ok((r, prices))
    }
}
