//! Flexible-resource descriptions and their look-ahead linear programs.
//!
//! Every resource is reduced to the same question: given prices for the
//! current period and forecasts for the rest of the horizon, which
//! trajectory minimizes cost (equivalently maximizes trading revenue)?
//! The builders in [`build`] turn a [`ResourceSpec`] into a
//! [`LinearProgram`](crate::lp::LinearProgram) and [`solve_schedule`]
//! decodes the optimum into a [`Schedule`].
//!
//! Sign convention: net output is positive when the resource injects power
//! (battery discharge) and negative when it consumes (charging, cooling).

mod build;
mod ev;
mod schedule;

pub use build::{build_ac_lp, build_battery_lp, build_ev_lp, build_lp};
pub(crate) use build::ModelLp;
pub use ev::{sample_ev_fleet, Ev, EvFleetParams};
pub use schedule::{solve_schedule, solve_schedule_with, Diagnostics, Schedule, TerminalBound};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Current-period interval length plus forecasts for periods `2..=T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    /// Hours per interval.
    pub delta_t: f64,
    /// Prices `c_2 .. c_T` per MWh.
    pub future_prices: Vec<f64>,
    #[serde(default = "default_currency")]
    pub currency: String,
}

fn default_currency() -> String {
    "USD".to_string()
}

impl PriceSeries {
    pub fn new(delta_t: f64, future_prices: Vec<f64>) -> Result<Self> {
        let s = PriceSeries {
            delta_t,
            future_prices,
            currency: default_currency(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_currency(mut self, currency: impl Into<String>) -> Self {
        self.currency = currency.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_t > 0.0 && self.delta_t.is_finite()) {
            return Err(Error::invalid(format!("delta_t must be positive, got {}", self.delta_t)));
        }
        if let Some(i) = self.future_prices.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("price for period {} is not finite", i + 2)));
        }
        Ok(())
    }

    /// Number of periods including the current one.
    pub fn horizon(&self) -> usize {
        1 + self.future_prices.len()
    }

    /// The full price vector `c_1 .. c_T`.
    pub fn with_first(&self, c1: f64) -> Vec<f64> {
        std::iter::once(c1).chain(self.future_prices.iter().copied()).collect()
    }

    pub fn scaled(&self, k: f64) -> Self {
        PriceSeries {
            future_prices: self.future_prices.iter().map(|p| p * k).collect(),
            ..self.clone()
        }
    }

    pub fn shifted(&self, a: f64) -> Self {
        PriceSeries {
            future_prices: self.future_prices.iter().map(|p| p + a).collect(),
            ..self.clone()
        }
    }

    /// `(min, max)` of the forecasts, or `None` for a single-period horizon.
    pub fn future_range(&self) -> Option<(f64, f64)> {
        let mut it = self.future_prices.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), p| (lo.min(p), hi.max(p))))
    }
}

/// Battery parameters in MWh and MW.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryParams {
    pub e_min: f64,
    pub e_max: f64,
    pub e_init: f64,
    pub p_dis_max: f64,
    pub p_chg_max: f64,
    #[serde(default = "one")]
    pub eta_dis: f64,
    #[serde(default = "one")]
    pub eta_chg: f64,
    /// Fraction of stored energy lost per interval.
    #[serde(default)]
    pub dissipation: f64,
    /// Require the stored energy to return to `e_init` at the horizon end.
    #[serde(default)]
    pub ending_soc: bool,
}

fn one() -> f64 {
    1.0
}

impl BatteryParams {
    pub fn ideal(e_min: f64, e_max: f64, e_init: f64, p_max: f64) -> Self {
        BatteryParams {
            e_min,
            e_max,
            e_init,
            p_dis_max: p_max,
            p_chg_max: p_max,
            eta_dis: 1.0,
            eta_chg: 1.0,
            dissipation: 0.0,
            ending_soc: false,
        }
    }

    pub fn with_efficiency(mut self, eta: f64) -> Self {
        self.eta_dis = eta;
        self.eta_chg = eta;
        self
    }

    pub fn with_dissipation(mut self, eps: f64) -> Self {
        self.dissipation = eps;
        self
    }

    pub fn with_ending_soc(mut self, on: bool) -> Self {
        self.ending_soc = on;
        self
    }

    pub fn with_initial_energy(mut self, e_init: f64) -> Self {
        self.e_init = e_init;
        self
    }

    /// Lossless, symmetric and non-dissipating.
    pub fn is_ideal(&self) -> bool {
        self.eta_dis == 1.0 && self.eta_chg == 1.0 && self.dissipation == 0.0 && self.p_dis_max == self.p_chg_max
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.e_min,
            self.e_max,
            self.e_init,
            self.p_dis_max,
            self.p_chg_max,
            self.eta_dis,
            self.eta_chg,
            self.dissipation,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("battery parameters must be finite"));
        }
        if !(self.e_min <= self.e_init && self.e_init <= self.e_max) {
            return Err(Error::invalid(format!(
                "initial energy {} outside [{}, {}]",
                self.e_init, self.e_min, self.e_max
            )));
        }
        if self.p_dis_max <= 0.0 || self.p_chg_max <= 0.0 {
            return Err(Error::invalid("power limits must be positive"));
        }
        for eta in [self.eta_dis, self.eta_chg] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::invalid(format!("efficiency {eta} outside (0, 1]")));
            }
        }
        if !(0.0..1.0).contains(&self.dissipation) {
            return Err(Error::invalid(format!("dissipation {} outside [0, 1)", self.dissipation)));
        }
        Ok(())
    }

    /// Energy tolerance used to decide whether a bound binds.
    pub fn bind_tol(&self) -> f64 {
        let span = self.e_max - self.e_min;
        if span > 0.0 {
            1e-6 * span
        } else {
            1e-9
        }
    }

    /// Complementarity tolerance on `min(Pd, Pc)`.
    pub fn comp_tol(&self) -> f64 {
        1e-7 * self.p_dis_max.min(self.p_chg_max)
    }
}

/// Cooling-only air conditioner on a first-order thermal model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcParams {
    /// Degrees C per kW.
    pub thermal_resistance: f64,
    /// kWh per degree C.
    pub heat_capacity: f64,
    /// kW of electric input.
    pub cooling_power_max: f64,
    /// Heat removed per unit of electric input.
    #[serde(default = "one")]
    pub cop: f64,
    pub temp_init: f64,
    pub temp_min: f64,
    pub temp_max: f64,
    /// Outdoor temperature per period, degrees C.
    pub ambient: Vec<f64>,
}

impl AcParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.temp_min <= self.temp_init && self.temp_init <= self.temp_max) {
            return Err(Error::invalid(format!(
                "initial temperature {} outside [{}, {}]",
                self.temp_init, self.temp_min, self.temp_max
            )));
        }
        for (name, v) in [
            ("thermal_resistance", self.thermal_resistance),
            ("heat_capacity", self.heat_capacity),
            ("cooling_power_max", self.cooling_power_max),
            ("cop", self.cop),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.ambient.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("ambient temperatures must be finite"));
        }
        Ok(())
    }
}

/// One flexible resource, or a cluster of them sharing the price axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResourceSpec {
    IdealBattery(BatteryParams),
    ImperfectBattery(BatteryParams),
    Ac(AcParams),
    Ev(Ev),
    Cluster { members: Vec<ResourceSpec> },
}

impl ResourceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ResourceSpec::IdealBattery(p) => {
                p.validate()?;
                if !p.is_ideal() {
                    return Err(Error::invalid(
                        "ideal battery requires unit efficiencies, no dissipation and symmetric power",
                    ));
                }
                Ok(())
            }
            ResourceSpec::ImperfectBattery(p) => p.validate(),
            ResourceSpec::Ac(p) => p.validate(),
            ResourceSpec::Ev(ev) => ev.validate(),
            ResourceSpec::Cluster { members } => {
                if members.is_empty() {
                    return Err(Error::invalid("cluster has no members"));
                }
                for m in members {
                    if matches!(m, ResourceSpec::Cluster { .. }) {
                        return Err(Error::invalid("clusters cannot be nested"));
                    }
                    m.validate()?;
                }
                Ok(())
            }
        }
    }

    pub fn battery(&self) -> Option<&BatteryParams> {
        match self {
            ResourceSpec::IdealBattery(p) | ResourceSpec::ImperfectBattery(p) => Some(p),
            _ => None,
        }
    }

    pub fn battery_mut(&mut self) -> Option<&mut BatteryParams> {
        match self {
            ResourceSpec::IdealBattery(p) | ResourceSpec::ImperfectBattery(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_ideal_battery(&self) -> bool {
        matches!(self, ResourceSpec::IdealBattery(_))
    }

    /// Largest first-period discharge (positive net output), MW.
    pub fn max_discharge_mw(&self) -> f64 {
        match self {
            ResourceSpec::IdealBattery(p) | ResourceSpec::ImperfectBattery(p) => p.p_dis_max,
            ResourceSpec::Ac(_) => 0.0,
            ResourceSpec::Ev(ev) => ev.p_max_kw / 1000.0,
            ResourceSpec::Cluster { members } => members.iter().map(Self::max_discharge_mw).sum(),
        }
    }

    /// Largest first-period consumption as a positive number, MW.
    pub fn max_charge_mw(&self) -> f64 {
        match self {
            ResourceSpec::IdealBattery(p) | ResourceSpec::ImperfectBattery(p) => p.p_chg_max,
            ResourceSpec::Ac(p) => p.cooling_power_max / 1000.0,
            ResourceSpec::Ev(ev) => ev.p_max_kw / 1000.0,
            ResourceSpec::Cluster { members } => members.iter().map(Self::max_charge_mw).sum(),
        }
    }

    /// Default level tolerance: `1e-6 * (1 + max power)`.
    pub fn level_tol(&self) -> f64 {
        1e-6 * (1.0 + self.max_discharge_mw().max(self.max_charge_mw()))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ResourceSpec::IdealBattery(_) => "ideal_battery",
            ResourceSpec::ImperfectBattery(_) => "imperfect_battery",
            ResourceSpec::Ac(_) => "ac",
            ResourceSpec::Ev(_) => "ev",
            ResourceSpec::Cluster { .. } => "cluster",
        }
    }
}

/// Moves duplicated forecasts apart by `k * 1e-7 * (1 + ||c||)` where `k` is
/// the period index, so every period has a distinct price.
pub fn distinct_future_prices(future: &[f64]) -> Vec<f64> {
    let norm = future.iter().fold(0.0_f64, |m, p| m.max(p.abs()));
    let step = 1e-7 * (1.0 + norm);
    future
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let dup = future.iter().enumerate().any(|(j, &q)| j != i && q == p);
            if dup {
                p + (i + 2) as f64 * step
            } else {
                p
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_separated() {
        let out = distinct_future_prices(&[5.0, 7.0, 5.0]);
        assert_eq!(out[1], 7.0);
        assert!(out[0] != out[2]);
        assert!(out[0] > 5.0 && out[0] < 5.0 + 1e-5);
        assert_eq!(distinct_future_prices(&[1.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn battery_validation() {
        assert!(BatteryParams::ideal(0.0, 10.0, 11.0, 1.0).validate().is_err());
        assert!(BatteryParams::ideal(0.0, 10.0, 5.0, 0.0).validate().is_err());
        assert!(BatteryParams::ideal(0.0, 10.0, 5.0, 1.0).with_efficiency(1.2).validate().is_err());
        assert!(BatteryParams::ideal(0.0, 10.0, 5.0, 1.0).validate().is_ok());
    }

    #[test]
    fn ideal_variant_rejects_losses() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 1.0, 0.5, 1.0).with_efficiency(0.9));
        assert!(r.validate().is_err());
    }

    #[test]
    fn nested_and_empty_clusters_rejected() {
        let b = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 1.0, 0.5, 1.0));
        assert!(ResourceSpec::Cluster { members: vec![] }.validate().is_err());
        let nested = ResourceSpec::Cluster {
            members: vec![ResourceSpec::Cluster { members: vec![b.clone()] }],
        };
        assert!(nested.validate().is_err());
        assert!(ResourceSpec::Cluster { members: vec![b] }.validate().is_ok());
    }

    #[test]
    fn price_series_rejects_bad_input() {
        assert!(PriceSeries::new(0.0, vec![]).is_err());
        assert!(PriceSeries::new(1.0, vec![f64::NAN]).is_err());
        let s = PriceSeries::new(0.5, vec![]).unwrap();
        assert_eq!(s.horizon(), 1);
        assert_eq!(s.future_range(), None);
    }
}
