use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{PriceSeries, ResourceSpec};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 100;

/// Distribution of an EV aggregator's fleet. Times are hours from the start
/// of period 1; energies in kWh and powers in kW.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvFleetParams {
    pub count: usize,
    pub capacity_kwh: f64,
    pub p_max_kw: f64,
    pub arrival_mean: f64,
    pub arrival_std: f64,
    pub departure_mean: f64,
    pub departure_std: f64,
    pub soc_arrival_lo: f64,
    pub soc_arrival_hi: f64,
    pub soc_depart_lo: f64,
    pub soc_depart_hi: f64,
    pub rng_seed: u64,
}

impl EvFleetParams {
    fn validate(&self) -> Result<()> {
        for (name, lo, hi) in [
            ("arrival", self.soc_arrival_lo, self.soc_arrival_hi),
            ("departure", self.soc_depart_lo, self.soc_depart_hi),
        ] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::invalid(format!("{name} SOC range [{lo}, {hi}] not within [0, 1]")));
            }
        }
        if !(self.capacity_kwh > 0.0 && self.p_max_kw > 0.0) {
            return Err(Error::invalid("EV capacity and power must be positive"));
        }
        if self.arrival_std < 0.0 || self.departure_std < 0.0 {
            return Err(Error::invalid("standard deviations must be non-negative"));
        }
        Ok(())
    }
}

/// One sampled vehicle, plugged in for periods `first_period..=last_period`
/// (1-based, inclusive).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ev {
    pub id: usize,
    pub capacity_kwh: f64,
    pub p_max_kw: f64,
    pub arrival_h: f64,
    pub departure_h: f64,
    pub soc_arrival: f64,
    pub soc_departure: f64,
    pub first_period: usize,
    pub last_period: usize,
}

impl Ev {
    pub fn e_init_kwh(&self) -> f64 {
        self.soc_arrival * self.capacity_kwh
    }

    pub fn e_floor_kwh(&self) -> f64 {
        self.soc_departure * self.capacity_kwh
    }

    pub fn is_present(&self, period: usize) -> bool {
        (self.first_period..=self.last_period).contains(&period)
    }

    pub fn validate(&self) -> Result<()> {
        if self.first_period == 0 || self.last_period < self.first_period {
            return Err(Error::invalid(format!(
                "EV {} has empty window {}..={}",
                self.id, self.first_period, self.last_period
            )));
        }
        if !(self.capacity_kwh > 0.0 && self.p_max_kw > 0.0) {
            return Err(Error::invalid("EV capacity and power must be positive"));
        }
        if !(0.0..=1.0).contains(&self.soc_arrival) || !(0.0..=1.0).contains(&self.soc_departure) {
            return Err(Error::invalid("EV SOC outside [0, 1]"));
        }
        Ok(())
    }
}

fn draw_normal(rng: &mut ChaCha8Rng, mean: f64, std: f64) -> f64 {
    if std == 0.0 {
        mean
    } else {
        Normal::new(mean, std).expect("validated std").sample(rng)
    }
}

/// Samples a fleet reproducibly from `p.rng_seed`.
///
/// Windows snap to whole periods: arrival rounds up to the next period
/// start and departure rounds down to the last period end. Vehicles whose
/// departure floor is out of reach at full charging power are redrawn.
pub fn sample_ev_fleet(p: &EvFleetParams, prices: &PriceSeries) -> Result<Vec<ResourceSpec>> {
    p.validate()?;
    prices.validate()?;
    let t = prices.horizon();
    let dt = prices.delta_t;
    let end = t as f64 * dt;
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let mut fleet = Vec::with_capacity(p.count);
    for id in 0..p.count {
        let mut accepted = None;
        for _ in 0..MAX_ATTEMPTS {
            let arrival = draw_normal(&mut rng, p.arrival_mean, p.arrival_std).clamp(0.0, end);
            let departure = draw_normal(&mut rng, p.departure_mean, p.departure_std).clamp(0.0, end);
            let soc_arrival = rng.random_range(p.soc_arrival_lo..=p.soc_arrival_hi);
            let soc_departure = rng.random_range(p.soc_depart_lo..=p.soc_depart_hi);

            let first_period = (arrival / dt - 1e-9).ceil() as usize + 1;
            let last_period = (departure / dt + 1e-9).floor() as usize;
            if first_period > t || last_period < first_period {
                continue;
            }
            let periods = (last_period - first_period + 1) as f64;
            let reachable = (soc_arrival * p.capacity_kwh + periods * p.p_max_kw * dt).min(p.capacity_kwh);
            if reachable + 1e-9 < soc_departure * p.capacity_kwh {
                continue;
            }
            accepted = Some(Ev {
                id,
                capacity_kwh: p.capacity_kwh,
                p_max_kw: p.p_max_kw,
                arrival_h: arrival,
                departure_h: departure,
                soc_arrival,
                soc_departure,
                first_period,
                last_period,
            });
            break;
        }
        match accepted {
            Some(ev) => fleet.push(ResourceSpec::Ev(ev)),
            None => {
                return Err(Error::ResampleExhausted {
                    index: id,
                    attempts: MAX_ATTEMPTS,
                })
            }
        }
    }
    Ok(fleet)
}
