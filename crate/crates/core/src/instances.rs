//! Reference instances: the five-stair battery with its published forecast,
//! the 2 MWh / 0.6 MW battery used for the efficiency, negative-price and
//! cluster experiments, and the AC and EV fleet settings.

use crate::model::{AcParams, BatteryParams, EvFleetParams, PriceSeries, ResourceSpec};

/// Forecasts `c_2 ..= c_24` (USD/MWh) of the five-stair example.
pub const WORKED_FUTURE_PRICES: [f64; 23] = [
    78.92, 75.91, 70.9, 65.97, 62.4, 62.52, 62.77, 69.89, 73.58, 77.44, 77.98, 83.72, 82.24, 69.61, 61.1, 61.41,
    61.45, 59.52, 59.66, 60.04, 61.87, 60.87, 61.91,
];

/// A strongly fluctuating synthetic forecast (USD/MWh), alternating cheap
/// and expensive hours.
pub const EXTREME_FUTURE_PRICES: [f64; 23] = [
    180.0, 15.0, 210.0, 22.0, 18.0, 195.0, 240.0, 12.0, 160.0, 30.0, 25.0, 205.0, 14.0, 230.0, 19.0, 170.0,
    28.0, 250.0, 16.0, 185.0, 21.0, 200.0, 35.0,
];

pub fn worked_prices() -> PriceSeries {
    PriceSeries::new(1.0, WORKED_FUTURE_PRICES.to_vec()).expect("valid prices")
}

pub fn extreme_prices() -> PriceSeries {
    PriceSeries::new(1.0, EXTREME_FUTURE_PRICES.to_vec()).expect("valid prices")
}

/// 22 MWh, 5 MW, starting at 14 MWh.
pub fn worked_battery() -> BatteryParams {
    BatteryParams::ideal(0.0, 22.0, 14.0, 5.0)
}

pub fn worked_resource() -> ResourceSpec {
    ResourceSpec::IdealBattery(worked_battery())
}

/// 2 MWh, 0.6 MW, SOC limits 10 % and 100 %, initial SOC `soc`.
pub fn small_battery(soc: f64) -> BatteryParams {
    BatteryParams::ideal(0.2, 2.0, 2.0 * soc, 0.6)
}

/// Same battery with both efficiencies set to `eta`.
pub fn small_battery_with_efficiency(soc: f64, eta: f64) -> ResourceSpec {
    let p = small_battery(soc).with_efficiency(eta);
    if p.is_ideal() {
        ResourceSpec::IdealBattery(p)
    } else {
        ResourceSpec::ImperfectBattery(p)
    }
}

/// Seven identical small batteries at the given initial SOCs.
pub fn seven_unit_cluster() -> ResourceSpec {
    ResourceSpec::Cluster {
        members: [0.7, 0.5, 0.2, 0.4, 0.8, 0.6, 0.35]
            .into_iter()
            .map(|s| ResourceSpec::IdealBattery(small_battery(s)))
            .collect(),
    }
}

/// A hot summer day peaking at 34 degrees C mid-afternoon.
pub fn summer_ambient(periods: usize, delta_t: f64) -> Vec<f64> {
    (0..periods)
        .map(|t| {
            let hour = (t as f64 + 0.5) * delta_t;
            28.0 + 6.0 * ((hour - 9.0) * std::f64::consts::PI / 12.0).sin()
        })
        .collect()
}

/// 7 kW cooling, 5 kWh/degC, 10 degC/kW, 24 degC start in a [22, 26] band.
pub fn reference_ac(periods: usize, delta_t: f64) -> AcParams {
    AcParams {
        thermal_resistance: 10.0,
        heat_capacity: 5.0,
        cooling_power_max: 7.0,
        cop: 1.0,
        temp_init: 24.0,
        temp_min: 22.0,
        temp_max: 26.0,
        ambient: summer_ambient(periods, delta_t),
    }
}

/// 90 EVs of 45 kWh / 10 kW; arrival around 7:30, departure around 18:00.
pub fn reference_fleet(seed: u64) -> EvFleetParams {
    EvFleetParams {
        count: 90,
        capacity_kwh: 45.0,
        p_max_kw: 10.0,
        arrival_mean: 7.5,
        arrival_std: 2.5,
        departure_mean: 18.0,
        departure_std: 2.0,
        soc_arrival_lo: 0.2,
        soc_arrival_hi: 0.4,
        soc_depart_lo: 0.8,
        soc_depart_hi: 1.0,
        rng_seed: seed,
    }
}
