//! Seeded random instances. Each instance is a pure function of its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instances::{reference_ac, small_battery};
use crate::model::{BatteryParams, Ev, PriceSeries, ResourceSpec};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub resource: ResourceSpec,
    pub prices: PriceSeries,
}

fn rng(tag: u64, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// `n` distinct prices uniform in `[lo, hi]`.
pub fn distinct_prices(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(n);
    while out.len() < n {
        let c = rng.random_range(lo..hi);
        if out.iter().all(|&q| (q - c).abs() > 1e-6) {
            out.push(c);
        }
    }
    out
}

/// Capacity log-uniform in [1, 100] MWh, power log-uniform over two
/// decades of C-rate, a lower SOC limit up to 20 % and a random start.
pub fn random_battery(rng: &mut ChaCha8Rng) -> BatteryParams {
    let cap = log_uniform(rng, 1.0, 100.0);
    let p = cap * log_uniform(rng, 0.02, 2.0);
    let e_min = cap * rng.random_range(0.0..0.2);
    let e_init = rng.random_range(e_min..cap);
    BatteryParams::ideal(e_min, cap, e_init, p)
}

fn horizon(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

pub fn ideal(seed: u64) -> Instance {
    let mut g = rng(1, seed);
    let t = horizon(&mut g, 3, 24);
    let p = random_battery(&mut g);
    Instance {
        name: format!("ideal#{seed}"),
        resource: ResourceSpec::IdealBattery(p),
        prices: PriceSeries::new(1.0, distinct_prices(&mut g, t - 1, 10.0, 100.0)).expect("valid"),
    }
}

/// Efficiencies drawn independently from [0.8, 1).
pub fn imperfect(seed: u64) -> Instance {
    let mut g = rng(2, seed);
    let t = horizon(&mut g, 3, 24);
    let mut p = random_battery(&mut g);
    p.eta_dis = g.random_range(0.8..1.0);
    p.eta_chg = g.random_range(0.8..1.0);
    Instance {
        name: format!("imperfect#{seed}"),
        resource: ResourceSpec::ImperfectBattery(p),
        prices: PriceSeries::new(1.0, distinct_prices(&mut g, t - 1, 10.0, 100.0)).expect("valid"),
    }
}

/// An imperfect instance with every forecast negated (even seeds) or a
/// single forecast negated (odd seeds).
pub fn negative(seed: u64) -> Instance {
    let mut inst = imperfect(seed);
    let f = &mut inst.prices.future_prices;
    if seed % 2 == 0 {
        f.iter_mut().for_each(|c| *c = -*c);
    } else {
        let mut g = rng(3, seed);
        let k = g.random_range(0..f.len());
        f[k] = -f[k];
    }
    inst.name = format!("negative#{seed}");
    inst
}

/// Alternating cheap and expensive hours with noise, ideal battery with
/// the ending-SOC constraint off; callers toggle it.
pub fn extreme(seed: u64) -> Instance {
    let mut g = rng(4, seed);
    let t = horizon(&mut g, 6, 24);
    let p = random_battery(&mut g);
    let mut future = Vec::with_capacity(t - 1);
    let mut high = g.random_bool(0.5);
    while future.len() < t - 1 {
        let run = g.random_range(1..=3);
        for _ in 0..run {
            let c = if high {
                g.random_range(150.0..250.0)
            } else {
                g.random_range(5.0..35.0)
            };
            future.push(c);
        }
        high = !high;
    }
    future.truncate(t - 1);
    Instance {
        name: format!("extreme#{seed}"),
        resource: ResourceSpec::IdealBattery(p),
        prices: PriceSeries::new(1.0, future).expect("valid"),
    }
}

/// Small-horizon instances for the DP oracle: `T` in 2..=6, batteries
/// (ideal and lossy), plus the reference AC at index 0 and a single EV at
/// index 1.
pub fn oracle(seed: u64, index: usize) -> Instance {
    let mut g = rng(5, seed ^ ((index as u64) << 20));
    let t = horizon(&mut g, 2, 6);
    let prices = PriceSeries::new(1.0, distinct_prices(&mut g, t - 1, 10.0, 100.0)).expect("valid");
    let resource = match index {
        0 => {
            let mut ac = reference_ac(t, 1.0);
            ac.temp_init = g.random_range(23.0..25.0);
            ResourceSpec::Ac(ac)
        }
        1 => {
            let first = g.random_range(1..=t);
            let last = g.random_range(first..=t);
            let soc = g.random_range(0.2..0.4);
            let reach = (soc + (last - first + 1) as f64 * 10.0 / 45.0).min(1.0);
            ResourceSpec::Ev(Ev {
                id: 0,
                capacity_kwh: 45.0,
                p_max_kw: 10.0,
                arrival_h: (first - 1) as f64,
                departure_h: last as f64,
                soc_arrival: soc,
                soc_departure: g.random_range(soc..reach),
                first_period: first,
                last_period: last,
            })
        }
        i if i % 2 == 0 => ResourceSpec::IdealBattery(random_battery(&mut g)),
        _ => {
            let mut p = random_battery(&mut g);
            p.eta_dis = g.random_range(0.8..1.0);
            p.eta_chg = g.random_range(0.8..1.0);
            ResourceSpec::ImperfectBattery(p)
        }
    };
    Instance {
        name: format!("oracle#{seed}.{index}"),
        resource,
        prices,
    }
}

/// The small reference battery at 50 % SOC over a day of random prices.
pub fn reference_battery_day(seed: u64) -> Instance {
    let mut g = rng(6, seed);
    Instance {
        name: format!("reference#{seed}"),
        resource: ResourceSpec::IdealBattery(small_battery(0.5)),
        prices: PriceSeries::new(1.0, distinct_prices(&mut g, 23, 10.0, 100.0)).expect("valid"),
    }
}

/// First-period price for an instance, uniform over its forecast range.
pub fn first_price(inst: &Instance, seed: u64) -> f64 {
    let mut g = rng(7, seed);
    let (lo, hi) = inst.prices.future_range().unwrap_or((10.0, 100.0));
    if hi > lo {
        g.random_range(lo..hi)
    } else {
        lo
    }
}
