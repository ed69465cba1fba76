use super::{distinct_future_prices, AcParams, BatteryParams, Ev, PriceSeries, ResourceSpec};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpSolution, LpStatus, SolverOptions};

/// MW per kW.
const KW: f64 = 1e-3;

#[derive(Clone, Debug)]
pub(crate) enum UnitKind {
    Battery { params: BatteryParams, split: bool },
    Ac,
    Ev,
}

/// Column layout of one physical unit inside an assembled program.
#[derive(Clone, Debug)]
pub(crate) struct Unit {
    pub kind: UnitKind,
    /// Net output expression per period, in MW.
    pub net: Vec<Vec<(usize, f64)>>,
    pub discharge: Vec<usize>,
    pub charge: Vec<usize>,
    /// State after each period: energy (MWh) or room temperature.
    pub state: Vec<usize>,
    pub initial_state: f64,
    pub balance_rows: Vec<usize>,
}

/// An assembled program plus the layout needed to change `c1` in place and
/// decode solutions.
#[derive(Clone, Debug)]
pub(crate) struct ModelLp {
    pub lp: LinearProgram,
    pub delta_t: f64,
    pub units: Vec<Unit>,
    /// Prices the program was built with (after any duplicate separation).
    pub prices: Vec<f64>,
}

impl ModelLp {
    pub fn new(r: &ResourceSpec, prices: &PriceSeries, c1: f64, distinct: bool) -> Result<Self> {
        r.validate()?;
        prices.validate()?;
        if !c1.is_finite() {
            return Err(Error::invalid("first-period price must be finite"));
        }
        let future = if distinct {
            distinct_future_prices(&prices.future_prices)
        } else {
            prices.future_prices.clone()
        };
        let c: Vec<f64> = std::iter::once(c1).chain(future).collect();
        let mut model = ModelLp {
            lp: LinearProgram::new(),
            delta_t: prices.delta_t,
            units: Vec::new(),
            prices: c,
        };
        match r {
            ResourceSpec::Cluster { members } => {
                for (k, m) in members.iter().enumerate() {
                    model.add_unit(m, &format!("u{k}."))?;
                }
            }
            other => model.add_unit(other, "")?,
        }
        model.price_objective();
        Ok(model)
    }

    fn add_unit(&mut self, r: &ResourceSpec, prefix: &str) -> Result<()> {
        let unit = match r {
            ResourceSpec::IdealBattery(p) => self.add_battery(p, !p.is_ideal(), prefix),
            ResourceSpec::ImperfectBattery(p) => {
                warn_if_relaxation_inexact(p, &self.prices);
                self.add_battery(p, true, prefix)
            }
            ResourceSpec::Ac(p) => self.add_ac(p, prefix)?,
            ResourceSpec::Ev(ev) => self.add_ev(ev, prefix),
            ResourceSpec::Cluster { .. } => return Err(Error::invalid("clusters cannot be nested")),
        };
        self.units.push(unit);
        Ok(())
    }

    fn horizon(&self) -> usize {
        self.prices.len()
    }

    fn add_battery(&mut self, p: &BatteryParams, split: bool, prefix: &str) -> Unit {
        let t_len = self.horizon();
        let dt = self.delta_t;
        let keep = 1.0 - p.dissipation;
        let lp = &mut self.lp;
        let mut net = Vec::with_capacity(t_len);
        let (mut discharge, mut charge, mut state, mut rows) = (vec![], vec![], vec![], vec![]);
        for t in 1..=t_len {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(4);
            if split {
                let d = lp.add_var(format!("{prefix}Pd[{t}]"), 0.0, 0.0, p.p_dis_max);
                let c = lp.add_var(format!("{prefix}Pc[{t}]"), 0.0, 0.0, p.p_chg_max);
                row.push((d, dt / p.eta_dis));
                row.push((c, -dt * p.eta_chg));
                net.push(vec![(d, 1.0), (c, -1.0)]);
                discharge.push(d);
                charge.push(c);
            } else {
                let v = lp.add_var(format!("{prefix}P[{t}]"), 0.0, -p.p_chg_max, p.p_dis_max);
                row.push((v, dt));
                net.push(vec![(v, 1.0)]);
            }
            let e = lp.add_var(format!("{prefix}E[{}]", t + 1), 0.0, p.e_min, p.e_max);
            row.push((e, 1.0));
            let rhs = if t == 1 {
                keep * p.e_init
            } else {
                row.push((state[t - 2], -keep));
                0.0
            };
            state.push(e);
            rows.push(lp.add_row(&row, rhs));
        }
        if p.ending_soc {
            rows.push(lp.add_row(&[(state[t_len - 1], 1.0)], p.e_init));
        }
        Unit {
            kind: UnitKind::Battery {
                params: p.clone(),
                split,
            },
            net,
            discharge,
            charge,
            state,
            initial_state: p.e_init,
            balance_rows: rows,
        }
    }

    fn add_ev(&mut self, ev: &Ev, prefix: &str) -> Unit {
        let params = BatteryParams::ideal(0.0, ev.capacity_kwh * KW, ev.e_init_kwh() * KW, ev.p_max_kw * KW);
        let mut unit = self.add_battery(&params, false, prefix);
        for (t, expr) in unit.net.iter().enumerate() {
            if !ev.is_present(t + 1) {
                let (j, _) = expr[0];
                self.lp.lower[j] = 0.0;
                self.lp.upper[j] = 0.0;
            }
        }
        let last = ev.last_period.min(self.horizon());
        let floor = ev.e_floor_kwh() * KW;
        let e = unit.state[last - 1];
        self.lp.lower[e] = self.lp.lower[e].max(floor);
        unit.kind = UnitKind::Ev;
        unit
    }

    fn add_ac(&mut self, p: &AcParams, prefix: &str) -> Result<Unit> {
        let t_len = self.horizon();
        if p.ambient.len() < t_len {
            return Err(Error::invalid(format!(
                "ambient series has {} entries, horizon needs {t_len}",
                p.ambient.len()
            )));
        }
        let dt = self.delta_t;
        let leak = dt / (p.thermal_resistance * p.heat_capacity);
        let cool = dt * p.cop / p.heat_capacity;
        let lp = &mut self.lp;
        let (mut net, mut state, mut rows) = (vec![], vec![], vec![]);
        for t in 1..=t_len {
            let u = lp.add_var(format!("{prefix}Pac[{t}]"), 0.0, 0.0, p.cooling_power_max);
            let th = lp.add_var(format!("{prefix}theta[{}]", t + 1), 0.0, p.temp_min, p.temp_max);
            // theta[t+1] = (1 - leak) theta[t] + leak * ambient[t] - cool * P[t]
            let mut row = vec![(th, 1.0), (u, cool)];
            let mut rhs = leak * p.ambient[t - 1];
            if t == 1 {
                rhs += (1.0 - leak) * p.temp_init;
            } else {
                row.push((state[t - 2], -(1.0 - leak)));
            }
            rows.push(lp.add_row(&row, rhs));
            net.push(vec![(u, -KW)]);
            state.push(th);
        }
        Ok(Unit {
            kind: UnitKind::Ac,
            net,
            discharge: vec![],
            charge: vec![],
            state,
            initial_state: p.temp_init,
            balance_rows: rows,
        })
    }

    fn price_objective(&mut self) {
        let dt = self.delta_t;
        for unit in &self.units {
            for (t, expr) in unit.net.iter().enumerate() {
                for &(j, coef) in expr {
                    self.lp.objective[j] = -self.prices[t] * dt * coef;
                }
            }
        }
    }

    pub fn set_first_price(&mut self, c1: f64) {
        self.prices[0] = c1;
        let dt = self.delta_t;
        for unit in &self.units {
            for &(j, coef) in &unit.net[0] {
                self.lp.objective[j] = -c1 * dt * coef;
            }
        }
    }

    /// Total net output per period, MW.
    pub fn net_power(&self, x: &[f64]) -> Vec<f64> {
        (0..self.horizon())
            .map(|t| {
                self.units
                    .iter()
                    .map(|u| u.net[t].iter().map(|&(j, c)| c * x[j]).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    pub fn first_net(&self, x: &[f64]) -> f64 {
        self.units
            .iter()
            .map(|u| u.net[0].iter().map(|&(j, c)| c * x[j]).sum::<f64>())
            .sum()
    }

    pub fn solve(&self, opts: &SolverOptions) -> Result<LpSolution> {
        let sol = solve(&self.lp, opts)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Solver {
                status: sol.status,
                context: format!("{} columns, {} rows", self.lp.num_vars(), self.lp.num_rows()),
            });
        }
        Ok(sol)
    }

    /// Feasible `(min, max)` of first-period net output, ignoring prices.
    pub fn first_net_range(&self, opts: &SolverOptions) -> Result<(f64, f64)> {
        let mut probe = self.lp.clone();
        probe.objective.iter_mut().for_each(|c| *c = 0.0);
        let mut bounds = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            for unit in &self.units {
                for &(j, coef) in &unit.net[0] {
                    probe.objective[j] = sign * coef;
                }
            }
            let sol = solve(&probe, opts)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Solver {
                    status: sol.status,
                    context: "first-period power range".into(),
                });
            }
            bounds[k] = self.first_net(&sol.primal);
        }
        Ok((bounds[0], bounds[1]))
    }
}

fn warn_if_relaxation_inexact(p: &BatteryParams, prices: &[f64]) {
    let lossy = p.eta_dis < 1.0 || p.eta_chg < 1.0 || p.dissipation > 0.0;
    if lossy && prices.iter().any(|&c| c < 0.0) {
        log::warn!(
            "negative prices with a lossy battery: simultaneous charge and discharge may be optimal \
             in the relaxed program"
        );
    }
}

fn single(r: ResourceSpec, prices: &PriceSeries, c1: f64) -> Result<LinearProgram> {
    Ok(ModelLp::new(&r, prices, c1, false)?.lp)
}

/// Look-ahead program for a battery.
///
/// Lossless symmetric batteries get one net-power column per period;
/// anything else gets separate discharge and charge columns with the
/// no-simultaneity constraint relaxed. Energy columns `E[2..=T+1]` are tied
/// by one balance row per period, plus `E[T+1] = E[1]` with `ending_soc`.
pub fn build_battery_lp(p: &BatteryParams, prices: &PriceSeries, c1: f64) -> Result<LinearProgram> {
    let r = if p.is_ideal() {
        ResourceSpec::IdealBattery(p.clone())
    } else {
        ResourceSpec::ImperfectBattery(p.clone())
    };
    single(r, prices, c1)
}

/// Look-ahead program for a cooling-only air conditioner. Columns are
/// cooling input in kW; the temperature rows are the explicit Euler step of
/// the 1R-1C room model.
pub fn build_ac_lp(p: &AcParams, prices: &PriceSeries, c1: f64) -> Result<LinearProgram> {
    single(ResourceSpec::Ac(p.clone()), prices, c1)
}

/// Battery program restricted to the EV's plug-in window, with the
/// departure floor as a lower bound on the energy at departure.
pub fn build_ev_lp(ev: &Ev, prices: &PriceSeries, c1: f64) -> Result<LinearProgram> {
    single(ResourceSpec::Ev(ev.clone()), prices, c1)
}

/// Program for any resource; clusters are assembled block-diagonally.
pub fn build_lp(r: &ResourceSpec, prices: &PriceSeries, c1: f64) -> Result<LinearProgram> {
    Ok(ModelLp::new(r, prices, c1, false)?.lp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_period_structure() {
        let p = BatteryParams::ideal(0.0, 10.0, 5.0, 2.0);
        let prices = PriceSeries::new(1.0, vec![]).unwrap();
        let lp = build_battery_lp(&p, &prices, 30.0).unwrap();
        assert_eq!(lp.num_vars(), 2);
        assert_eq!(lp.num_rows(), 1);
        assert_eq!(lp.var_labels, vec!["P[1]", "E[2]"]);
    }

    #[test]
    fn imperfect_emits_split_columns() {
        let p = BatteryParams::ideal(0.0, 10.0, 5.0, 2.0).with_efficiency(0.9);
        let prices = PriceSeries::new(1.0, vec![10.0]).unwrap();
        let lp = build_battery_lp(&p, &prices, 30.0).unwrap();
        assert_eq!(lp.num_vars(), 6);
        assert!(lp.var_index("Pd[2]").is_some());
        assert!(lp.var_index("Pc[1]").is_some());
    }

    #[test]
    fn ending_soc_adds_a_row() {
        let p = BatteryParams::ideal(0.0, 10.0, 5.0, 2.0).with_ending_soc(true);
        let prices = PriceSeries::new(1.0, vec![10.0, 20.0]).unwrap();
        let lp = build_battery_lp(&p, &prices, 30.0).unwrap();
        assert_eq!(lp.num_rows(), 4);
    }

    #[test]
    fn short_ambient_rejected() {
        let p = AcParams {
            thermal_resistance: 10.0,
            heat_capacity: 5.0,
            cooling_power_max: 7.0,
            cop: 1.0,
            temp_init: 24.0,
            temp_min: 22.0,
            temp_max: 26.0,
            ambient: vec![30.0],
        };
        let prices = PriceSeries::new(1.0, vec![10.0]).unwrap();
        assert!(build_ac_lp(&p, &prices, 1.0).is_err());
    }

    #[test]
    fn set_first_price_only_touches_period_one() {
        let p = BatteryParams::ideal(0.0, 10.0, 5.0, 2.0);
        let prices = PriceSeries::new(0.5, vec![10.0, 20.0]).unwrap();
        let mut m = ModelLp::new(&ResourceSpec::IdealBattery(p), &prices, 1.0, false).unwrap();
        let before = m.lp.objective.clone();
        m.set_first_price(40.0);
        assert_eq!(m.lp.objective[0], -20.0);
        assert_eq!(&m.lp.objective[1..], &before[1..]);
    }
}
