use serde::{Deserialize, Serialize};

use super::build::{ModelLp, Unit, UnitKind};
use super::{PriceSeries, ResourceSpec};
use crate::error::Result;
use crate::lp::{LpSolution, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalBound {
    Upper,
    Lower,
    EndingSoc,
}

/// Structure of a battery schedule up to the first binding energy bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Period after which the stored energy first sits on a bound.
    pub t_b: Option<usize>,
    pub terminal: Option<TerminalBound>,
    /// Fully-charging periods within `1..=t_b`.
    pub n_c: usize,
    /// Fully-discharging periods within `1..=t_b`.
    pub n_d: usize,
    /// Idle periods within `1..=t_b`.
    pub n_0: usize,
    /// First period within `1..=t_b` that is neither full nor (for split
    /// models) idle.
    pub marginal_period: Option<usize>,
    /// Periods within `1..=t_b` not at a full-power level (or idle, for
    /// split models).
    pub slack: usize,
    /// Price threshold read from the energy-row duals (lossless net models).
    pub threshold: Option<f64>,
    pub max_simultaneous: f64,
    pub complementarity_violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Net output per period, MW (discharge positive).
    pub power: Vec<f64>,
    /// State trajectory `x_1 ..= x_{T+1}`: stored energy in MWh for storage,
    /// room temperature for an air conditioner. Clusters report the summed
    /// energy of their storage members.
    pub energy: Vec<f64>,
    pub discharge: Option<Vec<f64>>,
    pub charge: Option<Vec<f64>>,
    /// Negative trading revenue at the unperturbed prices.
    pub objective: f64,
    pub diagnostics: Option<Diagnostics>,
    /// Prices the program was solved with.
    pub solved_prices: Vec<f64>,
    pub members: Vec<Schedule>,
}

pub fn solve_schedule(r: &ResourceSpec, prices: &PriceSeries, c1: f64) -> Result<Schedule> {
    solve_schedule_with(r, prices, c1, &SolverOptions::default())
}

/// Solves the look-ahead program at `c1` and decodes it. Duplicate forecasts
/// are separated before solving so the structural diagnostics are well
/// defined; the reported objective uses the original prices.
pub fn solve_schedule_with(r: &ResourceSpec, prices: &PriceSeries, c1: f64, opts: &SolverOptions) -> Result<Schedule> {
    let model = ModelLp::new(r, prices, c1, true)?;
    let sol = model.solve(opts)?;
    Ok(decode(&model, &sol, &prices.with_first(c1)))
}

pub(crate) fn decode(model: &ModelLp, sol: &LpSolution, base_prices: &[f64]) -> Schedule {
    let mut members: Vec<Schedule> = model
        .units
        .iter()
        .map(|u| decode_unit(model, u, sol, base_prices))
        .collect();
    if members.len() == 1 {
        return members.pop().expect("one member");
    }
    let t_len = base_prices.len();
    let power = model.net_power(&sol.primal);
    let mut energy = vec![0.0; t_len + 1];
    for (m, u) in members.iter().zip(&model.units) {
        if !matches!(u.kind, UnitKind::Ac) {
            for (acc, e) in energy.iter_mut().zip(&m.energy) {
                *acc += e;
            }
        }
    }
    Schedule {
        objective: members.iter().map(|m| m.objective).sum(),
        power,
        energy,
        discharge: None,
        charge: None,
        diagnostics: None,
        solved_prices: model.prices.clone(),
        members,
    }
}

fn decode_unit(model: &ModelLp, unit: &Unit, sol: &LpSolution, base_prices: &[f64]) -> Schedule {
    let x = &sol.primal;
    let dt = model.delta_t;
    let power: Vec<f64> = unit
        .net
        .iter()
        .map(|e| e.iter().map(|&(j, c)| c * x[j]).sum())
        .collect();
    let mut energy = Vec::with_capacity(power.len() + 1);
    energy.push(unit.initial_state);
    energy.extend(unit.state.iter().map(|&j| x[j]));
    let pick = |idx: &[usize]| (!idx.is_empty()).then(|| idx.iter().map(|&j| x[j]).collect::<Vec<_>>());
    let discharge = pick(&unit.discharge);
    let charge = pick(&unit.charge);
    let objective = power.iter().zip(base_prices).map(|(p, c)| -c * p * dt).sum();
    let diagnostics = match &unit.kind {
        UnitKind::Battery { params, split } => Some(battery_diagnostics(
            params,
            *split,
            &power,
            &energy,
            discharge.as_deref(),
            charge.as_deref(),
            &model.prices,
            unit.balance_rows.get(0..power.len()).map(|rows| {
                rows.iter().map(|&r| sol.duals[r]).collect::<Vec<_>>()
            }),
        )),
        _ => None,
    };
    Schedule {
        power,
        energy,
        discharge,
        charge,
        objective,
        diagnostics,
        solved_prices: model.prices.clone(),
        members: vec![],
    }
}

#[allow(clippy::too_many_arguments)]
fn battery_diagnostics(
    p: &super::BatteryParams,
    split: bool,
    power: &[f64],
    energy: &[f64],
    discharge: Option<&[f64]>,
    charge: Option<&[f64]>,
    prices: &[f64],
    balance_duals: Option<Vec<f64>>,
) -> Diagnostics {
    let t_len = power.len();
    let bind = p.bind_tol();
    let ptol = 1e-6 * (1.0 + p.p_dis_max.max(p.p_chg_max));

    let mut t_b = None;
    let mut terminal = None;
    for t in 1..=t_len {
        let e = energy[t];
        let hit = if (e - p.e_max).abs() <= bind {
            Some(TerminalBound::Upper)
        } else if (e - p.e_min).abs() <= bind {
            Some(TerminalBound::Lower)
        } else if p.ending_soc && t == t_len {
            Some(TerminalBound::EndingSoc)
        } else {
            None
        };
        if hit.is_some() {
            t_b = Some(t);
            terminal = hit;
            break;
        }
    }

    let horizon = t_b.unwrap_or(t_len);
    let (mut n_c, mut n_d, mut n_0) = (0, 0, 0);
    let mut marginal_period = None;
    for (t, &pt) in power.iter().enumerate().take(horizon) {
        if (pt + p.p_chg_max).abs() <= ptol {
            n_c += 1;
        } else if (pt - p.p_dis_max).abs() <= ptol {
            n_d += 1;
        } else {
            if pt.abs() <= ptol {
                n_0 += 1;
                if split {
                    continue;
                }
            }
            marginal_period.get_or_insert(t + 1);
        }
    }
    let slack = horizon - n_c - n_d - if split { n_0 } else { 0 };

    // With E[t+1] interior for t < t_b the balance-row duals are all equal,
    // and a period at an interior power level prices at -y.
    let threshold = match (split, p.dissipation == 0.0, t_b, balance_duals) {
        (false, true, Some(tb), Some(y)) => Some(-y[tb - 1]),
        _ => None,
    };

    let max_simultaneous = match (discharge, charge) {
        (Some(d), Some(c)) => d.iter().zip(c).map(|(a, b)| a.min(*b)).fold(0.0, f64::max),
        _ => 0.0,
    };
    let positive = prices.iter().all(|&c| c > 0.0);
    Diagnostics {
        t_b,
        terminal,
        n_c,
        n_d,
        n_0,
        marginal_period,
        slack,
        threshold,
        max_simultaneous,
        complementarity_violation: positive && max_simultaneous > p.comp_tol(),
    }
}
