use crate::error::{Error, Result};
use crate::model::{PriceSeries, ResourceSpec, Schedule};

pub const MAX_DP_HORIZON: usize = 8;

/// MW per kW.
const KW: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct DpResult {
    /// Optimal value of the gridded problem at the initial state.
    pub objective: f64,
    /// Forward simulation of the gridded policy with exact dynamics; its
    /// `objective` is the true cost of that path.
    pub schedule: Schedule,
}

/// One stage of a scalar-state storage model.
struct Stage {
    /// Net-output range, MW.
    act_lo: f64,
    act_hi: f64,
    /// Feasible range of the state after the stage.
    next_lo: f64,
    next_hi: f64,
}

enum Dynamics {
    Storage {
        keep: f64,
        eta_dis: f64,
        eta_chg: f64,
    },
    Thermal {
        keep: f64,
        drift: Vec<f64>,
        /// Degrees per MW of electric input over one interval.
        cool: f64,
    },
}

impl Dynamics {
    /// Action taking `x` to `nx` in period `t`, if the dynamics are
    /// invertible there.
    fn action_to(&self, t: usize, x: f64, nx: f64, dt: f64) -> f64 {
        match self {
            Dynamics::Storage { keep, eta_dis, eta_chg } => {
                let drawn = (keep * x - nx) / dt;
                if drawn >= 0.0 {
                    drawn * eta_dis
                } else {
                    drawn / eta_chg
                }
            }
            Dynamics::Thermal { keep, drift, cool } => (nx - keep * x - drift[t]) / cool,
        }
    }

    fn next(&self, t: usize, x: f64, a: f64, dt: f64) -> f64 {
        match self {
            Dynamics::Storage { keep, eta_dis, eta_chg } => {
                let drawn = if a >= 0.0 { a / eta_dis } else { a * eta_chg };
                keep * x - drawn * dt
            }
            Dynamics::Thermal { keep, drift, cool } => keep * x + drift[t] + cool * a,
        }
    }
}

struct Problem {
    dynamics: Dynamics,
    stages: Vec<Stage>,
    x1: f64,
}

fn problem(r: &ResourceSpec, prices: &PriceSeries) -> Result<Problem> {
    let t_len = prices.horizon();
    let dt = prices.delta_t;
    let storage = |p: &crate::model::BatteryParams, window: &dyn Fn(usize) -> bool, floor: Option<(usize, f64)>| {
        let stages = (0..t_len)
            .map(|t| {
                let on = window(t + 1);
                let next_lo = match floor {
                    Some((last, f)) if last == t + 1 => p.e_min.max(f),
                    _ => p.e_min,
                };
                Stage {
                    act_lo: if on { -p.p_chg_max } else { 0.0 },
                    act_hi: if on { p.p_dis_max } else { 0.0 },
                    next_lo,
                    next_hi: p.e_max,
                }
            })
            .collect();
        Problem {
            dynamics: Dynamics::Storage {
                keep: 1.0 - p.dissipation,
                eta_dis: p.eta_dis,
                eta_chg: p.eta_chg,
            },
            stages,
            x1: p.e_init,
        }
    };
    match r {
        ResourceSpec::IdealBattery(p) | ResourceSpec::ImperfectBattery(p) => {
            if p.ending_soc {
                return Err(Error::Unsupported("ending-SOC constraint in the DP oracle".into()));
            }
            Ok(storage(p, &|_| true, None))
        }
        ResourceSpec::Ev(ev) => {
            let p = crate::model::BatteryParams::ideal(
                0.0,
                ev.capacity_kwh * KW,
                ev.e_init_kwh() * KW,
                ev.p_max_kw * KW,
            );
            let last = ev.last_period.min(t_len);
            Ok(storage(&p, &|t| ev.is_present(t), Some((last, ev.e_floor_kwh() * KW))))
        }
        ResourceSpec::Ac(a) => {
            if a.ambient.len() < t_len {
                return Err(Error::invalid("ambient series shorter than the horizon"));
            }
            let leak = dt / (a.thermal_resistance * a.heat_capacity);
            let stages = (0..t_len)
                .map(|_| Stage {
                    act_lo: -a.cooling_power_max * KW,
                    act_hi: 0.0,
                    next_lo: a.temp_min,
                    next_hi: a.temp_max,
                })
                .collect();
            Ok(Problem {
                dynamics: Dynamics::Thermal {
                    keep: 1.0 - leak,
                    drift: a.ambient.iter().map(|amb| leak * amb).collect(),
                    // Net output is minus the input, so cooling raises it.
                    cool: dt * a.cop / (a.heat_capacity * KW),
                },
                stages,
                x1: a.temp_init,
            })
        }
        ResourceSpec::Cluster { .. } => Err(Error::Unsupported("clusters in the DP oracle".into())),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn interp(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let (lo, hi) = (xs[0], xs[n - 1]);
    if hi <= lo {
        return vs[0];
    }
    let s = ((x - lo) / (hi - lo) * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
    let i = (s.floor() as usize).min(n - 2);
    let w = s - i as f64;
    let (a, b) = (vs[i], vs[i + 1]);
    if w == 0.0 {
        a
    } else if w == 1.0 {
        b
    } else {
        a + w * (b - a)
    }
}

/// Backward value iteration on uniform state and action grids with linear
/// interpolation of the value function, followed by a forward pass of the
/// resulting policy.
pub fn dp_oracle(r: &ResourceSpec, prices: &PriceSeries, c1: f64, e_grid: usize, p_grid: usize) -> Result<DpResult> {
    r.validate()?;
    prices.validate()?;
    let t_len = prices.horizon();
    if t_len > MAX_DP_HORIZON {
        return Err(Error::invalid(format!("DP horizon {t_len} exceeds {MAX_DP_HORIZON}")));
    }
    if e_grid < 2 || p_grid < 2 {
        return Err(Error::invalid("grids need at least two points"));
    }
    let pr = problem(r, prices)?;
    let dt = prices.delta_t;
    let c = prices.with_first(c1);
    let stage_cost = |t: usize, a: f64| -c[t] * a * dt;

    // xs[t] is the state grid before period t+1 (xs[0] is the initial
    // state); values[t] the cost-to-go there.
    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(t_len + 1);
    xs.push(vec![pr.x1]);
    for st in &pr.stages {
        xs.push(grid(st.next_lo, st.next_hi, e_grid));
    }
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); t_len + 1];
    values[t_len] = vec![0.0; e_grid];

    let slack = |st: &Stage| 1e-9 * (1.0 + st.next_hi.abs().max(st.next_lo.abs()));
    let best = |t: usize, x: f64, values: &[Vec<f64>], xs: &[Vec<f64>]| -> Option<(f64, f64, f64)> {
        let st = &pr.stages[t];
        let mut acts = if st.act_hi > st.act_lo {
            grid(st.act_lo, st.act_hi, p_grid)
        } else {
            vec![st.act_lo]
        };
        if st.act_hi > st.act_lo {
            if st.act_lo < 0.0 && st.act_hi > 0.0 {
                acts.push(0.0);
            }
            // Actions landing on next-state grid points: with a piecewise
            // linear value interpolant these make the minimization over the
            // continuous action interval exact.
            acts.extend(
                xs[t + 1]
                    .iter()
                    .map(|&nx| pr.dynamics.action_to(t, x, nx, dt))
                    .filter(|a| (st.act_lo..=st.act_hi).contains(a)),
            );
        }
        let mut out: Option<(f64, f64, f64)> = None;
        for a in acts {
            let nx = pr.dynamics.next(t, x, a, dt);
            if nx < st.next_lo - slack(st) || nx > st.next_hi + slack(st) {
                continue;
            }
            let nx = nx.clamp(st.next_lo, st.next_hi);
            let v = stage_cost(t, a) + interp(&xs[t + 1], &values[t + 1], nx);
            if v.is_finite() && out.is_none_or(|(bv, _, _)| v < bv) {
                out = Some((v, a, nx));
            }
        }
        out
    };

    for t in (0..t_len).rev() {
        let v: Vec<f64> = xs[t]
            .iter()
            .map(|&x| best(t, x, &values, &xs).map_or(f64::INFINITY, |b| b.0))
            .collect();
        values[t] = v;
    }
    let objective = values[0][0];
    if !objective.is_finite() {
        return Err(Error::invalid("DP grid contains no feasible path"));
    }

    let mut power = Vec::with_capacity(t_len);
    let mut energy = vec![pr.x1];
    let mut x = pr.x1;
    for t in 0..t_len {
        let (_, a, nx) = best(t, x, &values, &xs).ok_or_else(|| Error::invalid("DP forward pass lost feasibility"))?;
        power.push(a);
        energy.push(nx);
        x = nx;
    }
    let path_cost = power.iter().enumerate().map(|(t, &a)| stage_cost(t, a)).sum();
    Ok(DpResult {
        objective,
        schedule: Schedule {
            power,
            energy,
            discharge: None,
            charge: None,
            objective: path_cost,
            diagnostics: None,
            solved_prices: c,
            members: vec![],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, SolverOptions};
    use crate::model::{build_lp, BatteryParams};

    fn lp_value(r: &ResourceSpec, prices: &PriceSeries, c1: f64) -> f64 {
        let lp = build_lp(r, prices, c1).unwrap();
        solve(&lp, &SolverOptions::default()).unwrap().objective_value
    }

    #[test]
    fn single_period_is_exact() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 10.0, 5.0, 2.0));
        let prices = PriceSeries::new(1.0, vec![]).unwrap();
        let dp = dp_oracle(&r, &prices, 30.0, 11, 5).unwrap();
        assert!((dp.objective - lp_value(&r, &prices, 30.0)).abs() < 1e-12);
        assert_eq!(dp.schedule.power, vec![2.0]);
    }

    #[test]
    fn two_period_matches_lp() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0));
        let prices = PriceSeries::new(1.0, vec![10.0]).unwrap();
        for c1 in [-5.0, 5.0, 15.0] {
            let dp = dp_oracle(&r, &prices, c1, 201, 201).unwrap();
            assert!((dp.objective - lp_value(&r, &prices, c1)).abs() <= 1e-2);
        }
    }

    #[test]
    fn rejects_long_horizons_and_clusters() {
        let b = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0));
        let long = PriceSeries::new(1.0, vec![10.0; 9]).unwrap();
        assert!(dp_oracle(&b, &long, 1.0, 11, 11).is_err());
        let cl = ResourceSpec::Cluster { members: vec![b] };
        let short = PriceSeries::new(1.0, vec![10.0]).unwrap();
        assert!(matches!(dp_oracle(&cl, &short, 1.0, 11, 11), Err(Error::Unsupported(_))));
    }
}
