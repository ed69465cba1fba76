use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PropertyReport;
use crate::curve::{classify_segments, extract_curve, Evaluation, ExtractOptions, SegmentKind, StaircaseCurve};
use crate::error::{Error, Result};
use crate::model::{solve_schedule, BatteryParams, PriceSeries, ResourceSpec, Schedule};

/// Curve invariants plus agreement with fresh solves at `samples` random
/// prices kept away from the breakpoints.
pub fn check_staircase(
    curve: &StaircaseCurve,
    r: &ResourceSpec,
    prices: &PriceSeries,
    samples: usize,
    seed: u64,
) -> PropertyReport {
    let m = &curve.meta;
    let mut rep = PropertyReport::new("staircase")
        .tol("level_tol", m.level_tol)
        .tol("price_tol", m.price_tol);
    if let Err(e) = curve.validate() {
        rep.fail(None, e.to_string());
        return rep;
    }
    let lo = curve.levels[0];
    let hi = curve.levels[curve.levels.len() - 1];
    if lo < -r.max_charge_mw() - m.level_tol || hi > r.max_discharge_mw() + m.level_tol {
        rep.fail(None, format!("levels [{lo}, {hi}] exceed the power limits"));
    }
    if !(m.saturated_low && m.saturated_high) {
        rep.fail(None, "sweep not saturated");
    }

    let b = &curve.breakpoints;
    let (a, z) = match (b.first(), b.last()) {
        (Some(&f), Some(&l)) => {
            let w = (l - f).max(1.0);
            (f - w, l + w)
        }
        _ => (m.sweep_lo, m.sweep_hi),
    };
    let clearance = 100.0 * m.price_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < 100 * samples.max(1) {
        attempts += 1;
        let c1 = rng.random_range(a..=z);
        if b.iter().any(|bp| (c1 - bp).abs() <= clearance) {
            continue;
        }
        drawn += 1;
        let Evaluation::Level(want) = curve.evaluate(c1) else {
            continue;
        };
        match solve_schedule(r, prices, c1) {
            Ok(s) if (s.power[0] - want).abs() <= m.level_tol => {}
            Ok(s) => rep.fail(Some(c1), format!("curve gives {want}, LP gives {}", s.power[0])),
            Err(e) => rep.fail(Some(c1), e.to_string()),
        }
    }
    rep
}

/// Stair-count bound (5 ideal, 9 imperfect), mutual exclusion of the two
/// crossing stairs for ideal batteries, and the label order along price.
pub fn check_segment_bounds(curve: &StaircaseCurve, r: &ResourceSpec) -> PropertyReport {
    let bound = match r {
        ResourceSpec::IdealBattery(_) => 5,
        ResourceSpec::ImperfectBattery(_) => 9,
        _ => return PropertyReport::not_applicable("segment_bounds", "not a battery"),
    };
    let mut rep = PropertyReport::new("segment_bounds").tol("max_levels", bound as f64);
    let n = curve.levels.len();
    if n > bound {
        rep.fail(None, format!("{n} levels > {bound}"));
    }
    let kinds = curve.kinds();
    if r.is_ideal_battery()
        && kinds.contains(&SegmentKind::ChargeForDischarge)
        && kinds.contains(&SegmentKind::DischargeForCharge)
    {
        rep.fail(None, "ChargeForDischarge and DischargeForCharge in one curve");
    }
    let ranks: Vec<u8> = kinds.iter().filter_map(|k| k.order()).collect();
    if ranks.windows(2).any(|w| w[1] < w[0]) {
        rep.fail(None, format!("labels out of order: {kinds:?}"));
    }
    let unclassified = kinds.iter().filter(|k| **k == SegmentKind::Unclassified).count();
    if unclassified > 0 {
        rep.observe(format!("{unclassified} unclassified stairs"));
        if r.is_ideal_battery() && !r.battery().is_some_and(|p| p.ending_soc) {
            rep.fail(None, format!("ideal battery stair matched no formula: {kinds:?}"));
        }
    }
    rep
}

/// Schedule structure up to the first binding bound: at most one period
/// off a full-power level, and the price threshold read from the duals
/// separating charging from discharging periods.
pub fn check_structure(sched: &Schedule, p: &BatteryParams) -> PropertyReport {
    let Some(d) = &sched.diagnostics else {
        return PropertyReport::not_applicable("structure", "no battery diagnostics");
    };
    let prices = &sched.solved_prices;
    let norm = prices.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let eps = 1e-7 * (1.0 + norm);
    let ptol = 1e-6 * (1.0 + p.p_dis_max.max(p.p_chg_max));
    let mut rep = PropertyReport::new("structure").tol("price_eps", eps).tol("power_tol", ptol);
    let split = sched.discharge.is_some();
    let Some(t_b) = d.t_b else {
        rep.observe("no binding energy bound");
        return rep;
    };
    if !split && d.slack > 1 {
        rep.fail(None, format!("T_B - n_c - n_d = {} with T_B = {t_b}", d.slack));
    }
    if split && d.slack > 1 {
        rep.observe(format!("split schedule has {} partial periods before T_B", d.slack));
    }
    if let Some(th) = d.threshold {
        for t in 0..t_b {
            let (c, pt) = (prices[t], sched.power[t]);
            let ok = if c > th + eps {
                (pt - p.p_dis_max).abs() <= ptol
            } else if c < th - eps {
                (pt + p.p_chg_max).abs() <= ptol
            } else {
                true
            };
            if !ok {
                rep.fail(
                    None,
                    format!("period {}: price {c} vs threshold {th} but power {pt}", t + 1),
                );
            }
        }
    }
    rep
}

/// Simultaneous charging and discharging stays below the complementarity
/// tolerance when every price is positive.
pub fn check_complementarity(sched: &Schedule, p: &BatteryParams) -> PropertyReport {
    let (Some(dis), Some(chg)) = (&sched.discharge, &sched.charge) else {
        let mut rep = PropertyReport::new("complementarity");
        rep.observe("single net-power column; vacuous");
        return rep;
    };
    if sched.solved_prices.iter().any(|&c| c <= 0.0) {
        return PropertyReport::not_applicable("complementarity", "non-positive prices");
    }
    let tol = p.comp_tol();
    let mut rep = PropertyReport::new("complementarity").tol("comp_tol", tol);
    for (t, (d, c)) in dis.iter().zip(chg).enumerate() {
        if d.min(*c) > tol {
            rep.fail(None, format!("period {}: discharge {d}, charge {c}", t + 1));
        }
    }
    rep
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Re-extracts with every price (the first one included) multiplied by `k`
/// and expects breakpoints scaled by `k` and unchanged levels.
pub fn check_scaling_invariance(
    r: &ResourceSpec,
    prices: &PriceSeries,
    k: f64,
    opts: &ExtractOptions,
) -> Result<PropertyReport> {
    if !(k > 0.0) {
        return Err(Error::invalid(format!("scaling factor {k} must be positive")));
    }
    let tol = 1e-6;
    let base = extract_curve(r, prices, opts)?;
    let scaled = extract_curve(r, &prices.scaled(k), opts)?;
    let mut rep = PropertyReport::new(format!("scaling k={k}")).tol("relative", tol);
    compare_curves(&mut rep, &base, &scaled, |b| k * b, tol);
    Ok(rep)
}

/// With the ending-SOC constraint the net traded energy is zero, so adding
/// `a` to every price shifts the curve right by exactly `a`.
pub fn check_additive_shift(
    r: &ResourceSpec,
    prices: &PriceSeries,
    a: f64,
    opts: &ExtractOptions,
) -> Result<PropertyReport> {
    match r {
        ResourceSpec::IdealBattery(p) if p.ending_soc => {}
        _ => {
            return Err(Error::invalid(
                "additive shift needs an ideal battery with the ending-SOC constraint",
            ))
        }
    }
    let tol = 1e-6;
    let base = extract_curve(r, prices, opts)?;
    let shifted = extract_curve(r, &prices.shifted(a), opts)?;
    let mut rep = PropertyReport::new(format!("additive shift a={a}")).tol("relative", tol);
    compare_curves(&mut rep, &base, &shifted, |b| b + a, tol);
    Ok(rep)
}

fn compare_curves(
    rep: &mut PropertyReport,
    base: &StaircaseCurve,
    moved: &StaircaseCurve,
    map: impl Fn(f64) -> f64,
    tol: f64,
) {
    if base.levels.len() != moved.levels.len() {
        rep.fail(
            None,
            format!("{} levels became {}: {:?} -> {:?}", base.levels.len(), moved.levels.len(), base.levels, moved.levels),
        );
        return;
    }
    for (x, y) in base.levels.iter().zip(&moved.levels) {
        if relative_gap(*x, *y) > tol {
            rep.fail(None, format!("level {x} became {y}"));
        }
    }
    for (x, y) in base.breakpoints.iter().zip(&moved.breakpoints) {
        let want = map(*x);
        if relative_gap(want, *y) > tol {
            rep.fail(Some(want), format!("breakpoint {x} expected at {want}, found {y}"));
        }
    }
}

/// Moves the initial energy by `delta` MWh and compares the two monotone
/// paths.
///
/// At every sampled price the vertical offset between the paths must be
/// finite. For small moves (`|delta| <= 0.1 * P * dt`) each interior stair
/// whose schedule keeps its `n_d - n_c` and terminal bound must move by
/// exactly `delta / dt`; stairs whose structure changes are logged.
pub fn check_vertical_shift(
    r: &ResourceSpec,
    prices: &PriceSeries,
    delta: f64,
    opts: &ExtractOptions,
) -> Result<PropertyReport> {
    let ResourceSpec::IdealBattery(p) = r else {
        return Err(Error::invalid("vertical shift is defined for ideal batteries"));
    };
    let moved_p = p.clone().with_initial_energy(p.e_init + delta);
    let name = format!("vertical shift delta={delta}");
    if moved_p.validate().is_err() {
        return Ok(PropertyReport::not_applicable(name, "shifted initial energy out of bounds"));
    }
    let moved_r = ResourceSpec::IdealBattery(moved_p);
    let dt = prices.delta_t;
    let old = classify_segments(&extract_curve(r, prices, opts)?, r, prices)?;
    let new = extract_curve(&moved_r, prices, opts)?;
    let tol = 1e-6;
    let mut rep = PropertyReport::new(name).tol("level", tol);

    let mut offsets = Vec::new();
    for c1 in old.representative_prices() {
        let beta = new.evaluate(c1).midpoint() - old.evaluate(c1).midpoint();
        if !beta.is_finite() {
            rep.fail(Some(c1), "no finite vertical offset");
        }
        offsets.push(beta);
    }
    rep.observe(format!("per-stair offsets {offsets:?}"));

    if delta.abs() > 0.1 * p.p_dis_max * dt {
        rep.observe("delta too large for the exact-offset check");
        return Ok(rep);
    }
    let reps = old.representative_prices();
    for (i, &c1) in reps.iter().enumerate() {
        let level = old.levels[i];
        if (level.abs() - p.p_dis_max).abs() <= old.meta.level_tol {
            continue;
        }
        let a = solve_schedule(r, prices, c1)?;
        let b = solve_schedule(&moved_r, prices, c1)?;
        let (Some(da), Some(db)) = (&a.diagnostics, &b.diagnostics) else {
            continue;
        };
        let same = da.n_d as i64 - da.n_c as i64 == db.n_d as i64 - db.n_c as i64 && da.terminal == db.terminal;
        let saturated = (b.power[0].abs() - p.p_dis_max).abs() <= old.meta.level_tol;
        if !same || saturated || da.terminal.is_none() {
            rep.observe(format!("stair {i} at c1={c1}: structure changed, offset {}", b.power[0] - a.power[0]));
            continue;
        }
        let got = b.power[0] - a.power[0];
        if (got - delta / dt).abs() > tol {
            rep.fail(Some(c1), format!("stair {i} moved by {got}, expected {}", delta / dt));
        }
    }
    Ok(rep)
}

/// Width of the zero-power stair for each efficiency, applied to both
/// directions of `base`.
pub fn null_stair_widths(
    base: &BatteryParams,
    prices: &PriceSeries,
    etas: &[f64],
    opts: &ExtractOptions,
) -> Result<Vec<f64>> {
    etas.iter()
        .map(|&eta| {
            let p = base.clone().with_efficiency(eta);
            let r = if p.is_ideal() {
                ResourceSpec::IdealBattery(p)
            } else {
                ResourceSpec::ImperfectBattery(p)
            };
            Ok(extract_curve(&r, prices, opts)?.zero_level_width())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{worked_prices, worked_resource};

    #[test]
    fn corrupted_curve_fails_with_witness() {
        let r = worked_resource();
        let prices = worked_prices();
        let mut c = extract_curve(&r, &prices, &ExtractOptions::default()).unwrap();
        c.levels.swap(1, 2);
        let rep = check_staircase(&c, &r, &prices, 10, 0);
        assert!(!rep.passed());
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn unit_scaling_is_identity() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0));
        let prices = PriceSeries::new(1.0, vec![10.0, 30.0]).unwrap();
        let rep = check_scaling_invariance(&r, &prices, 1.0, &ExtractOptions::default()).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn additive_shift_rejects_free_end() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0));
        let prices = PriceSeries::new(1.0, vec![10.0]).unwrap();
        assert!(check_additive_shift(&r, &prices, 1.0, &ExtractOptions::default()).is_err());
    }

    #[test]
    fn complementarity_skips_negative_prices() {
        let r = ResourceSpec::ImperfectBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0).with_efficiency(0.9));
        let prices = PriceSeries::new(1.0, vec![-10.0]).unwrap();
        let s = solve_schedule(&r, &prices, 5.0).unwrap();
        let rep = check_complementarity(&s, r.battery().unwrap());
        assert_eq!(rep.outcome, super::super::Outcome::NotApplicable);
    }
}
