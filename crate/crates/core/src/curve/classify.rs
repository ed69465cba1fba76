use super::{SegmentKind, SegmentLabel, StairContext, StaircaseCurve};
use crate::error::Result;
use crate::lp::SolverOptions;
use crate::model::{solve_schedule_with, BatteryParams, PriceSeries, ResourceSpec, TerminalBound};

/// Labels every stair of `curve` with its place in the battery taxonomy.
///
/// Extreme levels are the full-power stairs and a zero level of a lossy
/// battery, AC or EV is the null stair. Other battery stairs are re-solved
/// at a representative price and matched against the energy balance up to
/// the first binding bound; a stair that matches no formula stays
/// `Unclassified` with its observed context attached.
pub fn classify_segments(curve: &StaircaseCurve, r: &ResourceSpec, prices: &PriceSeries) -> Result<StaircaseCurve> {
    let tol = curve.meta.level_tol;
    let reps = curve.representative_prices();
    let max_dis = r.max_discharge_mw();
    let max_chg = r.max_charge_mw();
    let mut labels = Vec::with_capacity(curve.levels.len());
    for (&level, &c1) in curve.levels.iter().zip(&reps) {
        let kind = if (level + max_chg).abs() <= tol {
            Some(SegmentKind::FullyCharge)
        } else if max_dis > 0.0 && (level - max_dis).abs() <= tol {
            Some(SegmentKind::FullyDischarge)
        } else if level.abs() <= tol && !r.is_ideal_battery() && !matches!(r, ResourceSpec::Cluster { .. }) {
            Some(SegmentKind::Null)
        } else {
            None
        };
        let label = match (kind, r.battery()) {
            (Some(k), _) => SegmentLabel::of(k),
            (_, Some(p)) => interior_label(p, r, prices, c1, level, tol)?,
            _ => SegmentLabel::unclassified(),
        };
        labels.push(label);
    }
    Ok(StaircaseCurve {
        labels,
        ..curve.clone()
    })
}

fn interior_label(
    p: &BatteryParams,
    r: &ResourceSpec,
    prices: &PriceSeries,
    c1: f64,
    level: f64,
    tol: f64,
) -> Result<SegmentLabel> {
    let dt = prices.delta_t;
    let sched = solve_schedule_with(r, prices, c1, &SolverOptions::default())?;
    let Some(d) = sched.diagnostics else {
        return Ok(SegmentLabel::unclassified());
    };
    let context = StairContext {
        t_b: d.t_b,
        delta_n: d.n_d as i64 - d.n_c as i64,
        terminal: d.terminal,
        n_c_hours: (p.e_max - p.e_init) / (p.p_chg_max * dt),
        n_d_hours: (p.e_init - p.e_min) / (p.p_dis_max * dt),
    };
    let unclassified = |context| SegmentLabel {
        kind: SegmentKind::Unclassified,
        context: Some(context),
    };
    let (Some(t_b), Some(terminal)) = (d.t_b, d.terminal) else {
        return Ok(unclassified(context));
    };
    if p.dissipation != 0.0 || terminal == TerminalBound::EndingSoc {
        return Ok(unclassified(context));
    }

    let moved = (p.e_init - sched.energy[t_b]) / dt;
    let (n_c, n_d) = (d.n_c as f64, d.n_d as f64);
    let predicted = if level > 0.0 {
        p.eta_dis * moved - n_d * p.p_dis_max + n_c * p.p_chg_max * p.eta_chg * p.eta_dis
    } else {
        moved / p.eta_chg - n_d * p.p_dis_max / (p.eta_dis * p.eta_chg) + n_c * p.p_chg_max
    };
    if (predicted - level).abs() > tol || (sched.power[0] - level).abs() > tol {
        return Ok(unclassified(context));
    }
    let kind = match terminal {
        TerminalBound::Upper if level <= tol => SegmentKind::ChargeForCharge,
        TerminalBound::Upper => SegmentKind::DischargeForCharge,
        TerminalBound::Lower if level >= -tol => SegmentKind::DischargeForDischarge,
        _ => SegmentKind::ChargeForDischarge,
    };
    Ok(SegmentLabel {
        kind,
        context: Some(context),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{extract_curve, ExtractOptions};

    #[test]
    fn two_period_zero_level_is_discharge_for_discharge() {
        let r = ResourceSpec::IdealBattery(BatteryParams::ideal(0.0, 2.0, 1.0, 1.0));
        let prices = PriceSeries::new(1.0, vec![10.0]).unwrap();
        let c = extract_curve(&r, &prices, &ExtractOptions::default()).unwrap();
        let c = classify_segments(&c, &r, &prices).unwrap();
        assert_eq!(
            c.kinds(),
            vec![SegmentKind::FullyCharge, SegmentKind::DischargeForDischarge, SegmentKind::FullyDischarge]
        );
        let ctx = c.labels[1].context.as_ref().unwrap();
        assert_eq!(ctx.delta_n, 1);
        assert_eq!(ctx.terminal, Some(TerminalBound::Lower));
    }
}
