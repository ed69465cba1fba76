//! Staircase bid curves `P1 = f(c1)`: extraction, stair classification,
//! aggregation and evaluation.

mod classify;
mod extract;

pub use classify::classify_segments;
pub use extract::{extract_curve, ExtractOptions};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TerminalBound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentKind {
    FullyCharge,
    ChargeForCharge,
    ChargeForDischarge,
    DischargeForCharge,
    DischargeForDischarge,
    FullyDischarge,
    Null,
    Unclassified,
}

impl SegmentKind {
    pub const ALL: [SegmentKind; 8] = [
        SegmentKind::FullyCharge,
        SegmentKind::ChargeForCharge,
        SegmentKind::ChargeForDischarge,
        SegmentKind::DischargeForCharge,
        SegmentKind::DischargeForDischarge,
        SegmentKind::FullyDischarge,
        SegmentKind::Null,
        SegmentKind::Unclassified,
    ];

    /// Position along increasing price. `ChargeForDischarge` and
    /// `DischargeForCharge` share a slot in the ideal case (they never
    /// co-occur); the null stair sits at zero between them.
    pub fn order(self) -> Option<u8> {
        match self {
            SegmentKind::FullyCharge => Some(0),
            SegmentKind::ChargeForCharge => Some(1),
            SegmentKind::ChargeForDischarge => Some(2),
            SegmentKind::Null => Some(3),
            SegmentKind::DischargeForCharge => Some(4),
            SegmentKind::DischargeForDischarge => Some(5),
            SegmentKind::FullyDischarge => Some(6),
            SegmentKind::Unclassified => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::FullyCharge => "FullyCharge",
            SegmentKind::ChargeForCharge => "ChargeForCharge",
            SegmentKind::ChargeForDischarge => "ChargeForDischarge",
            SegmentKind::DischargeForCharge => "DischargeForCharge",
            SegmentKind::DischargeForDischarge => "DischargeForDischarge",
            SegmentKind::FullyDischarge => "FullyDischarge",
            SegmentKind::Null => "Null",
            SegmentKind::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SegmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SegmentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown segment label {s:?}")))
    }
}

/// Schedule structure observed at a stair's midpoint price.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StairContext {
    pub t_b: Option<usize>,
    /// `n_d - n_c` up to `t_b`.
    pub delta_n: i64,
    pub terminal: Option<TerminalBound>,
    /// Hours of full-power charging that fill the battery from `E1`.
    pub n_c_hours: f64,
    /// Hours of full-power discharging that empty it from `E1`.
    pub n_d_hours: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentLabel {
    pub kind: SegmentKind,
    pub context: Option<StairContext>,
}

impl SegmentLabel {
    pub fn unclassified() -> Self {
        SegmentLabel {
            kind: SegmentKind::Unclassified,
            context: None,
        }
    }

    pub fn of(kind: SegmentKind) -> Self {
        SegmentLabel { kind, context: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub resource_id: String,
    pub currency: String,
    pub delta_t: f64,
    pub sweep_lo: f64,
    pub sweep_hi: f64,
    pub price_tol: f64,
    pub level_tol: f64,
    /// The lowest level is the resource's extreme feasible consumption.
    pub saturated_low: bool,
    /// The highest level is the resource's extreme feasible output.
    pub saturated_high: bool,
}

/// A non-decreasing step function of the first-period price.
///
/// `levels[i]` applies on the open interval `(breakpoints[i-1],
/// breakpoints[i])`, with the outer intervals unbounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseCurve {
    pub breakpoints: Vec<f64>,
    pub levels: Vec<f64>,
    pub labels: Vec<SegmentLabel>,
    pub meta: CurveMeta,
}

/// Value of a curve at a price: a single level inside a stair, the closed
/// range between adjacent levels at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation {
    Level(f64),
    Range { low: f64, high: f64 },
}

impl Evaluation {
    pub fn contains(&self, p: f64, tol: f64) -> bool {
        match *self {
            Evaluation::Level(l) => (p - l).abs() <= tol,
            Evaluation::Range { low, high } => p >= low - tol && p <= high + tol,
        }
    }

    pub fn midpoint(&self) -> f64 {
        match *self {
            Evaluation::Level(l) => l,
            Evaluation::Range { low, high } => 0.5 * (low + high),
        }
    }
}

impl StaircaseCurve {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn kinds(&self) -> Vec<SegmentKind> {
        self.labels.iter().map(|l| l.kind).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::invalid("curve has no levels"));
        }
        if self.levels.len() != self.breakpoints.len() + 1 {
            return Err(Error::Dimension(format!(
                "{} levels for {} breakpoints",
                self.levels.len(),
                self.breakpoints.len()
            )));
        }
        if self.labels.len() != self.levels.len() {
            return Err(Error::Dimension(format!(
                "{} labels for {} levels",
                self.labels.len(),
                self.levels.len()
            )));
        }
        if self.breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("breakpoints not strictly increasing"));
        }
        if self.levels.windows(2).any(|w| w[1] - w[0] <= self.meta.level_tol) {
            return Err(Error::invalid("levels not increasing by more than level_tol"));
        }
        if self.levels.iter().chain(&self.breakpoints).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite curve value"));
        }
        Ok(())
    }

    pub fn evaluate(&self, c1: f64) -> Evaluation {
        evaluate(self, c1)
    }

    /// A price inside each stair, away from its breakpoints.
    pub fn representative_prices(&self) -> Vec<f64> {
        let b = &self.breakpoints;
        if b.is_empty() {
            return vec![0.5 * (self.meta.sweep_lo + self.meta.sweep_hi)];
        }
        let w = (b[b.len() - 1] - b[0]).max(1.0);
        let mut out = Vec::with_capacity(b.len() + 1);
        out.push(b[0] - w);
        out.extend(b.windows(2).map(|p| 0.5 * (p[0] + p[1])));
        out.push(b[b.len() - 1] + w);
        out
    }

    /// Price width of the stair at level zero; infinite for an outer stair,
    /// zero when no stair sits at zero.
    pub fn zero_level_width(&self) -> f64 {
        let tol = self.meta.level_tol;
        match self.levels.iter().position(|l| l.abs() <= tol) {
            None => 0.0,
            Some(i) if i == 0 || i == self.levels.len() - 1 => f64::INFINITY,
            Some(i) => self.breakpoints[i] - self.breakpoints[i - 1],
        }
    }

    /// Horizontal segments `(price_lo, price_hi, level)`, with infinite
    /// outer ends.
    pub fn stairs(&self) -> Vec<(f64, f64, f64)> {
        let n = self.levels.len();
        (0..n)
            .map(|i| {
                let lo = if i == 0 { f64::NEG_INFINITY } else { self.breakpoints[i - 1] };
                let hi = if i == n - 1 { f64::INFINITY } else { self.breakpoints[i] };
                (lo, hi, self.levels[i])
            })
            .collect()
    }
}

pub fn evaluate(curve: &StaircaseCurve, c1: f64) -> Evaluation {
    let tol = curve.meta.price_tol;
    let b = &curve.breakpoints;
    let idx = b.partition_point(|&x| x < c1);
    for i in [idx.wrapping_sub(1), idx] {
        if i < b.len() && (c1 - b[i]).abs() <= tol {
            return Evaluation::Range {
                low: curve.levels[i],
                high: curve.levels[i + 1],
            };
        }
    }
    Evaluation::Level(curve.levels[idx])
}

/// Sums the curves of independent resources sharing one price axis.
pub fn aggregate(curves: &[StaircaseCurve]) -> Result<StaircaseCurve> {
    let first = curves.first().ok_or_else(|| Error::invalid("no curves to aggregate"))?;
    for c in curves {
        if c.meta.currency != first.meta.currency || (c.meta.delta_t - first.meta.delta_t).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "curve {} does not share the price axis of {}",
                c.meta.resource_id, first.meta.resource_id
            )));
        }
    }
    let price_tol = curves.iter().map(|c| c.meta.price_tol).fold(0.0, f64::max);
    let level_tol = curves.iter().map(|c| c.meta.level_tol).sum::<f64>();

    let mut all: Vec<f64> = curves.iter().flat_map(|c| c.breakpoints.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for b in all {
        match groups.last_mut() {
            Some(g) if b - g[g.len() - 1] <= price_tol => g.push(b),
            _ => groups.push(vec![b]),
        }
    }
    let cuts: Vec<f64> = groups.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect();

    let level_at = |c: f64| curves.iter().map(|cv| evaluate(cv, c).midpoint()).sum::<f64>();
    let mut reps = Vec::with_capacity(groups.len() + 1);
    if groups.is_empty() {
        reps.push(0.5 * (first.meta.sweep_lo + first.meta.sweep_hi));
    } else {
        reps.push(groups[0][0] - 1.0 - 2.0 * price_tol);
        for w in groups.windows(2) {
            reps.push(0.5 * (w[0][w[0].len() - 1] + w[1][0]));
        }
        let last = &groups[groups.len() - 1];
        reps.push(last[last.len() - 1] + 1.0 + 2.0 * price_tol);
    }

    let mut breakpoints = Vec::new();
    let mut levels = vec![level_at(reps[0])];
    for (cut, rep) in cuts.iter().zip(&reps[1..]) {
        let l = level_at(*rep);
        if l - levels[levels.len() - 1] > level_tol {
            breakpoints.push(*cut);
            levels.push(l);
        }
    }
    let ids: Vec<&str> = curves.iter().map(|c| c.meta.resource_id.as_str()).collect();
    Ok(StaircaseCurve {
        labels: vec![SegmentLabel::unclassified(); levels.len()],
        breakpoints,
        levels,
        meta: CurveMeta {
            resource_id: format!("sum({})", ids.join(",")),
            currency: first.meta.currency.clone(),
            delta_t: first.meta.delta_t,
            sweep_lo: curves.iter().map(|c| c.meta.sweep_lo).fold(f64::INFINITY, f64::min),
            sweep_hi: curves.iter().map(|c| c.meta.sweep_hi).fold(f64::NEG_INFINITY, f64::max),
            price_tol,
            level_tol,
            saturated_low: curves.iter().all(|c| c.meta.saturated_low),
            saturated_high: curves.iter().all(|c| c.meta.saturated_high),
        },
    })
}

#[cfg(test)]
pub(crate) fn test_curve(breakpoints: Vec<f64>, levels: Vec<f64>) -> StaircaseCurve {
    StaircaseCurve {
        labels: vec![SegmentLabel::unclassified(); levels.len()],
        breakpoints,
        levels,
        meta: CurveMeta {
            resource_id: "test".into(),
            currency: "USD".into(),
            delta_t: 1.0,
            sweep_lo: -10.0,
            sweep_hi: 30.0,
            price_tol: 1e-6,
            level_tol: 1e-6,
            saturated_low: true,
            saturated_high: true,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_inside_and_at_breakpoints() {
        let c = test_curve(vec![0.0, 10.0], vec![-1.0, 0.0, 1.0]);
        assert_eq!(c.evaluate(-3.0), Evaluation::Level(-1.0));
        assert_eq!(c.evaluate(5.0), Evaluation::Level(0.0));
        assert_eq!(c.evaluate(11.0), Evaluation::Level(1.0));
        assert_eq!(c.evaluate(10.0), Evaluation::Range { low: 0.0, high: 1.0 });
        assert_eq!(c.evaluate(1e-7), Evaluation::Range { low: -1.0, high: 0.0 });
    }

    #[test]
    fn aggregate_single_is_identity() {
        let c = test_curve(vec![0.0, 10.0], vec![-1.0, 0.0, 1.0]);
        let s = aggregate(std::slice::from_ref(&c)).unwrap();
        assert_eq!(s.breakpoints, c.breakpoints);
        assert_eq!(s.levels, c.levels);
    }

    #[test]
    fn aggregate_merges_breakpoints() {
        let a = test_curve(vec![0.0, 10.0], vec![-1.0, 0.0, 1.0]);
        let b = test_curve(vec![5.0, 10.0], vec![-2.0, 0.0, 2.0]);
        let s = aggregate(&[a, b]).unwrap();
        assert_eq!(s.breakpoints, vec![0.0, 5.0, 10.0]);
        assert_eq!(s.levels, vec![-3.0, -2.0, 0.0, 3.0]);
        s.validate().unwrap();
    }

    #[test]
    fn aggregate_rejects_empty_and_mixed_axes() {
        assert!(aggregate(&[]).is_err());
        let a = test_curve(vec![], vec![0.0]);
        let mut b = a.clone();
        b.meta.delta_t = 0.5;
        assert!(aggregate(&[a, b]).is_err());
    }

    #[test]
    fn validate_catches_swapped_levels() {
        let c = test_curve(vec![0.0], vec![1.0, -1.0]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_level_width() {
        assert_eq!(test_curve(vec![0.0, 10.0], vec![-1.0, 0.0, 1.0]).zero_level_width(), 10.0);
        assert_eq!(test_curve(vec![0.0], vec![-1.0, 1.0]).zero_level_width(), 0.0);
        assert!(test_curve(vec![0.0], vec![0.0, 1.0]).zero_level_width().is_infinite());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in SegmentKind::ALL {
            assert_eq!(k.as_str().parse::<SegmentKind>().unwrap(), k);
        }
    }
}
