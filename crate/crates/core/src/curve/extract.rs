use rayon::prelude::*;

use super::{CurveMeta, SegmentLabel, StaircaseCurve};
use crate::error::{Error, Result};
use crate::lp::{Basis, SolverOptions};
use crate::model::{ModelLp, PriceSeries, ResourceSpec};

#[derive(Clone, Debug)]
pub struct ExtractOptions {
    /// Uniform samples across the saturated sweep range.
    pub init_samples: usize,
    /// Bracket width at which bisection stops; defaults to
    /// `1e-6 * (1 + max |sweep end|)`.
    pub price_tol: Option<f64>,
    /// Levels closer than this are one stair; defaults to the resource's
    /// [`ResourceSpec::level_tol`].
    pub level_tol: Option<f64>,
    pub max_doublings: usize,
    pub solver: SolverOptions,
    pub parallel: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            init_samples: 64,
            price_tol: None,
            level_tol: None,
            max_doublings: 60,
            solver: SolverOptions::default(),
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
struct Probe {
    c: f64,
    level: f64,
    value: f64,
    basis: Option<Basis>,
}

struct Prober<'a> {
    model: &'a ModelLp,
    solver: &'a SolverOptions,
}

impl Prober<'_> {
    fn probe(&self, c: f64, warm: Option<&Basis>) -> Result<Probe> {
        let mut m = self.model.clone();
        m.set_first_price(c);
        let mut opts = self.solver.clone();
        opts.warm_start = warm.cloned();
        let sol = m.solve(&opts)?;
        Ok(Probe {
            c,
            level: m.first_net(&sol.primal),
            value: sol.objective_value,
            basis: sol.basis,
        })
    }

    /// The first-period price where the objective lines of two adjacent
    /// stairs cross. Exact when the bracket holds a single breakpoint.
    fn crossing(&self, a: &Probe, b: &Probe) -> f64 {
        let dt = self.model.delta_t;
        let c = (b.value - a.value + dt * (b.level * b.c - a.level * a.c)) / (dt * (b.level - a.level));
        if c.is_finite() {
            c.clamp(a.c, b.c)
        } else {
            0.5 * (a.c + b.c)
        }
    }
}

struct Search<'a> {
    prober: Prober<'a>,
    level_tol: f64,
    price_tol: f64,
}

/// A detected jump: breakpoint price and the levels on either side.
type Jump = (f64, f64, f64);

impl Search<'_> {
    fn check_order(&self, a: &Probe, b: &Probe) -> Result<()> {
        if a.level > b.level + 10.0 * self.level_tol {
            return Err(Error::NonMonotone {
                c_lo: a.c,
                c_hi: b.c,
                p_lo: a.level,
                p_hi: b.level,
            });
        }
        Ok(())
    }

    fn refine(&self, a: &Probe, b: &Probe, out: &mut Vec<Jump>) -> Result<()> {
        if b.level - a.level <= self.level_tol {
            return Ok(());
        }
        if b.c - a.c <= self.price_tol {
            out.push((self.prober.crossing(a, b), a.level, b.level));
            return Ok(());
        }
        let m = self.prober.probe(0.5 * (a.c + b.c), a.basis.as_ref())?;
        self.check_order(a, &m)?;
        self.check_order(&m, b)?;
        self.refine(a, &m, out)?;
        self.refine(&m, b, out)
    }
}

/// Extracts the bid curve of `r` by sweeping the first-period price.
///
/// The sweep range grows geometrically until both ends reach the extreme
/// feasible first-period powers, a uniform grid is sampled, and every jump
/// between neighbouring samples is bisected down to `price_tol`. Converged
/// brackets are snapped to the crossing of the two stairs' objective lines.
/// Stairs no wider than `price_tol` are below resolution and dropped.
/// Labels are left `Unclassified`; see [`classify_segments`](super::classify_segments).
pub fn extract_curve(r: &ResourceSpec, prices: &PriceSeries, opts: &ExtractOptions) -> Result<StaircaseCurve> {
    let level_tol = opts.level_tol.unwrap_or_else(|| r.level_tol());
    if !(level_tol > 0.0) || opts.price_tol.is_some_and(|t| !(t > 0.0)) {
        return Err(Error::invalid("tolerances must be positive"));
    }
    let model = ModelLp::new(r, prices, 0.0, true)?;
    let prober = Prober {
        model: &model,
        solver: &opts.solver,
    };
    let (p_min, p_max) = model.first_net_range(&opts.solver)?;

    let (f_lo, f_hi) = prices.future_range().unwrap_or((0.0, 0.0));
    let s0 = (f_hi - f_lo).max(1.0);
    let saturate = |end: &'static str, target: f64, at: &dyn Fn(f64) -> f64| -> Result<Probe> {
        let mut s = s0;
        for _ in 0..=opts.max_doublings {
            let p = prober.probe(at(s), None)?;
            if (p.level - target).abs() <= level_tol {
                return Ok(p);
            }
            s *= 2.0;
        }
        Err(Error::NotSaturated {
            end,
            doublings: opts.max_doublings,
        })
    };
    let lo = saturate("low", p_min, &|s| f_lo - s)?;
    let hi = saturate("high", p_max, &|s| f_hi + s)?;
    let price_tol = opts
        .price_tol
        .unwrap_or_else(|| 1e-6 * (1.0 + lo.c.abs().max(hi.c.abs())));

    let n = opts.init_samples.max(2);
    let cs: Vec<f64> = (1..n - 1)
        .map(|i| lo.c + (hi.c - lo.c) * i as f64 / (n - 1) as f64)
        .collect();
    let inner: Vec<Probe> = if opts.parallel {
        cs.par_iter().map(|&c| prober.probe(c, None)).collect::<Result<_>>()?
    } else {
        cs.iter().map(|&c| prober.probe(c, None)).collect::<Result<_>>()?
    };
    let mut grid = Vec::with_capacity(n);
    grid.push(lo);
    grid.extend(inner);
    grid.push(hi);

    let search = Search {
        prober,
        level_tol,
        price_tol,
    };
    for w in grid.windows(2) {
        search.check_order(&w[0], &w[1])?;
    }
    let pairs: Vec<(&Probe, &Probe)> = grid
        .windows(2)
        .filter(|w| w[1].level - w[0].level > level_tol)
        .map(|w| (&w[0], &w[1]))
        .collect();
    let run = |(a, b): &(&Probe, &Probe)| -> Result<Vec<Jump>> {
        let mut out = Vec::new();
        search.refine(a, b, &mut out)?;
        Ok(out)
    };
    let jumps: Vec<Vec<Jump>> = if opts.parallel {
        pairs.par_iter().map(run).collect::<Result<_>>()?
    } else {
        pairs.iter().map(run).collect::<Result<_>>()?
    };

    let mut breakpoints = Vec::new();
    let mut levels = vec![grid[0].level];
    for (b, _, right) in jumps.into_iter().flatten() {
        breakpoints.push(b);
        levels.push(right);
    }
    let (breakpoints, levels) = tidy(breakpoints, levels, price_tol, level_tol);

    Ok(StaircaseCurve {
        labels: vec![SegmentLabel::unclassified(); levels.len()],
        breakpoints,
        levels,
        meta: CurveMeta {
            resource_id: r.kind_name().to_string(),
            currency: prices.currency.clone(),
            delta_t: prices.delta_t,
            sweep_lo: grid[0].c,
            sweep_hi: grid[grid.len() - 1].c,
            price_tol,
            level_tol,
            saturated_low: true,
            saturated_high: true,
        },
    })
}

/// Drops interior stairs no wider than `price_tol` and merges neighbours
/// closer than `level_tol`.
fn tidy(mut b: Vec<f64>, mut l: Vec<f64>, price_tol: f64, level_tol: f64) -> (Vec<f64>, Vec<f64>) {
    let mut i = 1;
    while i + 1 < l.len() {
        if b[i] - b[i - 1] <= price_tol {
            let mid = 0.5 * (b[i - 1] + b[i]);
            l.remove(i);
            b.remove(i);
            b[i - 1] = mid;
        } else {
            i += 1;
        }
    }
    let mut out_b = Vec::with_capacity(b.len());
    let mut out_l = vec![l[0]];
    for (bp, lv) in b.into_iter().zip(l.into_iter().skip(1)) {
        if lv - out_l[out_l.len() - 1] > level_tol {
            out_b.push(bp);
            out_l.push(lv);
        }
    }
    (out_b, out_l)
}
