use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gen::{self, Instance};
use super::{
    check_additive_shift, check_complementarity, check_scaling_invariance, check_segment_bounds, check_staircase,
    check_structure, check_vertical_shift, dp_oracle, PropertyReport,
};
use crate::curve::{classify_segments, extract_curve, ExtractOptions, StaircaseCurve};
use crate::error::{Error, Result};
use crate::lp::{solve, SolverOptions};
use crate::model::{build_lp, solve_schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Ideal,
    Imperfect,
    Negative,
    Shift,
    Oracle,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ideal" => Suite::Ideal,
            "imperfect" => Suite::Imperfect,
            "negative" => Suite::Negative,
            "shift" => Suite::Shift,
            "oracle" => Suite::Oracle,
            "all" => Suite::All,
            _ => return Err(Error::invalid(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub seed: u64,
    pub reports: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<&PropertyReport> {
        self.reports.iter().filter(|r| !r.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(PropertyReport::passed)
    }

    /// `(passed, failed)` counts per property family.
    pub fn summary(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for r in &self.reports {
            let family = r.property.split_whitespace().next().unwrap_or("").to_string();
            let e = out.entry(family).or_default();
            if r.passed() {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        out
    }
}

/// DP-vs-LP gaps below this count as agreement.
pub const ORACLE_GAP_FLOOR: f64 = 1e-6;

/// Runs `instances` seeded instances (seeds `seed..seed + instances`) of a
/// suite in parallel. Reports come back in seed order.
pub fn run_suite(suite: Suite, instances: usize, seed: u64, opts: &ExtractOptions) -> SuiteReport {
    let seeds: Vec<u64> = (seed..seed + instances as u64).collect();
    let per = |s: u64| -> Vec<PropertyReport> {
        match suite {
            Suite::Ideal => ideal(gen::ideal(s), s, opts),
            Suite::Imperfect => imperfect(gen::imperfect(s), s, opts),
            Suite::Negative => negative(gen::negative(s), s, opts),
            Suite::Shift => shift(s, opts),
            Suite::Oracle => oracle(s, (s - seed) as usize, opts),
            Suite::All => {
                let mut v = ideal(gen::ideal(s), s, opts);
                v.extend(imperfect(gen::imperfect(s), s, opts));
                v.extend(negative(gen::negative(s), s, opts));
                v.extend(shift(s, opts));
                v.extend(oracle(s, (s - seed) as usize, opts));
                v
            }
        }
    };
    let reports = seeds.par_iter().flat_map_iter(|&s| per(s)).collect();
    SuiteReport {
        suite,
        instances,
        seed,
        reports,
    }
}

fn pipeline_failure(inst: &Instance, e: Error) -> Vec<PropertyReport> {
    let mut r = PropertyReport::new("pipeline");
    r.fail(None, e.to_string());
    vec![r.for_instance(&inst.name)]
}

fn curve_of(inst: &Instance, opts: &ExtractOptions) -> Result<StaircaseCurve> {
    let c = extract_curve(&inst.resource, &inst.prices, opts)?;
    classify_segments(&c, &inst.resource, &inst.prices)
}

fn ideal(inst: Instance, seed: u64, opts: &ExtractOptions) -> Vec<PropertyReport> {
    let curve = match curve_of(&inst, opts) {
        Ok(c) => c,
        Err(e) => return pipeline_failure(&inst, e),
    };
    let p = inst.resource.battery().expect("battery").clone();
    let mut out = vec![
        check_staircase(&curve, &inst.resource, &inst.prices, 100, seed),
        check_segment_bounds(&curve, &inst.resource),
    ];
    let mut structure = PropertyReport::new("structure");
    for c1 in curve.representative_prices() {
        match solve_schedule(&inst.resource, &inst.prices, c1) {
            Ok(s) => {
                let r = check_structure(&s, &p);
                for w in r.witnesses {
                    structure.fail(Some(c1), w.detail);
                }
            }
            Err(e) => structure.fail(Some(c1), e.to_string()),
        }
    }
    out.push(structure);
    out.into_iter().map(|r| r.for_instance(&inst.name)).collect()
}

fn imperfect(inst: Instance, seed: u64, opts: &ExtractOptions) -> Vec<PropertyReport> {
    let curve = match curve_of(&inst, opts) {
        Ok(c) => c,
        Err(e) => return pipeline_failure(&inst, e),
    };
    let p = inst.resource.battery().expect("battery").clone();
    let mut out = vec![
        check_staircase(&curve, &inst.resource, &inst.prices, 100, seed),
        check_segment_bounds(&curve, &inst.resource),
    ];
    let mut comp = PropertyReport::new("complementarity").tol("comp_tol", p.comp_tol());
    let reps = curve.representative_prices();
    let spread = reps.iter().copied().chain([gen::first_price(&inst, seed)]);
    for c1 in spread {
        match solve_schedule(&inst.resource, &inst.prices, c1) {
            Ok(s) => {
                for w in check_complementarity(&s, &p).witnesses {
                    comp.fail(Some(c1), w.detail);
                }
            }
            Err(e) => comp.fail(Some(c1), e.to_string()),
        }
    }
    out.push(comp);
    out.into_iter().map(|r| r.for_instance(&inst.name)).collect()
}

fn negative(inst: Instance, seed: u64, opts: &ExtractOptions) -> Vec<PropertyReport> {
    let curve = match extract_curve(&inst.resource, &inst.prices, opts) {
        Ok(c) => c,
        Err(e) => return pipeline_failure(&inst, e),
    };
    vec![check_staircase(&curve, &inst.resource, &inst.prices, 100, seed).for_instance(&inst.name)]
}

fn shift(seed: u64, opts: &ExtractOptions) -> Vec<PropertyReport> {
    let inst = gen::ideal(seed);
    let mut out = Vec::new();
    let mut push = |res: Result<PropertyReport>, name: &str| match res {
        Ok(r) => out.push(r.for_instance(name)),
        Err(e) => out.extend(pipeline_failure(&inst, e)),
    };
    for k in [0.5, 2.0] {
        push(check_scaling_invariance(&inst.resource, &inst.prices, k, opts), &inst.name);
    }
    let lossy = gen::imperfect(seed);
    push(check_scaling_invariance(&lossy.resource, &lossy.prices, 0.5, opts), &lossy.name);

    let mut closed = inst.resource.clone();
    if let Some(p) = closed.battery_mut() {
        p.ending_soc = true;
    }
    for a in [-100.0, 7.0] {
        push(check_additive_shift(&closed, &inst.prices, a, opts), &inst.name);
    }
    for delta in [-0.1, 0.1] {
        push(check_vertical_shift(&inst.resource, &inst.prices, delta, opts), &inst.name);
    }
    out
}

fn lp_objective(inst: &Instance, c1: f64) -> Result<f64> {
    let lp = build_lp(&inst.resource, &inst.prices, c1)?;
    let sol = solve(&lp, &SolverOptions::default())?;
    if !sol.is_optimal() {
        return Err(Error::Solver {
            status: sol.status,
            context: "oracle reference".into(),
        });
    }
    Ok(sol.objective_value)
}

/// `DP - LP` at 201 and 401 grid points. The interpolated DP value is an
/// upper bound, so both are non-negative up to rounding.
pub fn oracle_gaps(inst: &Instance, c1: f64) -> Result<(f64, f64)> {
    let lp = lp_objective(inst, c1)?;
    let coarse = dp_oracle(&inst.resource, &inst.prices, c1, 201, 201)?;
    let fine = dp_oracle(&inst.resource, &inst.prices, c1, 401, 401)?;
    Ok((coarse.objective - lp, fine.objective - lp))
}

fn oracle(seed: u64, index: usize, _opts: &ExtractOptions) -> Vec<PropertyReport> {
    let inst = gen::oracle(seed, index);
    let c1 = gen::first_price(&inst, seed);
    let mut rep = PropertyReport::new("oracle")
        .tol("gap_floor", ORACLE_GAP_FLOOR)
        .tol("refinement_ratio", 0.5);
    match oracle_gaps(&inst, c1) {
        Ok((g1, g2)) => {
            rep.observe(format!("gap {g1:.3e} -> {g2:.3e}"));
            let (g1, g2) = (g1.abs(), g2.abs());
            if g2 > ORACLE_GAP_FLOOR && g2 > 0.5 * g1 {
                rep.fail(Some(c1), format!("gap {g1:.3e} at 201 points, {g2:.3e} at 401"));
            }
        }
        Err(e) => rep.fail(Some(c1), e.to_string()),
    }
    vec![rep.for_instance(&inst.name)]
}
