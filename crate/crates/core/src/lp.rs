//! Dense linear programs and a two-phase bounded-variable primal simplex.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c'x
//! subject to  A x = b
//!             l <= x <= u          (entries of l, u may be infinite)
//! ```
//!
//! The resource models in this crate produce programs with at most a few
//! hundred columns, so the solver keeps the full tableau `B^-1 [A | S]`
//! (with `S` the signed identity of the phase-1 artificials) in a flat
//! row-major buffer. Pricing is Dantzig's rule; after a long run of
//! degenerate pivots the solver falls back to Bland's rule until progress
//! resumes. Every tie is broken toward the lowest variable index so a fixed
//! input always follows the same pivot path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-12;
const REFRESH_EVERY: usize = 64;
const NONE: usize = usize::MAX;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// Row-major equality matrix; every row has `objective.len()` entries.
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub var_labels: Vec<String>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a column and returns its index.
    pub fn add_var(&mut self, label: impl Into<String>, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.var_labels.push(label.into());
        for row in &mut self.eq_matrix {
            row.push(0.0);
        }
        self.objective.len() - 1
    }

    /// Appends the equality row `sum(coef * x[var]) = rhs`. Repeated
    /// indices accumulate.
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], rhs: f64) -> usize {
        let mut row = vec![0.0; self.num_vars()];
        for &(j, a) in coeffs {
            row[j] += a;
        }
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
        self.eq_rhs.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn var_index(&self, label: &str) -> Option<usize> {
        self.var_labels.iter().position(|l| l == label)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of the equality rows and bounds at `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, b) in self.eq_matrix.iter().zip(&self.eq_rhs) {
            let ax: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            worst = worst.max((ax - b).abs());
        }
        for ((v, l), u) in x.iter().zip(&self.lower).zip(&self.upper) {
            worst = worst.max(l - v).max(v - u);
        }
        worst
    }

    /// Checks the structural invariants the solver relies on.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{} costs but {} lower / {} upper bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if !self.var_labels.is_empty() && self.var_labels.len() != n {
            return Err(Error::Dimension(format!(
                "{} columns but {} labels",
                n,
                self.var_labels.len()
            )));
        }
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(Error::Dimension(format!(
                "{} matrix rows but {} right-hand sides",
                self.eq_matrix.len(),
                self.eq_rhs.len()
            )));
        }
        for (i, row) in self.eq_matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|a| !a.is_finite()) {
                return Err(Error::invalid(format!("row {i} has a non-finite coefficient")));
            }
        }
        if self.objective.iter().chain(&self.eq_rhs).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite cost or right-hand side"));
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::invalid(format!("bad bounds [{l}, {u}] on column {j}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Final basis of a solve, reusable as a warm start.
///
/// `basic[i]` is the variable basic in row `i`; indices `>= n` denote the
/// artificial of row `i - n`. `at_upper[j]` records structural variables
/// resting at their upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub basic: Vec<usize>,
    pub at_upper: Vec<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    /// Pivot cap; defaults to `50 * (rows + cols)`.
    pub max_iters: Option<usize>,
    /// Defaults to `1e-9 * (1 + ||b||_inf)`.
    pub feas_tol: Option<f64>,
    /// Defaults to `1e-9 * (1 + ||c||_inf)`.
    pub opt_tol: Option<f64>,
    pub warm_start: Option<Basis>,
}

impl SolverOptions {
    pub fn feas_tol_for(&self, lp: &LinearProgram) -> f64 {
        self.feas_tol
            .unwrap_or_else(|| 1e-9 * (1.0 + inf_norm(&lp.eq_rhs)))
    }

    pub fn opt_tol_for(&self, lp: &LinearProgram) -> f64 {
        self.opt_tol
            .unwrap_or_else(|| 1e-9 * (1.0 + inf_norm(&lp.objective)))
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// Multipliers `y` of the equality rows, with `reduced_costs = c - A'y`.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// Phase-1 optimum; positive beyond `feas_tol` certifies infeasibility.
    pub infeasibility: f64,
    /// Improving direction when `status == Unbounded`.
    pub ray: Option<Vec<f64>>,
    pub basis: Option<Basis>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Dual objective `b'y + sum(bound_j * d_j)`, attributing each reduced
    /// cost to the bound its sign points at.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let mut z: f64 = lp.eq_rhs.iter().zip(&self.duals).map(|(b, y)| b * y).sum();
        for (j, &d) in self.reduced_costs.iter().enumerate() {
            if d > 0.0 && lp.lower[j].is_finite() {
                z += d * lp.lower[j];
            } else if d < 0.0 && lp.upper[j].is_finite() {
                z += d * lp.upper[j];
            } else {
                z += d * self.primal[j];
            }
        }
        z
    }
}

pub fn solve(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution> {
    lp.validate()?;
    let mut s = Simplex::new(lp, opts);
    Ok(s.run(opts.warm_start.as_ref()))
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

enum Step {
    Optimal,
    Unbounded { entering: usize, dir: f64 },
    IterationLimit,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    m: usize,
    n: usize,
    cols: usize,
    tab: Vec<f64>,
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    basic: Vec<usize>,
    row_of: Vec<usize>,
    sign: Vec<f64>,
    cost: Vec<f64>,
    d: Vec<f64>,
    iters: usize,
    max_iters: usize,
    feas_tol: f64,
    opt_tol: f64,
    degenerate_run: usize,
    bland: bool,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, opts: &SolverOptions) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let cols = n + m;
        let mut lo = lp.lower.clone();
        let mut hi = lp.upper.clone();
        lo.extend(std::iter::repeat_n(0.0, m));
        hi.extend(std::iter::repeat_n(f64::INFINITY, m));
        Simplex {
            lp,
            m,
            n,
            cols,
            tab: vec![0.0; m * cols],
            x: vec![0.0; cols],
            lo,
            hi,
            basic: vec![NONE; m],
            row_of: vec![NONE; cols],
            sign: vec![1.0; m],
            cost: vec![0.0; cols],
            d: vec![0.0; cols],
            iters: 0,
            max_iters: opts.max_iters.unwrap_or(50 * (m + n).max(1)),
            feas_tol: opts.feas_tol_for(lp),
            opt_tol: opts.opt_tol_for(lp),
            degenerate_run: 0,
            bland: false,
        }
    }

    /// Places every structural variable at a bound (or zero when free) and
    /// makes the artificials basic, absorbing the residual `b - A x_N`.
    fn cold_start(&mut self, at_upper: Option<&[bool]>) {
        let (m, n, cols) = (self.m, self.n, self.cols);
        for j in 0..n {
            let want_upper = at_upper.is_some_and(|u| u[j]);
            self.x[j] = if want_upper && self.hi[j].is_finite() {
                self.hi[j]
            } else if self.lo[j].is_finite() {
                self.lo[j]
            } else if self.hi[j].is_finite() {
                self.hi[j]
            } else {
                0.0
            };
            self.row_of[j] = NONE;
        }
        self.tab.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            let row = &self.lp.eq_matrix[i];
            let r = self.lp.eq_rhs[i] - row.iter().zip(&self.x[..n]).map(|(a, v)| a * v).sum::<f64>();
            let s = if r >= 0.0 { 1.0 } else { -1.0 };
            self.sign[i] = s;
            let base = i * cols;
            for j in 0..n {
                self.tab[base + j] = s * row[j];
            }
            self.tab[base + n + i] = 1.0;
            self.x[n + i] = r.abs();
            self.basic[i] = n + i;
            self.row_of[n + i] = i;
            self.lo[n + i] = 0.0;
            self.hi[n + i] = f64::INFINITY;
        }
    }

    fn run(&mut self, warm: Option<&Basis>) -> LpSolution {
        let warmed = warm.is_some_and(|b| self.try_warm_start(b));
        if !warmed {
            self.cold_start(None);
            self.set_phase_costs(true);
            match self.iterate() {
                Step::Optimal => {}
                Step::IterationLimit => return self.finish(LpStatus::IterationLimit, None),
                // Phase 1 is bounded below by zero.
                Step::Unbounded { .. } => return self.finish(LpStatus::IterationLimit, None),
            }
            self.refresh_primal();
            let infeas: f64 = (self.n..self.cols).map(|k| self.x[k].max(0.0)).sum();
            if infeas > self.feas_tol {
                let mut sol = self.finish(LpStatus::Infeasible, None);
                sol.infeasibility = infeas;
                return sol;
            }
            self.enter_phase_two();
        }
        self.set_phase_costs(false);
        match self.iterate() {
            Step::Optimal => self.finish(LpStatus::Optimal, None),
            Step::IterationLimit => self.finish(LpStatus::IterationLimit, None),
            Step::Unbounded { entering, dir } => {
                let mut ray = vec![0.0; self.n];
                ray[entering] = dir;
                for i in 0..self.m {
                    let b = self.basic[i];
                    if b < self.n {
                        ray[b] = -dir * self.tab[i * self.cols + entering];
                    }
                }
                self.finish(LpStatus::Unbounded, Some(ray))
            }
        }
    }

    fn try_warm_start(&mut self, warm: &Basis) -> bool {
        if warm.at_upper.len() != self.n || warm.basic.len() != self.m {
            return false;
        }
        self.cold_start(Some(&warm.at_upper));
        let cols = self.cols;
        for &k in &warm.basic {
            if k >= self.n || self.row_of[k] != NONE {
                continue;
            }
            let mut best = NONE;
            let mut best_abs = PIVOT_TOL;
            for i in 0..self.m {
                if self.basic[i] >= self.n {
                    let a = self.tab[i * cols + k].abs();
                    if a > best_abs {
                        best_abs = a;
                        best = i;
                    }
                }
            }
            if best != NONE {
                self.pivot(best, k);
            }
        }
        self.refresh_primal();
        for i in 0..self.m {
            let b = self.basic[i];
            let v = self.x[b];
            let (l, u) = if b >= self.n { (0.0, 0.0) } else { (self.lo[b], self.hi[b]) };
            if v < l - self.feas_tol || v > u + self.feas_tol {
                return false;
            }
        }
        self.enter_phase_two();
        true
    }

    fn enter_phase_two(&mut self) {
        let (n, cols) = (self.n, self.cols);
        for k in n..cols {
            self.hi[k] = 0.0;
            if self.row_of[k] == NONE {
                self.x[k] = 0.0;
            }
        }
        // Drive zero-valued artificials out of the basis where a structural
        // column can replace them; rows where none can are redundant.
        for r in 0..self.m {
            if self.basic[r] < n {
                continue;
            }
            let mut best = NONE;
            let mut best_abs = 1e-7;
            for j in 0..n {
                if self.row_of[j] == NONE {
                    let a = self.tab[r * cols + j].abs();
                    if a > best_abs {
                        best_abs = a;
                        best = j;
                    }
                }
            }
            if best != NONE {
                let art = self.basic[r];
                self.pivot(r, best);
                self.x[art] = 0.0;
            }
        }
        self.refresh_primal();
    }

    fn set_phase_costs(&mut self, phase_one: bool) {
        for j in 0..self.cols {
            self.cost[j] = match (phase_one, j < self.n) {
                (true, true) => 0.0,
                (true, false) => 1.0,
                (false, true) => self.lp.objective[j],
                (false, false) => 0.0,
            };
        }
        self.recompute_reduced_costs();
        self.degenerate_run = 0;
        self.bland = false;
    }

    fn recompute_reduced_costs(&mut self) {
        let cols = self.cols;
        self.d.copy_from_slice(&self.cost);
        for i in 0..self.m {
            let cb = self.cost[self.basic[i]];
            if cb != 0.0 {
                let row = &self.tab[i * cols..(i + 1) * cols];
                for (dj, a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
    }

    /// Basis inverse column `k`, taken from the artificial block of the
    /// tableau: that block holds `B^-1 S`.
    fn binv(&self, i: usize, k: usize) -> f64 {
        self.tab[i * self.cols + self.n + k] * self.sign[k]
    }

    /// Recomputes basic values from the original data to shed drift.
    fn refresh_primal(&mut self) {
        let n = self.n;
        let mut rhs = self.lp.eq_rhs.clone();
        for (j, &xj) in self.x[..n].iter().enumerate() {
            if self.row_of[j] == NONE && xj != 0.0 {
                for (r, row) in rhs.iter_mut().zip(&self.lp.eq_matrix) {
                    *r -= row[j] * xj;
                }
            }
        }
        for k in 0..self.m {
            if self.row_of[n + k] == NONE {
                rhs[k] -= self.sign[k] * self.x[n + k];
            }
        }
        for i in 0..self.m {
            let v: f64 = (0..self.m).map(|k| self.binv(i, k) * rhs[k]).sum();
            self.x[self.basic[i]] = v;
        }
    }

    fn choose_entering(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols {
            if self.row_of[j] != NONE || self.hi[j] <= self.lo[j] {
                continue;
            }
            let dj = self.d[j];
            let dir = if dj < -self.opt_tol && self.x[j] < self.hi[j] {
                1.0
            } else if dj > self.opt_tol && self.x[j] > self.lo[j] {
                -1.0
            } else {
                continue;
            };
            if self.bland {
                return Some((j, dir));
            }
            if dj.abs() > best_score {
                best_score = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn iterate(&mut self) -> Step {
        let cols = self.cols;
        loop {
            let Some((q, dir)) = self.choose_entering() else {
                return Step::Optimal;
            };
            if self.iters >= self.max_iters {
                return Step::IterationLimit;
            }
            self.iters += 1;

            // (step, variable index, pivot row or NONE for a bound flip)
            let mut best: Option<(f64, usize, usize)> = None;
            if self.lo[q].is_finite() && self.hi[q].is_finite() {
                best = Some((self.hi[q] - self.lo[q], q, NONE));
            }
            for i in 0..self.m {
                let a = self.tab[i * cols + q];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * a;
                let b = self.basic[i];
                let lim = if rate < 0.0 {
                    if !self.lo[b].is_finite() {
                        continue;
                    }
                    (self.x[b] - self.lo[b]).max(0.0) / -rate
                } else {
                    if !self.hi[b].is_finite() {
                        continue;
                    }
                    (self.hi[b] - self.x[b]).max(0.0) / rate
                };
                let take = match best {
                    None => true,
                    Some((t, idx, _)) => lim < t - RATIO_TIE || (lim <= t + RATIO_TIE && b < idx),
                };
                if take {
                    best = Some((lim, b, i));
                }
            }
            let Some((theta, _, row)) = best else {
                return Step::Unbounded { entering: q, dir };
            };

            if theta <= RATIO_TIE {
                self.degenerate_run += 1;
                if self.degenerate_run >= 3 * cols {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
                self.bland = false;
            }

            if theta > 0.0 {
                self.x[q] += dir * theta;
                for i in 0..self.m {
                    let a = self.tab[i * cols + q];
                    if a != 0.0 {
                        self.x[self.basic[i]] -= dir * a * theta;
                    }
                }
            }
            if row == NONE {
                self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
            } else {
                let leaving = self.basic[row];
                let rate = -dir * self.tab[row * cols + q];
                self.x[leaving] = if rate < 0.0 { self.lo[leaving] } else { self.hi[leaving] };
                self.pivot(row, q);
            }
            if self.iters % REFRESH_EVERY == 0 {
                self.refresh_primal();
                self.recompute_reduced_costs();
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let piv = self.tab[r * cols + q];
        let inv = 1.0 / piv;
        for v in &mut self.tab[r * cols..(r + 1) * cols] {
            *v *= inv;
        }
        let (before, rest) = self.tab.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for chunk in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
            let f = chunk[q];
            if f != 0.0 {
                for (v, p) in chunk.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                chunk[q] = 0.0;
            }
        }
        let dq = self.d[q];
        if dq != 0.0 {
            for (dj, p) in self.d.iter_mut().zip(prow.iter()) {
                *dj -= dq * p;
            }
            self.d[q] = 0.0;
        }
        let leaving = self.basic[r];
        self.row_of[leaving] = NONE;
        self.basic[r] = q;
        self.row_of[q] = r;
    }

    fn finish(&mut self, status: LpStatus, ray: Option<Vec<f64>>) -> LpSolution {
        let (m, n) = (self.m, self.n);
        if status != LpStatus::Infeasible {
            self.refresh_primal();
        }
        let primal = self.x[..n].to_vec();
        let mut duals = vec![0.0; m];
        for (k, y) in duals.iter_mut().enumerate() {
            *y = (0..m)
                .map(|i| {
                    let b = self.basic[i];
                    let cb = if b < n { self.lp.objective[b] } else { 0.0 };
                    cb * self.binv(i, k)
                })
                .sum();
        }
        let mut reduced_costs = self.lp.objective.clone();
        for (row, y) in self.lp.eq_matrix.iter().zip(&duals) {
            if *y != 0.0 {
                for (dj, a) in reduced_costs.iter_mut().zip(row) {
                    *dj -= y * a;
                }
            }
        }
        let at_upper = (0..n)
            .map(|j| self.row_of[j] == NONE && self.hi[j].is_finite() && self.x[j] >= self.hi[j] && self.hi[j] > self.lo[j])
            .collect();
        LpSolution {
            status,
            objective_value: self.lp.objective_at(&primal),
            primal,
            duals,
            reduced_costs,
            iterations: self.iters,
            infeasibility: 0.0,
            ray,
            basis: Some(Basis {
                basic: self.basic.clone(),
                at_upper,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new();
        lp.add_var("x", -1.0, 0.0, 1.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.primal, vec![1.0]);
        assert_eq!(sol.objective_value, -1.0);
    }

    #[test]
    fn objective_forced_by_row() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var("x1", 1.0, 0.0, 1.0);
        let b = lp.add_var("x2", 1.0, 0.0, 1.0);
        lp.add_row(&[(a, 1.0), (b, 1.0)], 1.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_rows() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var("x", 0.0, 0.0, 1.0);
        lp.add_row(&[(a, 1.0)], 2.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(sol.infeasibility > 0.5);
    }

    #[test]
    fn unbounded_reports_ray() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
        let b = lp.add_var("y", 0.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.add_row(&[(a, 1.0), (b, -1.0)], 0.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        let ray = sol.ray.unwrap();
        assert!(lp.objective_at(&ray) < 0.0);
        assert!((ray[0] - ray[1]).abs() < 1e-12);
    }

    #[test]
    fn free_variable_and_negative_rhs() {
        // min x + 2y  s.t. x - y = -3, y in [0, 5], x free -> y = 0? x = -3 + y,
        // cost = -3 + 3y -> y = 0, x = -3.
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0, f64::NEG_INFINITY, f64::INFINITY);
        let y = lp.add_var("y", 2.0, 0.0, 5.0);
        lp.add_row(&[(x, 1.0), (y, -1.0)], -3.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.primal[x] + 3.0).abs() < 1e-12);
        assert!(sol.primal[y].abs() < 1e-12);
        assert!((sol.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut lp = LinearProgram::new();
        lp.add_var("x", 1.0, 0.0, 1.0);
        lp.eq_matrix.push(vec![1.0, 2.0]);
        lp.eq_rhs.push(1.0);
        assert!(matches!(solve(&lp, &opts()), Err(Error::Dimension(_))));
    }

    #[test]
    fn crossed_bounds_rejected() {
        let mut lp = LinearProgram::new();
        lp.add_var("x", 1.0, 2.0, 1.0);
        assert!(matches!(solve(&lp, &opts()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var("a", -1.0, 0.0, 10.0);
        let b = lp.add_var("b", -1.0, 0.0, 10.0);
        lp.add_row(&[(a, 1.0), (b, 2.0)], 4.0);
        let sol = solve(
            &lp,
            &SolverOptions {
                max_iters: Some(0),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sol.status, LpStatus::IterationLimit);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var("a", -1.0, 0.0, 3.0);
        let b = lp.add_var("b", 0.0, 0.0, 3.0);
        lp.add_row(&[(a, 1.0), (b, 1.0)], 2.0);
        lp.add_row(&[(a, 2.0), (b, 2.0)], 4.0);
        let sol = solve(&lp, &opts()).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.primal[a] - 2.0).abs() < 1e-12);
    }
}
