use bidcurve::lp::{solve, LinearProgram, LpStatus, SolverOptions};
use bidcurve::model::{build_battery_lp, BatteryParams, PriceSeries};
use proptest::prelude::*;

/// Minimum of `-sum(c_t P_t)` for a two-period 1 MW / 2 MWh battery by
/// enumerating both powers on a 1e-3 MW grid.
fn brute_force_two_period(e1: f64, c1: f64, c2: f64) -> f64 {
    let n = 2000;
    let step = 2.0 / n as f64;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let p1 = -1.0 + i as f64 * step;
        let e2 = e1 - p1;
        if !(-1e-12..=2.0 + 1e-12).contains(&e2) {
            continue;
        }
        for j in 0..=n {
            let p2 = -1.0 + j as f64 * step;
            let e3 = e2 - p2;
            if (-1e-12..=2.0 + 1e-12).contains(&e3) {
                best = best.min(-(c1 * p1 + c2 * p2));
            }
        }
    }
    best
}

#[test]
fn two_period_battery_matches_enumeration() {
    for (e1, c1, c2) in [(1.0, 30.0, 50.0), (0.3, 60.0, 20.0), (2.0, -5.0, 10.0), (0.0, 10.0, 10.5)] {
        let p = BatteryParams::ideal(0.0, 2.0, e1, 1.0);
        let prices = PriceSeries::new(1.0, vec![c2]).unwrap();
        let lp = build_battery_lp(&p, &prices, c1).unwrap();
        let sol = solve(&lp, &SolverOptions::default()).unwrap();
        assert!(sol.is_optimal());
        let brute = brute_force_two_period(e1, c1, c2);
        // A grid point lies within 1e-3 MW of the optimum in each period.
        assert!(sol.objective_value <= brute + 1e-9, "{} > {brute}", sol.objective_value);
        assert!(brute - sol.objective_value <= 2e-3 * (c1.abs() + c2.abs()));
    }
}

#[test]
fn warm_start_reaches_the_same_optimum() {
    let p = BatteryParams::ideal(0.0, 22.0, 14.0, 5.0);
    let prices = bidcurve::instances::worked_prices();
    let lp = build_battery_lp(&p, &prices, 60.0).unwrap();
    let first = solve(&lp, &SolverOptions::default()).unwrap();
    for c1 in [60.5, 66.0, 72.0, 90.0] {
        let mut next = lp.clone();
        next.objective[0] = -c1;
        let cold = solve(&next, &SolverOptions::default()).unwrap();
        let warm = solve(
            &next,
            &SolverOptions {
                warm_start: first.basis.clone(),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(warm.is_optimal());
        assert!((warm.objective_value - cold.objective_value).abs() < 1e-9);
        assert!(warm.iterations <= cold.iterations);
    }
}

#[test]
fn infeasible_and_unbounded_are_reported() {
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 1.0, 0.0, 1.0);
    lp.add_row(&[(x, 1.0)], 3.0);
    assert_eq!(solve(&lp, &SolverOptions::default()).unwrap().status, LpStatus::Infeasible);

    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
    let y = lp.add_var("y", 0.0, 0.0, f64::INFINITY);
    lp.add_row(&[(x, 1.0), (y, -1.0)], 0.0);
    let sol = solve(&lp, &SolverOptions::default()).unwrap();
    assert_eq!(sol.status, LpStatus::Unbounded);
    assert!(sol.ray.is_some());
}

fn random_lp() -> impl Strategy<Value = (LinearProgram, Vec<f64>)> {
    (1usize..6, 1usize..8).prop_flat_map(|(m, extra)| {
        let n = m + extra;
        (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), m),
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec((-2.0f64..0.0, 0.0f64..2.0, 0.0f64..1.0), n),
        )
            .prop_map(move |(a, c, boxes)| {
                let mut lp = LinearProgram::new();
                let mut x0 = Vec::with_capacity(n);
                for (j, &(lo, hi, f)) in boxes.iter().enumerate() {
                    lp.add_var(format!("x{j}"), c[j], lo, hi);
                    x0.push(lo + f * (hi - lo));
                }
                for row in &a {
                    let coeffs: Vec<(usize, f64)> = row.iter().copied().enumerate().collect();
                    let rhs = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
                    lp.add_row(&coeffs, rhs);
                }
                (lp, x0)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Feasible by construction: the solver must return a feasible point no
    /// worse than the known one, whose objective equals the dual bound.
    #[test]
    fn optimal_points_satisfy_kkt((lp, x0) in random_lp()) {
        let sol = solve(&lp, &SolverOptions::default()).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.primal_residual(&sol.primal) < 1e-7);
        for (j, &x) in sol.primal.iter().enumerate() {
            prop_assert!(x >= lp.lower[j] - 1e-9 && x <= lp.upper[j] + 1e-9);
            let d = sol.reduced_costs[j];
            // Complementary slackness for the bound constraints.
            if d > 1e-7 { prop_assert!((x - lp.lower[j]).abs() < 1e-6); }
            if d < -1e-7 { prop_assert!((x - lp.upper[j]).abs() < 1e-6); }
        }
        prop_assert!(sol.objective_value <= lp.objective_at(&x0) + 1e-7);
        prop_assert!((sol.dual_objective(&lp) - sol.objective_value).abs() < 1e-6 * (1.0 + sol.objective_value.abs()));
    }
}
