use bidcurve::curve::{aggregate, classify_segments, extract_curve, Evaluation, ExtractOptions, SegmentKind};
use bidcurve::instances::{small_battery, small_battery_with_efficiency, worked_prices, worked_resource};
use bidcurve::model::{solve_schedule, BatteryParams, PriceSeries, ResourceSpec};
use proptest::prelude::*;

/// Dense price scan of the schedule: every sampled point away from a
/// breakpoint must sit on the extracted curve.
fn assert_matches_scan(r: &ResourceSpec, prices: &PriceSeries, lo: f64, hi: f64, n: usize) {
    let curve = extract_curve(r, prices, &ExtractOptions::default()).unwrap();
    let guard = 100.0 * curve.meta.price_tol;
    for i in 0..=n {
        let c1 = lo + (hi - lo) * i as f64 / n as f64;
        if curve.breakpoints.iter().any(|b| (b - c1).abs() < guard) {
            continue;
        }
        let p1 = solve_schedule(r, prices, c1).unwrap().power[0];
        match curve.evaluate(c1) {
            Evaluation::Level(l) => assert!((l - p1).abs() <= curve.meta.level_tol, "c1 = {c1}: {l} vs {p1}"),
            e => panic!("range {e:?} away from breakpoints at {c1}"),
        }
    }
}

#[test]
fn worked_example_matches_a_dense_scan() {
    assert_matches_scan(&worked_resource(), &worked_prices(), 40.0, 100.0, 1200);
}

#[test]
fn lossy_battery_matches_a_dense_scan() {
    assert_matches_scan(&small_battery_with_efficiency(0.5, 0.9), &worked_prices(), 50.0, 90.0, 800);
}

#[test]
fn worked_example_labels() {
    let r = worked_resource();
    let prices = worked_prices();
    let c = classify_segments(&extract_curve(&r, &prices, &ExtractOptions::default()).unwrap(), &r, &prices).unwrap();
    assert_eq!(
        c.kinds(),
        vec![
            SegmentKind::FullyCharge,
            SegmentKind::ChargeForCharge,
            SegmentKind::ChargeForDischarge,
            SegmentKind::DischargeForDischarge,
            SegmentKind::FullyDischarge,
        ]
    );
    for (b, want) in c.breakpoints.iter().zip([65.97, 69.89, 70.9, 75.91]) {
        assert!((b - want).abs() <= c.meta.price_tol);
    }
}

#[test]
fn aggregate_is_pointwise_sum() {
    let prices = worked_prices();
    let opts = ExtractOptions::default();
    let members: Vec<ResourceSpec> = [0.2, 0.9]
        .into_iter()
        .map(|s| ResourceSpec::IdealBattery(small_battery(s)))
        .chain([small_battery_with_efficiency(0.5, 0.85)])
        .collect();
    let curves: Vec<_> = members.iter().map(|m| extract_curve(m, &prices, &opts).unwrap()).collect();
    let sum = aggregate(&curves).unwrap();
    sum.validate().unwrap();
    for i in 0..400 {
        let c1 = 40.0 + 0.1 * i as f64 + 0.0123;
        let want: f64 = curves.iter().map(|c| c.evaluate(c1).midpoint()).sum();
        if let Evaluation::Level(l) = sum.evaluate(c1) {
            assert!((l - want).abs() < 1e-9, "c1 = {c1}");
        }
    }
    assert!(aggregate(&[]).is_err());
}

fn ideal_instance() -> impl Strategy<Value = (BatteryParams, PriceSeries)> {
    (
        1.0f64..50.0,
        0.05f64..2.0,
        0.0f64..1.0,
        prop::collection::btree_set(1000u32..10000, 1..16),
        any::<u64>(),
    )
        .prop_map(|(cap, rate, soc, set, seed)| {
            // Distinct prices from a set, in a seeded shuffled order.
            let mut future: Vec<f64> = set.into_iter().map(|v| v as f64 / 100.0).collect();
            let n = future.len();
            for i in (1..n).rev() {
                let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 33) as usize % (i + 1);
                future.swap(i, j);
            }
            (
                BatteryParams::ideal(0.0, cap, soc * cap, cap * rate),
                PriceSeries::new(1.0, future).unwrap(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Ideal batteries only change behaviour where the first price crosses
    /// a forecast or zero (the value of energy left at the end), so every
    /// breakpoint is one of those.
    #[test]
    fn ideal_breakpoints_are_future_prices((p, prices) in ideal_instance()) {
        let c = extract_curve(&ResourceSpec::IdealBattery(p), &prices, &ExtractOptions::default()).unwrap();
        c.validate().unwrap();
        prop_assert!(c.num_levels() <= 5);
        for b in &c.breakpoints {
            prop_assert!(
                prices.future_prices.iter().chain(&[0.0]).any(|f| (f - b).abs() <= 10.0 * c.meta.price_tol),
                "breakpoint {} not a forecast", b
            );
        }
    }

    #[test]
    fn levels_rise_with_price((p, prices) in ideal_instance(), eta in 0.8f64..1.0) {
        let r = ResourceSpec::ImperfectBattery(p.with_efficiency(eta));
        let c = extract_curve(&r, &prices, &ExtractOptions::default()).unwrap();
        prop_assert!(c.levels.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(c.breakpoints.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(c.num_levels() <= 9);
    }
}
