// Negative forecasts: every hour negated, then a single hour. The curve
// stays a non-decreasing staircase either way.

use bidcurve::curve::{extract_curve, ExtractOptions};
use bidcurve::instances::{small_battery, worked_prices};
use bidcurve::model::ResourceSpec;
use bidcurve::verify::check_staircase;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = ResourceSpec::IdealBattery(small_battery(0.5));
    let base = worked_prices();
    let mut all = base.clone();
    all.future_prices.iter_mut().for_each(|c| *c = -*c);
    let mut one = base.clone();
    one.future_prices[5] = -one.future_prices[5];

    for (name, prices) in [("all negated", all), ("hour 7 negated", one)] {
        let curve = extract_curve(&r, &prices, &ExtractOptions::default())?;
        println!("{name}: breakpoints {:.3?}", curve.breakpoints);
        println!("    levels {:.3?}", curve.levels);
        println!("    {}", check_staircase(&curve, &r, &prices, 200, 1));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
