// A 7 kW air conditioner holding a 22-26 degC band on a hot day. It can
// only consume, so its curve lives at or below zero.

use bidcurve::curve::{classify_segments, extract_curve, ExtractOptions};
use bidcurve::instances::{reference_ac, worked_prices};
use bidcurve::model::{solve_schedule, ResourceSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prices = worked_prices();
    let r = ResourceSpec::Ac(reference_ac(prices.horizon(), prices.delta_t));
    let curve = extract_curve(&r, &prices, &ExtractOptions::default())?;
    let curve = classify_segments(&curve, &r, &prices)?;
    for ((lo, hi, level), label) in curve.stairs().into_iter().zip(&curve.labels) {
        println!("[{lo:>9.3}, {hi:>9.3})  {:>6.3} kW  {}", level * 1e3, label.kind);
    }

    let s = solve_schedule(&r, &prices, 70.0)?;
    let temps: Vec<String> = s.energy.iter().map(|t| format!("{t:.1}")).collect();
    println!("room temperature at c1 = 70: {}", temps.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
