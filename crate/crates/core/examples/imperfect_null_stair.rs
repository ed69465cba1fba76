// Conversion losses open a zero-power stair between charging and
// discharging: the 2 MWh / 0.6 MW battery at three efficiencies.

use bidcurve::curve::{classify_segments, extract_curve, ExtractOptions};
use bidcurve::instances::{small_battery_with_efficiency, worked_prices};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prices = worked_prices();
    let mut widths = Vec::new();
    for eta in [1.0, 0.98, 0.9] {
        let r = small_battery_with_efficiency(0.5, eta);
        let curve = extract_curve(&r, &prices, &ExtractOptions::default())?;
        let curve = classify_segments(&curve, &r, &prices)?;
        let w = curve.zero_level_width();
        println!("eta = {eta}: {} stairs, zero stair {w:.3} USD/MWh wide", curve.num_levels());
        for ((lo, hi, level), label) in curve.stairs().into_iter().zip(&curve.labels) {
            println!("    [{lo:>9.3}, {hi:>9.3})  {level:>7.4} MW  {}", label.kind);
        }
        widths.push(w);
    }
    assert!(widths[0] <= widths[1] && widths[1] <= widths[2]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
