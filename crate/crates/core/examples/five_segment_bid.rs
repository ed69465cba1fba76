// Bid curve of a 22 MWh / 5 MW battery against a day of forecasts, with
// every stair labelled and the schedule behind two of them.

use bidcurve::curve::{classify_segments, extract_curve, ExtractOptions};
use bidcurve::instances::{worked_prices, worked_resource};
use bidcurve::model::solve_schedule;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = worked_resource();
    let prices = worked_prices();
    let curve = extract_curve(&r, &prices, &ExtractOptions::default())?;
    let curve = classify_segments(&curve, &r, &prices)?;

    println!("{:>12} {:>12} {:>8}  label", "from", "to", "MW");
    for ((lo, hi, level), label) in curve.stairs().into_iter().zip(&curve.labels) {
        println!("{lo:>12.4} {hi:>12.4} {level:>8.3}  {}", label.kind);
    }

    for c1 in curve.representative_prices() {
        let s = solve_schedule(&r, &prices, c1)?;
        let d = s.diagnostics.expect("battery");
        println!(
            "c1 = {c1:8.3}: P1 = {:6.3} MW, T_B = {:?} ({:?}), n_c = {}, n_d = {}",
            s.power[0], d.t_b, d.terminal, d.n_c, d.n_d
        );
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
