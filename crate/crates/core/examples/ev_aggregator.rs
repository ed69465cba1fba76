// An aggregator's fleet of EVs, each a battery that is only reachable
// while plugged in and must leave with a minimum charge. The horizon
// starts at 7:00, so most of the fleet is plugged in early on.

use bidcurve::curve::{aggregate, extract_curve, ExtractOptions};
use bidcurve::instances::{reference_fleet, worked_prices};
use bidcurve::model::sample_ev_fleet;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prices = worked_prices();
    let mut params = reference_fleet(11);
    params.count = 30;
    params.arrival_mean -= 7.0;
    params.departure_mean -= 7.0;
    let fleet = sample_ev_fleet(&params, &prices)?;
    let opts = ExtractOptions::default();
    let curves = fleet
        .iter()
        .map(|ev| extract_curve(ev, &prices, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let plugged = curves.iter().filter(|c| c.levels.iter().any(|l| l.abs() > 0.0)).count();
    println!("{} vehicles, {plugged} flexible in the first hour", fleet.len());

    let total = aggregate(&curves)?;
    for (lo, hi, level) in total.stairs() {
        println!("    [{lo:>9.3}, {hi:>9.3})  {:>6.1} kW", level * 1e3);
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
