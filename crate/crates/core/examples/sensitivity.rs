// How the curve responds to rescaled prices, a uniform price offset and a
// nudge to the initial charge.

use bidcurve::curve::ExtractOptions;
use bidcurve::instances::{worked_prices, worked_resource};
use bidcurve::verify::{check_additive_shift, check_scaling_invariance, check_vertical_shift};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = worked_resource();
    let prices = worked_prices();
    let opts = ExtractOptions::default();

    for k in [0.5, 2.0] {
        println!("{}  (k = {k})", check_scaling_invariance(&r, &prices, k, &opts)?);
    }
    let mut closed = r.clone();
    closed.battery_mut().expect("battery").ending_soc = true;
    for a in [-100.0, 7.0] {
        println!("{}  (a = {a})", check_additive_shift(&closed, &prices, a, &opts)?);
    }
    for delta in [-0.5, 0.5] {
        let rep = check_vertical_shift(&r, &prices, delta, &opts)?;
        println!("{rep}  (delta = {delta} MWh)");
        for note in &rep.observations {
            println!("    {note}");
        }
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
