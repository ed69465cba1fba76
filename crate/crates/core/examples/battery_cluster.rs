// Seven small batteries: the sum of their individual curves is the curve
// of the joint program.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bidcurve::curve::{aggregate, extract_curve, ExtractOptions};
use bidcurve::instances::{seven_unit_cluster, worked_prices};
use bidcurve::model::{solve_schedule, ResourceSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prices = worked_prices();
    let cluster = seven_unit_cluster();
    let ResourceSpec::Cluster { members } = &cluster else { unreachable!() };
    let opts = ExtractOptions::default();

    let curves = members
        .iter()
        .map(|m| extract_curve(m, &prices, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let sum = aggregate(&curves)?;
    println!("{} unit curves sum to {} stairs:", curves.len(), sum.num_levels());
    for (lo, hi, level) in sum.stairs() {
        println!("    [{lo:>9.3}, {hi:>9.3})  {level:>6.3} MW");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let c1 = rng.random_range(40.0..100.0);
        let joint = solve_schedule(&cluster, &prices, c1)?.power[0];
        worst = worst.max((sum.evaluate(c1).midpoint() - joint).abs());
    }
    println!("largest gap to the joint program over 20 prices: {worst:.2e} MW");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
