// Cross-checks the linear program against gridded dynamic programming on
// a short horizon. The DP value is an upper bound that tightens as the
// grid is refined.

use bidcurve::verify::{gen, oracle_gaps};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<16} {:>12} {:>12}", "instance", "gap@201", "gap@401");
    for i in 0..6 {
        let inst = gen::oracle(i as u64, i);
        let c1 = gen::first_price(&inst, i as u64);
        let (g1, g2) = oracle_gaps(&inst, c1)?;
        println!("{:<16} {g1:>12.3e} {g2:>12.3e}", inst.name);
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
