// A small seeded batch of each property suite, summarised per property.

use bidcurve::curve::ExtractOptions;
use bidcurve::verify::{run_suite, Suite};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let opts = ExtractOptions::default();
    for suite in [Suite::Ideal, Suite::Imperfect, Suite::Negative, Suite::Shift, Suite::Oracle] {
        let rep = run_suite(suite, 10, 0, &opts);
        for (property, (pass, fail)) in rep.summary() {
            println!("{suite:?}/{property}: {pass} passed, {fail} failed");
        }
        for f in rep.failures() {
            println!("{f}");
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
