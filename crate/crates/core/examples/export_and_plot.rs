// Writes a curve as JSON and CSV, reads both back, and renders the SVG
// staircase and a schedule plot.

use bidcurve::curve::{classify_segments, extract_curve, ExtractOptions};
use bidcurve::instances::{worked_prices, worked_resource};
use bidcurve::io::{read_curve, render_curve_svg, render_schedule_svg, write_curve, CurveFormat};
use bidcurve::model::solve_schedule;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = worked_resource();
    let prices = worked_prices();
    let curve = classify_segments(&extract_curve(&r, &prices, &ExtractOptions::default())?, &r, &prices)?;

    let dir = std::env::temp_dir().join("bidcurve-export-example");
    std::fs::create_dir_all(&dir)?;
    for (name, fmt) in [("curve.json", CurveFormat::Json), ("curve.csv", CurveFormat::Csv)] {
        let path = dir.join(name);
        write_curve(&curve, &path, fmt)?;
        assert_eq!(read_curve(&path)?, curve);
        println!("wrote and re-read {}", path.display());
    }
    std::fs::write(dir.join("curve.svg"), render_curve_svg(&curve)?)?;
    let s = solve_schedule(&r, &prices, 68.0)?;
    std::fs::write(dir.join("schedule.svg"), render_schedule_svg(&s, prices.delta_t, "MWh")?)?;
    println!("plots in {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
