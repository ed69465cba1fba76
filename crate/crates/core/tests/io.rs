use std::path::Path;

use bidcurve::curve::{classify_segments, extract_curve, ExtractOptions};
use bidcurve::error::Error;
use bidcurve::instances::{worked_prices, worked_resource, WORKED_FUTURE_PRICES};
use bidcurve::io::{
    curve_to_string, load_prices, parse_prices, read_curve, render_curve_svg, render_family_svg, write_curve,
    CurveFormat, RunConfig,
};

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn worked_price_file_is_a_day() {
    let p = load_prices(fixture("worked_prices.csv"), 1.0).unwrap();
    assert_eq!(p.horizon(), 24);
    assert_eq!(p.future_prices, WORKED_FUTURE_PRICES.to_vec());
}

#[test]
fn blank_price_names_line_five() {
    let text = "period,price\n2,10\n3,11\n4,12\n5,\n6,14\n";
    match parse_prices(text, Path::new("p.csv"), 1.0) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn worked_config_resolves_to_the_worked_example() {
    let cfg = RunConfig::load(fixture("worked_example.json")).unwrap();
    let (r, prices) = cfg.resolve().unwrap();
    assert_eq!(r, worked_resource());
    assert_eq!(prices, worked_prices());
}

#[test]
fn curve_files_round_trip_and_are_stable() {
    let r = worked_resource();
    let prices = worked_prices();
    let curve = classify_segments(&extract_curve(&r, &prices, &ExtractOptions::default()).unwrap(), &r, &prices).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, fmt) in [("c.json", CurveFormat::Json), ("c.csv", CurveFormat::Csv)] {
        let path = dir.path().join(name);
        write_curve(&curve, &path, fmt).unwrap();
        assert_eq!(read_curve(&path).unwrap(), curve);
    }
    let json: serde_json::Value = serde_json::from_str(&curve_to_string(&curve, CurveFormat::Json)).unwrap();
    assert_eq!(json["breakpoints"].as_array().unwrap().len(), 4);
    assert_eq!(json["levels"].as_array().unwrap().len(), 5);
    assert!(json["labels"].is_array() && json["meta"].is_object());

    let again = extract_curve(&r, &prices, &ExtractOptions::default()).unwrap();
    let again = classify_segments(&again, &r, &prices).unwrap();
    assert_eq!(render_curve_svg(&curve).unwrap(), render_curve_svg(&again).unwrap());
    assert_eq!(
        curve_to_string(&curve, CurveFormat::Csv),
        curve_to_string(&again, CurveFormat::Csv)
    );
}

#[test]
fn svg_draws_one_stroke_per_stair() {
    let r = worked_resource();
    let prices = worked_prices();
    let curve = extract_curve(&r, &prices, &ExtractOptions::default()).unwrap();
    let svg = render_curve_svg(&curve).unwrap();
    assert!(svg.contains(r#"viewBox="0 0 640 400""#));
    assert_eq!(svg.matches(r#"class="stair""#).count(), 5);
    assert!(svg.contains("(MW)") && svg.contains("USD/MWh"));
    let family = render_family_svg(&[("a".into(), curve.clone()), ("b".into(), curve)]).unwrap();
    assert_eq!(family.matches(r#"class="legend""#).count(), 2);
}

#[test]
fn unwritable_path_is_an_io_error() {
    let r = worked_resource();
    let curve = extract_curve(&r, &worked_prices(), &ExtractOptions::default()).unwrap();
    let err = write_curve(&curve, "/nonexistent-dir/x/curve.json", CurveFormat::Json).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}
