//! Static SVG plots. Output depends only on the input values, so equal
//! inputs give byte-identical files.

use std::fmt::Write as _;

use crate::curve::StaircaseCurve;
use crate::error::{Error, Result};
use crate::model::Schedule;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            let m = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
            (lo - m, hi + m)
        };
        Frame { x: pad(x), y: pad(y) }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn open(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        out,
        r#"<path class="axes" d="M{x0},{y0} L{x0},{y1} L{x1},{y1}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (tx, ty) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y1 + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            ty + 4.0,
            tick(yv)
        );
    }
    if frame.y.0 < 0.0 && frame.y.1 > 0.0 {
        let z = frame.py(0.0);
        let _ = writeln!(
            out,
            r##"<line class="zero" x1="{x0}" y1="{z:.2}" x2="{x1}" y2="{z:.2}" stroke="#bbbbbb"/>"##
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        0.5 * (x0 + x1),
        H - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text class="ylabel" transform="translate(16,{:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        0.5 * (y0 + y1),
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Price range that shows every breakpoint plus some of each outer stair.
fn price_span(curves: &[&StaircaseCurve]) -> (f64, f64) {
    let bs: Vec<f64> = curves.iter().flat_map(|c| c.breakpoints.iter().copied()).collect();
    if bs.is_empty() {
        let lo = curves.iter().map(|c| c.meta.sweep_lo).fold(f64::INFINITY, f64::min);
        let hi = curves.iter().map(|c| c.meta.sweep_hi).fold(f64::NEG_INFINITY, f64::max);
        return if lo.is_finite() && hi > lo { (lo, hi) } else { (-1.0, 1.0) };
    }
    let lo = bs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = bs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = 0.25 * (hi - lo).max(1.0);
    (lo - w, hi + w)
}

fn draw_staircase(out: &mut String, frame: &Frame, curve: &StaircaseCurve, color: &str) {
    let stairs = curve.stairs();
    for (i, &(lo, hi, level)) in stairs.iter().enumerate() {
        let (a, b) = (frame.px(lo.max(frame.x.0)), frame.px(hi.min(frame.x.1)));
        let y = frame.py(level);
        let _ = writeln!(
            out,
            r#"<line class="stair" x1="{a:.2}" y1="{y:.2}" x2="{b:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#
        );
        if let Some(&(_, _, next)) = stairs.get(i + 1) {
            let y2 = frame.py(next);
            let _ = writeln!(
                out,
                r#"<line class="riser" x1="{b:.2}" y1="{y:.2}" x2="{b:.2}" y2="{y2:.2}" stroke="{color}" stroke-dasharray="4,3"/>"#
            );
        }
    }
}

fn level_span(curves: &[&StaircaseCurve]) -> (f64, f64) {
    let it = || curves.iter().flat_map(|c| c.levels.iter().copied());
    (it().fold(f64::INFINITY, f64::min), it().fold(f64::NEG_INFINITY, f64::max))
}

fn price_label(curve: &StaircaseCurve) -> String {
    format!("first-period price ({}/MWh)", curve.meta.currency)
}

const POWER_LABEL: &str = "first-period net output (MW)";

pub fn render_curve_svg(curve: &StaircaseCurve) -> Result<String> {
    if curve.levels.is_empty() {
        return Err(Error::invalid("cannot plot an empty curve"));
    }
    let frame = Frame::new(price_span(&[curve]), level_span(&[curve]));
    let mut out = String::new();
    open(&mut out, &frame, &price_label(curve), POWER_LABEL);
    draw_staircase(&mut out, &frame, curve, COLORS[0]);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Overlays labelled curves on shared axes with a legend.
pub fn render_family_svg(family: &[(String, StaircaseCurve)]) -> Result<String> {
    if family.is_empty() || family.iter().any(|(_, c)| c.levels.is_empty()) {
        return Err(Error::invalid("cannot plot an empty curve family"));
    }
    let curves: Vec<&StaircaseCurve> = family.iter().map(|(_, c)| c).collect();
    let frame = Frame::new(price_span(&curves), level_span(&curves));
    let mut out = String::new();
    open(&mut out, &frame, &price_label(curves[0]), POWER_LABEL);
    for (i, (name, c)) in family.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        draw_staircase(&mut out, &frame, c, color);
        let y = TOP + 14.0 + 16.0 * i as f64;
        let x = LEFT + 12.0;
        let _ = writeln!(
            out,
            r#"<g class="legend"><line x1="{x}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{y:.2}">{}</text></g>"#,
            y - 4.0,
            x + 18.0,
            y - 4.0,
            x + 24.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Net output per period as steps, with the state trajectory as a line on
/// a secondary scale.
pub fn render_schedule_svg(s: &Schedule, delta_t: f64, state_unit: &str) -> Result<String> {
    let t = s.power.len();
    if t == 0 {
        return Err(Error::invalid("cannot plot an empty schedule"));
    }
    let end = t as f64 * delta_t;
    let lo = s.power.iter().copied().fold(0.0, f64::min);
    let hi = s.power.iter().copied().fold(0.0, f64::max);
    let frame = Frame::new((0.0, end), (lo, hi));
    let mut out = String::new();
    open(&mut out, &frame, "time (h)", "net output (MW)");
    for (i, &p) in s.power.iter().enumerate() {
        let (a, b) = (frame.px(i as f64 * delta_t), frame.px((i + 1) as f64 * delta_t));
        let y = frame.py(p);
        let _ = writeln!(
            out,
            r#"<line class="stair" x1="{a:.2}" y1="{y:.2}" x2="{b:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/>"#,
            COLORS[0]
        );
        if let Some(&next) = s.power.get(i + 1) {
            let _ = writeln!(
                out,
                r#"<line class="riser" x1="{b:.2}" y1="{y:.2}" x2="{b:.2}" y2="{:.2}" stroke="{}" stroke-dasharray="4,3"/>"#,
                frame.py(next),
                COLORS[0]
            );
        }
    }
    if s.energy.len() == t + 1 {
        let e_lo = s.energy.iter().copied().fold(f64::INFINITY, f64::min);
        let e_hi = s.energy.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let state = Frame::new((0.0, end), (e_lo, e_hi));
        let pts: Vec<String> = s
            .energy
            .iter()
            .enumerate()
            .map(|(i, &e)| format!("{:.2},{:.2}", state.px(i as f64 * delta_t), state.py(e)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="state" points="{}" fill="none" stroke="{}"/>"#,
            pts.join(" "),
            COLORS[1]
        );
        let _ = writeln!(
            out,
            r#"<text class="legend" x="{:.2}" y="{:.2}" text-anchor="end" fill="{}">state {} to {} {}</text>"#,
            W - RIGHT - 4.0,
            TOP + 12.0,
            COLORS[1],
            tick(e_lo),
            tick(e_hi),
            escape(state_unit)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::test_curve;

    #[test]
    fn one_stroke_per_level_and_deterministic() {
        let c = test_curve(vec![10.0, 20.0, 30.0, 40.0], vec![-5.0, -3.0, -1.0, 4.0, 5.0]);
        let a = render_curve_svg(&c).unwrap();
        assert_eq!(a.matches(r#"class="stair""#).count(), 5);
        assert_eq!(a.matches(r#"class="riser""#).count(), 4);
        assert_eq!(a, render_curve_svg(&c).unwrap());
        let flat = test_curve(vec![], vec![0.0]);
        assert_eq!(render_curve_svg(&flat).unwrap().matches(r#"class="stair""#).count(), 1);
    }

    #[test]
    fn empty_inputs_are_errors() {
        let mut c = test_curve(vec![], vec![0.0]);
        c.levels.clear();
        assert!(render_curve_svg(&c).is_err());
        assert!(render_family_svg(&[]).is_err());
    }
}
