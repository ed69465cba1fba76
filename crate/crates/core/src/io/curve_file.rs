use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveMeta, SegmentKind, SegmentLabel, StairContext, StaircaseCurve};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveFormat {
    Json,
    /// `price_lo,price_hi,level_mw,label` rows after a `#` line carrying
    /// the metadata and stair contexts as JSON.
    Csv,
}

impl CurveFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(CurveFormat::Json),
            Some("csv") => Ok(CurveFormat::Csv),
            _ => Err(Error::invalid(format!("cannot infer curve format of {}", path.display()))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvHeader {
    meta: CurveMeta,
    contexts: Vec<Option<StairContext>>,
}

const CSV_COLUMNS: &str = "price_lo,price_hi,level_mw,label";

pub fn curve_to_string(curve: &StaircaseCurve, format: CurveFormat) -> String {
    match format {
        CurveFormat::Json => {
            let mut s = serde_json::to_string_pretty(curve).expect("curves serialize");
            s.push('\n');
            s
        }
        CurveFormat::Csv => {
            let header = CsvHeader {
                meta: curve.meta.clone(),
                contexts: curve.labels.iter().map(|l| l.context.clone()).collect(),
            };
            let mut s = format!("# {}\n{CSV_COLUMNS}\n", serde_json::to_string(&header).expect("serialize"));
            for ((lo, hi, level), label) in curve.stairs().into_iter().zip(&curve.labels) {
                writeln!(s, "{lo},{hi},{level},{}", label.kind).expect("string write");
            }
            s
        }
    }
}

pub fn write_curve(curve: &StaircaseCurve, path: impl AsRef<Path>, format: CurveFormat) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_to_string(curve, format)).map_err(|e| Error::io(path, e))
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<StaircaseCurve> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let curve = match CurveFormat::from_path(path)? {
        CurveFormat::Json => serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?,
        CurveFormat::Csv => parse_csv(&text, path)?,
    };
    Ok(curve)
}

fn parse_csv(text: &str, path: &Path) -> Result<StaircaseCurve> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let header: CsvHeader = match lines.next() {
        Some((_, l)) if l.starts_with("# ") => serde_json::from_str(&l[2..]).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?,
        _ => return Err(err(1, "missing metadata line".into())),
    };
    match lines.next() {
        Some((_, l)) if l == CSV_COLUMNS => {}
        _ => return Err(err(2, format!("expected columns `{CSV_COLUMNS}`"))),
    }
    let mut breakpoints = Vec::new();
    let mut levels = Vec::new();
    let mut kinds = Vec::new();
    for (n, line) in lines {
        let f: Vec<&str> = line.split(',').collect();
        let [lo, _, level, label] = f[..] else {
            return Err(err(n, format!("expected 4 fields, found {}", f.len())));
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(n, format!("bad number {s:?}")));
        if !levels.is_empty() {
            breakpoints.push(num(lo)?);
        }
        levels.push(num(level)?);
        kinds.push(label.parse::<SegmentKind>().map_err(|e| err(n, e.to_string()))?);
    }
    if header.contexts.len() != kinds.len() {
        return Err(err(1, "context count does not match rows".into()));
    }
    let labels = kinds
        .into_iter()
        .zip(header.contexts)
        .map(|(kind, context)| SegmentLabel { kind, context })
        .collect();
    Ok(StaircaseCurve {
        breakpoints,
        levels,
        labels,
        meta: header.meta,
    })
}
