use std::path::Path;

use crate::error::{Error, Result};
use crate::model::PriceSeries;

/// Reads forecasts `c_2 ..= c_T` from a `period,price` CSV. An empty file
/// (or a bare header) is a single-period horizon.
pub fn load_prices(path: impl AsRef<Path>, delta_t: f64) -> Result<PriceSeries> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_prices(&text, path, delta_t)
}

pub fn parse_prices(text: &str, path: &Path, delta_t: f64) -> Result<PriceSeries> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut future = Vec::new();
    match lines.next() {
        None => {}
        Some((n, header)) => {
            let cols: Vec<String> = header.split(',').map(|c| c.trim().to_ascii_lowercase()).collect();
            if cols != ["period", "price"] {
                return Err(err(n, format!("expected header `period,price`, found {header:?}")));
            }
        }
    }
    let mut expected = 2usize;
    for (n, line) in lines {
        if line.trim().is_empty() {
            return Err(err(n, "blank row".into()));
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [period, price] = fields[..] else {
            return Err(err(n, format!("expected 2 fields, found {}", fields.len())));
        };
        let period: usize = period
            .parse()
            .map_err(|_| err(n, format!("period {period:?} is not a positive integer")))?;
        if price.is_empty() {
            return Err(err(n, "blank price".into()));
        }
        let value: f64 = price
            .parse()
            .map_err(|_| err(n, format!("price {price:?} is not a number")))?;
        if !value.is_finite() {
            return Err(err(n, format!("price {price:?} is not finite")));
        }
        if period + 1 == expected {
            return Err(err(n, format!("duplicate period {period}")));
        }
        if period != expected {
            return Err(err(n, format!("period {period} out of order, expected {expected}")));
        }
        future.push(value);
        expected += 1;
    }
    PriceSeries::new(delta_t, future)
}
