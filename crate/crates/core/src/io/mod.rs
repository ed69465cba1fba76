//! Price ingestion, run configuration, curve files and SVG plots.

mod config;
mod curve_file;
mod prices;
mod svg;

pub use config::{AcConfig, ExtractConfig, PriceSource, PriceUnit, ResourceConfig, RunConfig};
pub use curve_file::{curve_to_string, read_curve, write_curve, CurveFormat};
pub use prices::{load_prices, parse_prices};
pub use svg::{render_curve_svg, render_family_svg, render_schedule_svg};
