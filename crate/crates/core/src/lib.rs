pub mod cli;
pub mod curve;
pub mod error;
pub mod instances;
pub mod io;
pub mod lp;
pub mod model;
pub mod verify;

pub use error::{Error, Result};
