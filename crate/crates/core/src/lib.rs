pub mod align;
pub mod error;
pub mod evaluation;
pub mod filters;
pub mod ingest;
pub mod models;
pub mod regression;
pub mod synthetic;
pub mod timeseries;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
