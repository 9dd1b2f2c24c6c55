//! Truncated power series over Z/mZ.

pub mod cache;
mod ring;
mod series;

pub use ring::ResidueRing;
pub use series::{TruncSeries, DEFAULT_DENSITY_THRESHOLD, TRUNCATION_CAP};
