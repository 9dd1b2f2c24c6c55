pub mod chars;
pub mod error;
pub mod halfint;
pub mod modseries;
pub mod prover;
pub mod qgen;
pub mod registry;
pub mod sturm;

pub use error::{Error, Result};
