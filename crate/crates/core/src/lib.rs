pub mod analysis;
pub mod cli;
pub mod policies;
pub mod error;
pub mod instances;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Mode, Rational, Scalar};
