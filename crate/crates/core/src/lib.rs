pub mod airy;
pub mod airy_lower;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod linalg;
pub mod oracle;
pub mod prover;
pub mod ritz;

pub use error::{Error, Result};
pub use interval::{Interval, Jet2};
