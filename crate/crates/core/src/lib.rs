pub mod criterion;
pub mod error;
pub mod geometry;
pub mod inner;
pub mod report;
pub mod sequence;
pub mod sublevel;
pub mod suite;

pub use error::{Error, Result};
