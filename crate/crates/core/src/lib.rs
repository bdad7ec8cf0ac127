//! Dimensions of secant varieties of Grassmannians by exact rank computations
//! over prime fields.

pub mod codes;
pub mod error;
pub mod extalg;
pub mod field;
pub mod gr26;
pub mod grassmann;
pub mod induction;
pub mod terracini;

pub use error::{Error, Result};
