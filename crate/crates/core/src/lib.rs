pub mod arith;
pub mod census;
pub mod cli;
pub mod error;
pub mod local;
pub mod polygonal;
pub mod quadratic;
pub mod theorem;
mod serde_exact;

pub use error::{MgonalError, Result};
