pub mod arith;
pub mod bounds;
pub mod bttree;
pub mod cli;
pub mod drinfeld;
pub mod error;
pub mod heckemod;
pub mod ore;
pub mod quad;

pub use error::{Error, Result};
