//! Exact arithmetic for mod p Siegel modular forms of degree 2.

pub mod arith;
pub mod checks;
pub mod cli;
pub mod cycles;
pub mod error;
#[doc(hidden)]
pub mod fixtures;
pub mod galois;
pub mod hecke;
pub mod localdef;
pub mod qexp;
pub mod rep;
pub mod strata;
pub mod theta;

pub use error::{Error, Result};
