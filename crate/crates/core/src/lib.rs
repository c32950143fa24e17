//! Weighted partition counts: exact tables, saddle-point tools, asymptotic
//! models with one or two dominant poles, and Witten zeta functions.

pub mod asym;
pub mod dd;
pub mod error;
pub mod exact;
pub mod model;
mod mp;
pub mod quad;
pub mod saddle;
pub mod special;
pub mod witten;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
