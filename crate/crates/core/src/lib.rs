pub mod campaign;
pub mod counting;
pub mod diophantine;
pub mod ehrhart;
pub mod error;
pub mod fit;
pub mod fourier;
pub mod mainterm;
pub mod numeric;
pub mod poisson;
pub mod polytope;
pub mod scalar;
pub mod sweep;

pub use error::{Error, Result};
