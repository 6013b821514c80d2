pub mod control;
pub mod error;
pub mod export;
pub mod exponential;
pub mod fd;
pub mod grid;
pub mod linalg;
pub mod liouville;
pub mod modal;
pub mod observability;
pub mod quadrature;
pub mod sampling;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
