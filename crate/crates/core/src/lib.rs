//! Isotopy certification for space curves: total curvature, tubular
//! neighborhoods, inscribed PL approximants and their certificates.

pub mod certify;
pub mod curvature;
pub mod curve;
mod error;
pub mod inscribe;
pub mod jet;
pub mod metric;
pub mod offsets;
pub mod pl_ops;
pub mod quadrature;
pub mod tubular;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
