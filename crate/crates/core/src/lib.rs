//! Exact homological perturbation for non-positive DGLAs over ℚ.

pub mod contraction;
pub mod corpus;
pub mod dgla;
pub mod error;
pub mod exec;
pub mod graded;
pub mod hpt;
pub mod kuranishi;
pub mod linalg;
pub mod problem;
pub mod rational;
pub mod report;
pub mod series;
pub mod symcoalg;
pub mod validation;

pub use error::{Error, Result};
pub use rational::Rational;
