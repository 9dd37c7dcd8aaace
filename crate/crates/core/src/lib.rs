//! Exact lattice arithmetic and verification of the integral cohomology of a
//! Hilbert-square quotient by a symplectic involution.

pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod hilb2;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod pipeline;

pub use error::{Error, Result};
