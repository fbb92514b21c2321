//! Weighted hyper-graph Kochen-Specker inequalities for qutrits.
//!
//! Build hyper-graphs of rays, expand them into orthogonality graphs, compute
//! classical bounds exactly and compare them with the quantum spectrum.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expansion;
pub mod hypergraph;
pub mod linalg3;
pub mod mis;

pub use error::{Error, Result};
