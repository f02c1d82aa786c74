//! Low-diameter decompositions of graphs, the random-sign multi-scale `L₁`
//! embedding built from them, and tools for checking its contract and for
//! expansion certificates on proximity graphs.

pub mod analysis;
pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod graphcore;

pub use error::{Error, Result};
