//! Reed-Frost epidemics on random intersection graphs with tunable
//! clustering, and the branching-process approximation of their early
//! phase.

pub mod cli;
pub mod epidemic;
pub mod error;
pub mod experiments;
pub mod graphgen;
pub mod motifs;
pub mod output;
pub mod seed;
pub mod theory;

pub use error::{Error, Result};
