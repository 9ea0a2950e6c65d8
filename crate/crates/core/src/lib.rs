//! Like-centrality simulation laboratory.
//!
//! Solves the self-consistent like-centrality system on Barabási–Albert
//! social graphs with random directed like rates, runs large seeded
//! ensembles, selects the most prestigious ("strategic") networks and
//! compares them against the random baseline.

pub mod analysis;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod likecentrality;
pub mod seed;
pub mod stats;
pub mod svg;

pub use error::{Error, Result};
