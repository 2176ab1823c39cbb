//! Attitude networks as Ising systems: random base graphs, Gibbs-distribution
//! sampling, polychoric correlation networks, shortest-path descriptives, and
//! the simulation and survey pipelines built on them.

pub mod error;
pub mod graph;
pub mod ising;
pub mod network;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod survey;

pub use error::{Error, Result};
