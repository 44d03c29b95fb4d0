//! Solvers for high-order unconstrained binary optimization built on the
//! mapping to Z2 lattice gauge theory.
//!
//! Pipeline: a [`hubo::HuboPolynomial`] is turned into a HUBO-graph (one vertex
//! per term, one edge per variable), then dualized into a [`graph::GGraph`]
//! whose plaquettes are the terms and whose sites are gauge operators. The
//! [`anneal`] module solves G-graph instances with local quantum annealing,
//! its gauge-protected variant and simulated annealing; [`bench`] aggregates
//! time-to-solution statistics; [`quantum`] holds a small exact state-vector
//! simulator.

pub mod anneal;
pub mod bench;
pub mod error;
pub mod graph;
pub mod hubo;
pub mod parallel;
pub mod quantum;

pub use error::{Error, Result};
