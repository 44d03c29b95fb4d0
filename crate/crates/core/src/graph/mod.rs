//! HUBO-graph construction, its dual G-graph and the benchmark instance
//! families.

mod cycles;
mod generate;
mod ggraph;
mod hubo_graph;

pub use cycles::{find_efficient_cycles, CycleRule};
pub use generate::{gen_four_regular_dual, gen_torus_lattice, random_four_regular_edges};
pub use ggraph::{build_dual, parse_ggraph, GGraph, GaugeOperator, Plaquette};
pub use hubo_graph::{EdgeKind, HuboGraph};

/// Default cycle-length threshold for random four-regular duals.
pub const DEFAULT_KM: usize = 6;
