//! Independent sets through the MIN greedy algorithm, closed-form lower
//! bounds on the independence number, and a harness that checks the
//! edge-counting argument behind those bounds against exact optima.

pub mod bounds;
pub mod campaign;
pub mod chain;
pub mod cli;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod min_greedy;
pub mod rng;

pub use graph::{Graph, GraphError, VertexId};
pub use rng::Seed;
