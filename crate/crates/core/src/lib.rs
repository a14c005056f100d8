//! Avoidance couplings of two random walkers on finite graphs.
//!
//! Two walkers, Alice and Bob, each perform a simple random walk, yet Bob
//! never stands where Alice is or where she is about to step. The crate
//! detects which construction a graph admits, builds the integer transports
//! behind each coupling, runs the engines, and checks their output.

pub mod couplers;
pub mod error;
pub mod gen;
pub mod graph;
pub mod matching;
pub mod rng;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_graph, Graph, Multigraph, VertexId};
pub use rng::{Chooser, SimRng};
pub use structure::{admissibility_verdict, EngineKind, ScenarioTag, Verdict};
