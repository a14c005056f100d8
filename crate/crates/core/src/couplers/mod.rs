//! Coupling engines. Every random draw goes through [`Chooser`](crate::rng::Chooser),
//! so the same code runs under a seeded generator or under [`enumerate`].

pub mod cubic;
pub mod cycle;
pub mod enumerate;
pub mod regular;
pub mod simulate;
pub mod squarefree;
pub mod trajectory;

use serde::{Deserialize, Serialize};

use crate::graph::VertexId;
use crate::structure::EngineKind;

pub use cubic::{
    cubic_block, cubic_block_into, k22_excursion_coupling, one_step_matched_coupling, s3b_table, two_step_table_coupling,
    BlockOutcome, CubicCoupler, SigmaCache,
};
pub use cycle::{cycle_sync_step, CycleWalkers};
pub use enumerate::{enumerate, Enumeration, Explorer, Leaf};
pub use regular::{regular_init, regular_round, InitialOther, RegularEngine, RoundOutcome, TransportCache};
pub use simulate::{simulate, SimOptions, SimSummary};
pub use squarefree::{squarefree_step, SquareFreeCache};
pub use trajectory::Trajectory;

/// Positions between blocks (cubic, square-free) or at the start of a
/// three-tick cycle (regular, where `excluded` is `E_{t+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineState {
    pub engine: EngineKind,
    pub alice: VertexId,
    pub bob: VertexId,
    pub excluded: Option<VertexId>,
    /// Tick modulo 3 in the regular protocol; always 0 elsewhere.
    pub phase: u8,
    pub tick: u64,
}
