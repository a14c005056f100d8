//! Synchronized walkers on a cycle: one coin moves everybody the same way.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::Chooser;

/// Shifts every slot by `+1` or `−1` modulo `n` on a single fair coin.
pub fn cycle_sync_step<C: Chooser>(n: usize, slots: &[usize], rng: &mut C) -> Result<Vec<usize>> {
    if slots.len() > n / 2 {
        return Err(Error::usage(format!("{} walkers do not fit on a cycle of length {n}", slots.len())));
    }
    let shift = if rng.below(2)? == 1 { 1 } else { n - 1 };
    Ok(slots.iter().map(|&s| (s + shift) % n).collect())
}

/// `k` walkers on a cycle graph, tracked as slots along [`Graph::cycle_order`].
#[derive(Clone, Debug)]
pub struct CycleWalkers {
    order: Vec<VertexId>,
    slots: Vec<usize>,
}

impl CycleWalkers {
    /// Walkers at slots `s, s + 2, …, s + 2(k − 1)` where slot `s` holds `start`.
    pub fn new(g: &Graph, k: usize, start: VertexId) -> Result<Self> {
        let order = g
            .cycle_order()
            .ok_or_else(|| Error::usage("cycle engine needs a connected 2-regular graph"))?;
        let n = order.len();
        if k == 0 || k > n / 2 {
            return Err(Error::usage(format!("cycle engine needs 1 <= k <= n/2, got k = {k}, n = {n}")));
        }
        let s = order
            .iter()
            .position(|&v| v == start)
            .ok_or_else(|| Error::usage(format!("start vertex {start} is out of range")))?;
        Ok(CycleWalkers {
            order,
            slots: (0..k).map(|i| (s + 2 * i) % n).collect(),
        })
    }

    pub fn positions(&self) -> Vec<VertexId> {
        self.slots.iter().map(|&s| self.order[s]).collect()
    }

    pub fn step<C: Chooser>(&mut self, rng: &mut C) -> Result<()> {
        self.slots = cycle_sync_step(self.order.len(), &self.slots, rng)?;
        Ok(())
    }
}
