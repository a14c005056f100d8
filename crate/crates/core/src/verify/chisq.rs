//! Empirical faithfulness: are the recorded steps uniform over neighborhoods?

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::couplers::Trajectory;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub const DEFAULT_ALPHA: f64 = 0.001;
/// Departures a (walker, vertex) cell needs before it is tested.
pub const DEFAULT_MIN_DEPARTURES: u64 = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellTest {
    pub walker: usize,
    pub vertex: VertexId,
    pub departures: u64,
    /// Counts per neighbor, in neighbor order.
    pub counts: Vec<u64>,
    /// `None` when the cell is untested.
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
}

impl CellTest {
    pub fn tested(&self) -> bool {
        self.p_value.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub alpha: f64,
    pub min_departures: u64,
    pub tested: usize,
    pub untested: usize,
    /// Per-cell threshold `alpha / tested`.
    pub threshold: f64,
    pub min_p_value: Option<f64>,
    /// Steps that are not edges of the graph; left to the avoidance check.
    pub off_graph_steps: u64,
    pub passed: bool,
    pub cells: Vec<CellTest>,
}

/// Pearson chi-square per (walker, vertex) against the uniform law on
/// `N(v)`, with a Bonferroni family-wise verdict.
pub fn chi_square_faithfulness(g: &Graph, traj: &Trajectory, alpha: f64, min_departures: u64) -> Result<FaithfulnessReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::usage(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let k = traj.walkers();
    let mut counts: Vec<Vec<Vec<u64>>> = (0..k).map(|_| g.vertices().map(|v| vec![0; g.degree(v)]).collect()).collect();
    let mut off_graph = 0;
    for t in 1..traj.len() {
        let (prev, now) = (traj.at(t - 1), traj.at(t));
        for w in 0..k {
            let (from, to) = (prev[w], now[w]);
            if from >= g.n() {
                return Err(Error::usage(format!("tick {}: vertex {from} is out of range", t - 1)));
            }
            match g.neighbors(from).binary_search(&to) {
                Ok(idx) => counts[w][from][idx] += 1,
                Err(_) => off_graph += 1,
            }
        }
    }

    let mut cells = Vec::new();
    for (w, per_vertex) in counts.into_iter().enumerate() {
        for (v, c) in per_vertex.into_iter().enumerate() {
            let departures: u64 = c.iter().sum();
            if departures == 0 {
                continue;
            }
            let (statistic, p_value) = if departures >= min_departures && c.len() >= 2 {
                let expected = departures as f64 / c.len() as f64;
                let stat: f64 = c.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
                let dist = ChiSquared::new((c.len() - 1) as f64).map_err(|e| Error::Internal(e.to_string()))?;
                (Some(stat), Some(dist.sf(stat)))
            } else {
                (None, None)
            };
            cells.push(CellTest {
                walker: w,
                vertex: v,
                departures,
                counts: c,
                statistic,
                p_value,
            });
        }
    }
    let tested = cells.iter().filter(|c| c.tested()).count();
    let threshold = if tested == 0 { alpha } else { alpha / tested as f64 };
    let min_p_value = cells.iter().filter_map(|c| c.p_value).reduce(f64::min);
    Ok(FaithfulnessReport {
        alpha,
        min_departures,
        tested,
        untested: cells.len() - tested,
        threshold,
        min_p_value,
        off_graph_steps: off_graph,
        passed: min_p_value.is_none_or(|p| p >= threshold),
        cells,
    })
}
