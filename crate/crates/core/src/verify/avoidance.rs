use std::fmt;

use serde::{Deserialize, Serialize};

use crate::couplers::{BlockOutcome, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::structure::EngineKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Both walkers on one vertex at the same tick.
    CollisionSameTick,
    /// The later walker sits where the earlier one steps next.
    CollisionSwap,
    /// Walkers adjacent at a block boundary (cubic and square-free engines).
    AdjacencyAtBlockEnd,
    NonEdgeStep,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::CollisionSameTick => "collision_same_tick",
            ViolationKind::CollisionSwap => "collision_swap",
            ViolationKind::AdjacencyAtBlockEnd => "adjacency_at_block_end",
            ViolationKind::NonEdgeStep => "non_edge_step",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub tick: usize,
    pub kind: ViolationKind,
    /// Walker indices involved; equal for a non-edge step.
    pub walkers: (usize, usize),
    pub vertices: Vec<VertexId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tick {}: {} (walkers {} and {}, vertices {:?})", self.tick, self.kind, self.walkers.0, self.walkers.1, self.vertices)
    }
}

/// Every breach of avoidance, edge-consistency and block separation.
///
/// With more than two walkers, walker `j` must avoid walker `i` for every `i < j`.
pub fn check_avoidance(g: &Graph, traj: &Trajectory) -> Result<Vec<Violation>> {
    let expected = g.digest();
    if traj.digest != expected {
        return Err(Error::DigestMismatch {
            expected,
            found: traj.digest.clone(),
        });
    }
    let k = traj.walkers();
    let mut out = Vec::new();
    for t in 0..traj.len() {
        let now = traj.at(t);
        if let Some(&v) = now.iter().find(|&&v| v >= g.n()) {
            return Err(Error::usage(format!("tick {t}: vertex {v} is out of range")));
        }
        let next = (t + 1 < traj.len()).then(|| traj.at(t + 1));
        for w in 0..k {
            if let Some(next) = next {
                if !g.has_edge(now[w], next[w]) {
                    out.push(Violation {
                        tick: t,
                        kind: ViolationKind::NonEdgeStep,
                        walkers: (w, w),
                        vertices: vec![now[w], next[w]],
                    });
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if now[j] == now[i] {
                    out.push(Violation {
                        tick: t,
                        kind: ViolationKind::CollisionSameTick,
                        walkers: (i, j),
                        vertices: vec![now[i]],
                    });
                }
                if let Some(next) = next {
                    if now[j] == next[i] {
                        out.push(Violation {
                            tick: t,
                            kind: ViolationKind::CollisionSwap,
                            walkers: (i, j),
                            vertices: vec![now[j]],
                        });
                    }
                }
            }
        }
    }
    if matches!(traj.engine, EngineKind::Cubic | EngineKind::Squarefree) && k == 2 {
        for &t in traj.blocks() {
            if t < traj.len() && g.has_edge(traj.alice(t), traj.bob(t)) {
                out.push(Violation {
                    tick: t,
                    kind: ViolationKind::AdjacencyAtBlockEnd,
                    walkers: (0, 1),
                    vertices: vec![traj.alice(t), traj.bob(t)],
                });
            }
        }
        out.sort_by_key(|v| (v.tick, v.kind));
    }
    Ok(out)
}

/// Block conditions for a block starting at `(a, b)`: edges only, no
/// collision during the block, non-adjacent at its end.
pub fn block_conditions_hold(g: &Graph, a: VertexId, b: VertexId, out: &BlockOutcome) -> bool {
    if out.is_empty() || out.alice_steps.len() != out.bob_steps.len() {
        return false;
    }
    let alice: Vec<_> = std::iter::once(a).chain(out.alice_steps.iter().copied()).collect();
    let bob: Vec<_> = std::iter::once(b).chain(out.bob_steps.iter().copied()).collect();
    let t = out.len();
    let steps_ok = (0..t).all(|s| g.has_edge(alice[s], alice[s + 1]) && g.has_edge(bob[s], bob[s + 1]));
    let avoid_ok = (0..t).all(|s| bob[s] != alice[s] && bob[s] != alice[s + 1]);
    steps_ok && avoid_ok && bob[t] != alice[t] && !g.has_edge(alice[t], bob[t])
}
