//! The three-tick protocol for `d`-regular graphs without `H_d`, `d ≥ 4`.
//!
//! A round takes the mover at `a`, the other walker at `b` and the excluded
//! vertex `e`, and samples `(I, J, K, L)` from the transport `m` for that
//! triple. The mover walks `a → a_I → a_I^K`, the other steps to `b_J` and
//! hands over `e' = b_J^L`, and the roles swap. Two rounds cover three ticks:
//!
//! ```text
//! round 1 (mover A): A_t, B_t, E_{t+1}         -> A_{t+1}, A_{t+2}, B_{t+1}, E_{t+2}
//! round 2 (mover B): B_{t+1}, A_{t+2}, E_{t+2} -> B_{t+2}, B_{t+3}, A_{t+3}, E_{t+4}
//! ```

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{build_regular_transport, RegularTransport, SolutionCache};
use crate::rng::Chooser;
use crate::structure::{contains_hd, EngineKind};

use super::EngineState;

pub type TransportCache = SolutionCache<(VertexId, VertexId, VertexId), RegularTransport>;

/// How Bob's starting vertex is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialOther {
    /// Smallest vertex outside `N(a0) ∪ {a0}`.
    Auto,
    /// Start on the sampled `E_1`.
    Excluded,
    /// A given vertex; a neighbor of `a0` is only valid if it equals `E_1`.
    Vertex(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundOutcome {
    pub mover_path: [VertexId; 2],
    pub other_step: VertexId,
    pub next_excluded: VertexId,
    /// Sampled `(I, J, K, L)`, zero-based.
    pub indices: [usize; 4],
}

fn check_regular_host(g: &Graph) -> Result<usize> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::usage("regular engine needs a regular graph"))?;
    if d < 4 {
        return Err(Error::usage(format!("regular engine needs d >= 4, got {d}")));
    }
    if g.n() < 5 {
        return Err(Error::usage(format!("regular engine needs n >= 5, got {}", g.n())));
    }
    if let Some(w) = contains_hd(g, d) {
        return Err(Error::usage(format!("graph contains H_{d} at pair ({}, {})", w.a, w.b)));
    }
    Ok(d)
}

/// Samples `E_1` uniformly on `N(a0)` and places Bob.
pub fn regular_init<C: Chooser>(g: &Graph, a0: VertexId, b0: InitialOther, rng: &mut C) -> Result<EngineState> {
    check_regular_host(g)?;
    if a0 >= g.n() {
        return Err(Error::usage(format!("a0 = {a0} is out of range")));
    }
    let nbrs = g.neighbors(a0);
    let e1 = nbrs[rng.below(nbrs.len())?];
    let bob = match b0 {
        InitialOther::Excluded => e1,
        InitialOther::Auto => g
            .vertices()
            .find(|&v| v != a0 && !g.has_edge(a0, v))
            .ok_or_else(|| Error::usage("graph is complete"))?,
        InitialOther::Vertex(v) if v >= g.n() => return Err(Error::usage(format!("b0 = {v} is out of range"))),
        InitialOther::Vertex(v) if v == a0 => return Err(Error::usage("b0 must differ from a0")),
        InitialOther::Vertex(v) if g.has_edge(a0, v) && v != e1 => {
            return Err(Error::usage(format!(
                "b0 = {v} neighbors a0 = {a0} but the sampled excluded vertex is {e1}"
            )))
        }
        InitialOther::Vertex(v) => v,
    };
    Ok(EngineState {
        engine: EngineKind::Regular,
        alice: a0,
        bob,
        excluded: Some(e1),
        phase: 0,
        tick: 0,
    })
}

/// `other ≠ mover`, and `other ∈ N(mover)` only if `other = excluded`.
pub fn phase_invariant_holds(g: &Graph, mover: VertexId, other: VertexId, excluded: VertexId) -> bool {
    other != mover && (!g.has_edge(mover, other) || other == excluded) && g.has_edge(mover, excluded)
}

/// Draws one cell of `m` with probability `m / d²(d − 1)`.
pub fn sample_cell<C: Chooser>(t: &RegularTransport, rng: &mut C) -> Result<[usize; 4]> {
    let d = t.frame.d;
    let total = t.total() as usize;
    let mut r = rng.below(total)?;
    for row in 0..t.matrix.rows() {
        for (col, &m) in t.matrix.row(row).iter().enumerate() {
            let m = m as usize;
            if r < m {
                return Ok([row / d, col / d, row % d, col % d]);
            }
            r -= m;
        }
    }
    Err(Error::Internal("transport total does not match its cells".into()))
}

pub fn regular_round<C: Chooser>(
    g: &Graph,
    cache: Option<&TransportCache>,
    mover: VertexId,
    other: VertexId,
    excluded: VertexId,
    rng: &mut C,
) -> Result<RoundOutcome> {
    if !phase_invariant_holds(g, mover, other, excluded) {
        return Err(Error::Internal(format!(
            "phase invariant violated: mover {mover}, other {other}, excluded {excluded}"
        )));
    }
    let build = || build_regular_transport(g, mover, other, excluded);
    let t = match cache {
        Some(c) => c.get_or_try_insert((mover, other, excluded), build)?,
        None => std::sync::Arc::new(build()?),
    };
    let [i, j, k, l] = sample_cell(&t, rng)?;
    let d = t.frame.d;
    let m = t.frame.movers[i * d + k];
    let o = t.frame.others[j * d + l];
    Ok(RoundOutcome {
        mover_path: [m.first_step, m.second_step],
        other_step: o.step,
        next_excluded: o.next_excluded,
        indices: [i, j, k, l],
    })
}

/// Runs the protocol from a phase-0 state.
pub struct RegularEngine<'g> {
    g: &'g Graph,
    cache: TransportCache,
    state: EngineState,
    rounds: u64,
}

impl<'g> RegularEngine<'g> {
    pub fn new(g: &'g Graph, state: EngineState, cache_capacity: usize) -> Result<Self> {
        if state.engine != EngineKind::Regular || state.excluded.is_none() || state.phase != 0 {
            return Err(Error::usage("regular engine needs a phase-0 regular state"));
        }
        Ok(RegularEngine {
            g,
            cache: TransportCache::new(cache_capacity),
            state,
            rounds: 0,
        })
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn cache(&self) -> &TransportCache {
        &self.cache
    }

    /// Rounds played so far; every one started with the phase invariant checked.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// Plays two rounds and returns `(A, B)` for the next three ticks.
    pub fn advance<C: Chooser>(&mut self, rng: &mut C) -> Result<[(VertexId, VertexId); 3]> {
        let EngineState { alice, bob, excluded, .. } = self.state;
        let e = excluded.expect("checked in new");
        let r1 = regular_round(self.g, Some(&self.cache), alice, bob, e, rng)?;
        self.state.phase = 1;
        let [a1, a2] = r1.mover_path;
        let b1 = r1.other_step;
        let r2 = regular_round(self.g, Some(&self.cache), b1, a2, r1.next_excluded, rng)?;
        let [b2, b3] = r2.mover_path;
        let a3 = r2.other_step;
        self.rounds += 2;
        self.state.alice = a3;
        self.state.bob = b3;
        self.state.excluded = Some(r2.next_excluded);
        self.state.phase = 0;
        self.state.tick += 3;
        Ok([(a1, b1), (a2, b2), (a3, b3)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::rng::SimRng;

    #[test]
    fn init_rules_on_circulant() {
        let g = gen::circulant(9, &[1, 2]).unwrap();
        let s = regular_init(&g, 0, InitialOther::Auto, &mut SimRng::new(1)).unwrap();
        assert_eq!(s.bob, 3);
        assert!([1, 2, 7, 8].contains(&s.excluded.unwrap()));

        let e1 = s.excluded.unwrap();
        let same = regular_init(&g, 0, InitialOther::Vertex(e1), &mut SimRng::new(1)).unwrap();
        assert_eq!(same.bob, e1);
        let wrong = [1, 2, 7, 8].into_iter().find(|&v| v != e1).unwrap();
        assert!(matches!(
            regular_init(&g, 0, InitialOther::Vertex(wrong), &mut SimRng::new(1)),
            Err(Error::Usage(_))
        ));
        let ex = regular_init(&g, 0, InitialOther::Excluded, &mut SimRng::new(4)).unwrap();
        assert_eq!(Some(ex.bob), ex.excluded);
    }

    #[test]
    fn init_rejects_bad_hosts() {
        assert!(regular_init(&gen::complete(5).unwrap(), 0, InitialOther::Auto, &mut SimRng::new(0)).is_err());
        assert!(regular_init(&gen::petersen(), 0, InitialOther::Auto, &mut SimRng::new(0)).is_err());
    }

    #[test]
    fn rounds_avoid_and_keep_the_invariant() {
        let g = gen::circulant(9, &[1, 2]).unwrap();
        let mut rng = SimRng::new(2);
        let s = regular_init(&g, 0, InitialOther::Auto, &mut rng).unwrap();
        let mut engine = RegularEngine::new(&g, s, 1024).unwrap();
        let (mut pa, mut pb) = (s.alice, s.bob);
        for _ in 0..3000 {
            let ticks = engine.advance(&mut rng).unwrap();
            for (a, b) in ticks {
                assert!(g.has_edge(pa, a) && g.has_edge(pb, b));
                assert!(pb != pa && pb != a);
                pa = a;
                pb = b;
            }
        }
        assert_eq!(engine.rounds(), 6000);
        assert!(engine.cache().hit_rate() > 0.9);
    }

    #[test]
    fn round_rejects_a_broken_invariant() {
        let g = gen::circulant(9, &[1, 2]).unwrap();
        let err = regular_round(&g, None, 0, 1, 2, &mut SimRng::new(0)).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }
}
