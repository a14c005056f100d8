//! Block couplings for cubic graphs without `H̃_3`.
//!
//! Each block starts with the walkers at distance at least 2 and returns
//! their next `T ≥ 1` steps such that every step is uniform, they never
//! collide, and they end non-adjacent.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{one_step_matching, SolutionCache};
use crate::rng::Chooser;
use crate::structure::{classify_scenario, K22Witness, ScenarioClass, ScenarioTag};

/// Matchings `σ: N(a) → N(b)` keyed by the ordered pair `(a, b)`.
pub type SigmaCache = SolutionCache<(VertexId, VertexId), Vec<VertexId>>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockOutcome {
    /// `A_{t+1}, …, A_{t+T}`.
    pub alice_steps: Vec<VertexId>,
    /// `B_{t+1}, …, B_{t+T}`.
    pub bob_steps: Vec<VertexId>,
    pub scenario: Option<ScenarioTag>,
}

impl BlockOutcome {
    /// The block length `T`.
    pub fn len(&self) -> usize {
        self.alice_steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alice_steps.is_empty()
    }

    fn clear(&mut self) {
        self.alice_steps.clear();
        self.bob_steps.clear();
        self.scenario = None;
    }
}

/// Cubic block coupler with a shared matching cache.
pub struct CubicCoupler<'g> {
    g: &'g Graph,
    sigma: SigmaCache,
}

impl<'g> CubicCoupler<'g> {
    pub fn new(g: &'g Graph, cache_capacity: usize) -> Self {
        CubicCoupler {
            g,
            sigma: SigmaCache::new(cache_capacity),
        }
    }

    pub fn cache(&self) -> &SigmaCache {
        &self.sigma
    }

    pub fn block<C: Chooser>(&self, a: VertexId, b: VertexId, rng: &mut C) -> Result<BlockOutcome> {
        let mut out = BlockOutcome::default();
        self.block_into(a, b, rng, &mut out)?;
        Ok(out)
    }

    /// Writes steps into `out` as they are decided, so a failed or cut-off
    /// run leaves its partial block behind.
    pub fn block_into<C: Chooser>(&self, a: VertexId, b: VertexId, rng: &mut C, out: &mut BlockOutcome) -> Result<()> {
        block_into(self.g, Some(&self.sigma), a, b, rng, out)
    }
}

pub fn cubic_block<C: Chooser>(g: &Graph, a: VertexId, b: VertexId, rng: &mut C) -> Result<BlockOutcome> {
    let mut out = BlockOutcome::default();
    block_into(g, None, a, b, rng, &mut out)?;
    Ok(out)
}

/// Cache-free form of [`CubicCoupler::block_into`].
pub fn cubic_block_into<C: Chooser>(g: &Graph, a: VertexId, b: VertexId, rng: &mut C, out: &mut BlockOutcome) -> Result<()> {
    block_into(g, None, a, b, rng, out)
}

fn block_into<C: Chooser>(
    g: &Graph,
    cache: Option<&SigmaCache>,
    a: VertexId,
    b: VertexId,
    rng: &mut C,
    out: &mut BlockOutcome,
) -> Result<()> {
    out.clear();
    let class = classify_scenario(g, a, b)?;
    out.scenario = Some(class.tag());
    match class {
        ScenarioClass::S1 => {
            out.alice_steps.push(g.neighbors(a)[rng.below(3)?]);
            out.bob_steps.push(g.neighbors(b)[rng.below(3)?]);
            Ok(())
        }
        ScenarioClass::S2 { .. } | ScenarioClass::S3a { .. } | ScenarioClass::S4 { .. } | ScenarioClass::S5 => {
            let (x, y) = matched_step(g, cache, a, b, rng)?;
            out.alice_steps.push(x);
            out.bob_steps.push(y);
            Ok(())
        }
        ScenarioClass::S3b { c1, c2 } => {
            let rows = table_rows(g, a, b, c1, c2)?;
            let (alice, bob) = rows[rng.below(9)?];
            out.alice_steps.extend(alice);
            out.bob_steps.extend(bob);
            Ok(())
        }
        ScenarioClass::S6 { k22, ca, cb } => excursion_into(g, a, b, k22, ca, cb, rng, out),
    }
}

fn matched_step<C: Chooser>(
    g: &Graph,
    cache: Option<&SigmaCache>,
    a: VertexId,
    b: VertexId,
    rng: &mut C,
) -> Result<(VertexId, VertexId)> {
    let solve = || {
        one_step_matching(g, a, b).map_err(|err| match err {
            Error::Infeasible { violation, .. } => {
                Error::Internal(format!("scenario hypothesis violated at ({a}, {b}): {violation}"))
            }
            other => other,
        })
    };
    let sigma = match cache {
        Some(c) => c.get_or_try_insert((a, b), solve)?,
        None => std::sync::Arc::new(solve()?),
    };
    let i = rng.below(sigma.len())?;
    Ok((g.neighbors(a)[i], sigma[i]))
}

/// One matched step for scenarios S2, S3a, S4 and S5: `a'` uniform on
/// `N(a)`, `b' = σ(a')` for a fixed compatible bijection `σ`.
pub fn one_step_matched_coupling<C: Chooser>(g: &Graph, a: VertexId, b: VertexId, rng: &mut C) -> Result<(VertexId, VertexId)> {
    match classify_scenario(g, a, b)?.tag() {
        ScenarioTag::S2 | ScenarioTag::S3a | ScenarioTag::S4 | ScenarioTag::S5 => matched_step(g, None, a, b, rng),
        other => Err(Error::usage(format!("pair ({a}, {b}) is in scenario {other}, not a matched one"))),
    }
}

/// `(A_{t+1}, A_{t+2})` and `(B_{t+1}, B_{t+2})` for one row of the table.
pub type TableRow = ([VertexId; 2], [VertexId; 2]);

fn other_two(g: &Graph, v: VertexId, skip: VertexId) -> Result<[VertexId; 2]> {
    match g.neighbors(v).iter().copied().filter(|&w| w != skip).collect::<Vec<_>>()[..] {
        [x, y] => Ok([x, y]),
        _ => Err(Error::usage(format!("vertex {v} is not cubic next to {skip}"))),
    }
}

fn table_rows(g: &Graph, a: VertexId, b: VertexId, c1: VertexId, c2: VertexId) -> Result<[TableRow; 9]> {
    let third = |v: VertexId| {
        g.neighbors(v)
            .iter()
            .copied()
            .find(|&w| w != c1 && w != c2)
            .ok_or_else(|| Error::usage(format!("{v} has no neighbor besides {c1}, {c2}")))
    };
    let (ap, bp) = (third(a)?, third(b)?);
    let [a1, a2] = other_two(g, ap, a)?;
    let [b1, b2] = other_two(g, bp, b)?;
    Ok([
        ([c1, a], [c2, b]),
        ([c1, b], [c2, a]),
        ([c1, c2], [bp, b1]),
        ([c2, a], [c1, b]),
        ([c2, b], [c1, a]),
        ([c2, c1], [bp, b2]),
        ([ap, a], [bp, b]),
        ([ap, a1], [c1, c2]),
        ([ap, a2], [c2, c1]),
    ])
}

/// The nine equally likely rows of the two-step coupling for a pair with two
/// adjacent common neighbors `c1 < c2`.
pub fn s3b_table(g: &Graph, a: VertexId, b: VertexId) -> Result<[TableRow; 9]> {
    match classify_scenario(g, a, b)? {
        ScenarioClass::S3b { c1, c2 } => table_rows(g, a, b, c1, c2),
        other => Err(Error::usage(format!("pair ({a}, {b}) is in scenario {}, not S3b", other.tag()))),
    }
}

pub fn two_step_table_coupling<C: Chooser>(g: &Graph, a: VertexId, b: VertexId, rng: &mut C) -> Result<BlockOutcome> {
    let rows = s3b_table(g, a, b)?;
    let (alice, bob) = rows[rng.below(9)?];
    Ok(BlockOutcome {
        alice_steps: alice.to_vec(),
        bob_steps: bob.to_vec(),
        scenario: Some(ScenarioTag::S3b),
    })
}

pub fn k22_excursion_coupling<C: Chooser>(g: &Graph, a: VertexId, b: VertexId, rng: &mut C) -> Result<BlockOutcome> {
    match classify_scenario(g, a, b)? {
        ScenarioClass::S6 { k22, ca, cb } => {
            let mut out = BlockOutcome {
                scenario: Some(ScenarioTag::S6),
                ..BlockOutcome::default()
            };
            excursion_into(g, a, b, k22, ca, cb, rng, &mut out)?;
            Ok(out)
        }
        other => Err(Error::usage(format!("pair ({a}, {b}) is in scenario {}, not S6", other.tag()))),
    }
}

#[allow(clippy::too_many_arguments)]
fn excursion_into<C: Chooser>(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    k: K22Witness,
    ca: VertexId,
    cb: VertexId,
    rng: &mut C,
    out: &mut BlockOutcome,
) -> Result<()> {
    let K22Witness { a1, a2, b1, b2 } = k;
    match rng.below(3)? {
        0 => {
            out.alice_steps.push(ca);
            out.bob_steps.push([b1, b2][rng.below(2)?]);
            return Ok(());
        }
        1 => {
            out.alice_steps.push([a1, a2][rng.below(2)?]);
            out.bob_steps.push(cb);
            return Ok(());
        }
        _ => {}
    }
    let partner = |v: VertexId| match v {
        _ if v == a1 => Ok(a2),
        _ if v == a2 => Ok(a1),
        _ if v == b1 => Ok(b2),
        _ if v == b2 => Ok(b1),
        _ => Err(Error::Internal(format!("excursion left the K_2,2 at {v}"))),
    };
    let mut cur = [a1, a2][rng.below(2)?];
    out.alice_steps.push(cur);
    loop {
        let nbrs = g.neighbors(cur);
        let next = nbrs[rng.below(nbrs.len())?];
        out.alice_steps.push(next);
        if next == a || next == b {
            // Bob's last interior step is a fair coin on his current side.
            let t = out.alice_steps.len();
            let side = if (t - 1) % 2 == 1 { [b1, b2] } else { [a1, a2] };
            out.bob_steps.push(side[rng.below(2)?]);
            out.bob_steps.push(if t.is_multiple_of(2) { b } else { a });
            return Ok(());
        }
        out.bob_steps.push(partner(next)?);
        cur = next;
    }
}
