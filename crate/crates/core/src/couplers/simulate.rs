use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::DEFAULT_CACHE_CAPACITY;
use crate::rng::SimRng;
use crate::structure::{admissibility_verdict, EngineKind, ScenarioTag};

use super::cubic::{BlockOutcome, CubicCoupler};
use super::cycle::CycleWalkers;
use super::regular::{regular_init, InitialOther, RegularEngine};
use super::squarefree::{squarefree_step, SquareFreeCache};
use super::trajectory::Trajectory;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOptions {
    /// `None` picks the verdict's preferred engine.
    pub engine: Option<EngineKind>,
    /// Minimum number of steps; runs end at the first block boundary at or past it.
    pub ticks: usize,
    pub seed: u64,
    /// Alice's start, default 0.
    pub a0: Option<VertexId>,
    pub b0: InitialOther,
    /// Walker count for the cycle engine; the others always run two.
    pub walkers: usize,
    pub cache_capacity: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            engine: None,
            ticks: 1000,
            seed: 0,
            a0: None,
            b0: InitialOther::Auto,
            walkers: 2,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub engine: Option<EngineKind>,
    /// Index of the last recorded tick.
    pub ticks: usize,
    pub blocks: usize,
    /// Cubic engine: blocks per scenario.
    pub scenarios: BTreeMap<ScenarioTag, u64>,
    /// Cubic engine: blocks per length `T`.
    pub block_lengths: BTreeMap<usize, u64>,
    /// Regular engine: rounds played, each preceded by a phase-invariant check.
    pub rounds: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

impl SimSummary {
    pub fn cache_hit_rate(&self) -> f64 {
        let total = self.cache_hits + self.cache_misses;
        if total == 0 {
            0.0
        } else {
            self.cache_hits as f64 / total as f64
        }
    }
}

/// Runs the chosen engine for at least `opts.ticks` steps.
pub fn simulate(g: &Graph, opts: &SimOptions) -> Result<(Trajectory, SimSummary)> {
    let verdict = admissibility_verdict(g)?;
    let engine = opts.engine.unwrap_or(verdict.engine);
    if engine == EngineKind::None || !verdict.admits(engine) {
        let why = verdict.obstruction.clone().unwrap_or_else(|| {
            let list: Vec<_> = verdict.applicable.iter().map(|e| e.to_string()).collect();
            format!("applicable: {}", list.join(", "))
        });
        return Err(Error::usage(format!("engine {engine} does not apply to this graph ({why})")));
    }
    if engine != EngineKind::Cycle && opts.walkers != 2 {
        return Err(Error::usage(format!("the {engine} engine runs exactly two walkers")));
    }
    let a0 = opts.a0.unwrap_or(0);
    if a0 >= g.n() {
        return Err(Error::usage(format!("a0 = {a0} is out of range")));
    }
    let mut rng = SimRng::new(opts.seed);
    let walkers = if engine == EngineKind::Cycle { opts.walkers } else { 2 };
    let mut traj = Trajectory::new(engine, opts.seed, g.digest(), walkers);
    let mut summary = SimSummary {
        engine: Some(engine),
        ..SimSummary::default()
    };
    match engine {
        EngineKind::Cubic => run_cubic(g, opts, a0, &mut rng, &mut traj, &mut summary)?,
        EngineKind::Squarefree => run_squarefree(g, opts, a0, &mut rng, &mut traj, &mut summary)?,
        EngineKind::Regular => run_regular(g, opts, a0, &mut rng, &mut traj, &mut summary)?,
        EngineKind::Cycle => {
            let mut w = CycleWalkers::new(g, opts.walkers, a0)?;
            traj.push(&w.positions());
            while traj.len() <= opts.ticks {
                w.step(&mut rng)?;
                traj.push(&w.positions());
            }
        }
        EngineKind::None => unreachable!("rejected above"),
    }
    summary.ticks = traj.len() - 1;
    summary.blocks = traj.blocks().len();
    Ok((traj, summary))
}

/// Bob's start for the engines that need distance at least 2.
fn separated_start(g: &Graph, a0: VertexId, b0: InitialOther) -> Result<VertexId> {
    match b0 {
        InitialOther::Auto => g
            .vertices()
            .find(|&v| v != a0 && !g.has_edge(a0, v))
            .ok_or_else(|| Error::usage(format!("every vertex is within distance 1 of {a0}"))),
        InitialOther::Vertex(v) if v < g.n() && v != a0 && !g.has_edge(a0, v) => Ok(v),
        InitialOther::Vertex(v) => Err(Error::usage(format!("b0 = {v} must be a vertex at distance >= 2 from {a0}"))),
        InitialOther::Excluded => Err(Error::usage("an excluded-vertex start only applies to the regular engine")),
    }
}

fn run_cubic(
    g: &Graph,
    opts: &SimOptions,
    a0: VertexId,
    rng: &mut SimRng,
    traj: &mut Trajectory,
    summary: &mut SimSummary,
) -> Result<()> {
    let (mut a, mut b) = (a0, separated_start(g, a0, opts.b0)?);
    let coupler = CubicCoupler::new(g, opts.cache_capacity);
    let mut out = BlockOutcome::default();
    traj.push(&[a, b]);
    while traj.len() <= opts.ticks {
        traj.mark_block(traj.len() - 1);
        coupler.block_into(a, b, rng, &mut out)?;
        for (&x, &y) in out.alice_steps.iter().zip(&out.bob_steps) {
            traj.push(&[x, y]);
        }
        (a, b) = (*out.alice_steps.last().expect("T >= 1"), *out.bob_steps.last().expect("T >= 1"));
        *summary.scenarios.entry(out.scenario.expect("cubic blocks are classified")).or_default() += 1;
        *summary.block_lengths.entry(out.len()).or_default() += 1;
    }
    traj.mark_block(traj.len() - 1);
    summary.cache_hits = coupler.cache().hits();
    summary.cache_misses = coupler.cache().misses();
    Ok(())
}

fn run_squarefree(
    g: &Graph,
    opts: &SimOptions,
    a0: VertexId,
    rng: &mut SimRng,
    traj: &mut Trajectory,
    summary: &mut SimSummary,
) -> Result<()> {
    let (mut a, mut b) = (a0, separated_start(g, a0, opts.b0)?);
    let cache = SquareFreeCache::new(opts.cache_capacity);
    traj.push(&[a, b]);
    while traj.len() <= opts.ticks {
        traj.mark_block(traj.len() - 1);
        (a, b) = squarefree_step(g, Some(&cache), a, b, rng)?;
        traj.push(&[a, b]);
    }
    traj.mark_block(traj.len() - 1);
    summary.cache_hits = cache.hits();
    summary.cache_misses = cache.misses();
    Ok(())
}

fn run_regular(
    g: &Graph,
    opts: &SimOptions,
    a0: VertexId,
    rng: &mut SimRng,
    traj: &mut Trajectory,
    summary: &mut SimSummary,
) -> Result<()> {
    let state = regular_init(g, a0, opts.b0, rng)?;
    let mut engine = RegularEngine::new(g, state, opts.cache_capacity)?;
    traj.push(&[state.alice, state.bob]);
    while traj.len() <= opts.ticks {
        traj.mark_block(traj.len() - 1);
        for (x, y) in engine.advance(rng)? {
            traj.push(&[x, y]);
        }
    }
    traj.mark_block(traj.len() - 1);
    summary.rounds = engine.rounds();
    summary.cache_hits = engine.cache().hits();
    summary.cache_misses = engine.cache().misses();
    Ok(())
}
