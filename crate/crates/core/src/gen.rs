//! Deterministic graph families and the configuration model.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, Multigraph, VertexId};
use crate::rng::SimRng;

pub const DEFAULT_REJECTION_BUDGET: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Complete,
    CompleteBipartite,
    Petersen,
    Heawood,
    Circulant,
    ConfigurationModel,
    RandomRegular,
}

impl Family {
    pub fn is_random(self) -> bool {
        matches!(self, Family::ConfigurationModel | Family::RandomRegular)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "complete_bipartite" => Family::CompleteBipartite,
            "petersen" => Family::Petersen,
            "heawood" => Family::Heawood,
            "circulant" => Family::Circulant,
            "configuration_model" => Family::ConfigurationModel,
            "random_regular" => Family::RandomRegular,
            other => return Err(Error::usage(format!("unknown family '{other}'"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::CompleteBipartite => "complete_bipartite",
            Family::Petersen => "petersen",
            Family::Heawood => "heawood",
            Family::Circulant => "circulant",
            Family::ConfigurationModel => "configuration_model",
            Family::RandomRegular => "random_regular",
        })
    }
}

/// A request for one graph. Parameters unused by the family are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    /// Vertex count; for `complete_bipartite` the size of the first part.
    pub n: usize,
    /// Degree for random families; size of the second part for `complete_bipartite`.
    pub d: usize,
    /// Circulant offsets.
    pub offsets: Vec<usize>,
    pub seed: u64,
    pub connected: bool,
    pub rejection_budget: u64,
}

impl GenSpec {
    pub fn new(family: Family) -> Self {
        GenSpec {
            family,
            n: 0,
            d: 0,
            offsets: Vec::new(),
            seed: 0,
            connected: false,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
        }
    }
}

/// Graph plus the number of rejected configuration-model draws behind it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub rejections: u64,
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    match spec.family {
        Family::RandomRegular => random_regular_simple(
            spec.n,
            spec.d,
            spec.seed,
            spec.connected,
            spec.rejection_budget,
        ),
        Family::ConfigurationModel => {
            let mg = configuration_model(spec.n, spec.d, spec.seed)?;
            Ok(Generated {
                graph: mg.simple_support(),
                rejections: 0,
            })
        }
        _ => Ok(Generated {
            graph: generate_deterministic(spec)?,
            rejections: 0,
        }),
    }
}

pub fn generate_deterministic(spec: &GenSpec) -> Result<Graph> {
    match spec.family {
        Family::Cycle => cycle(spec.n),
        Family::Complete => complete(spec.n),
        Family::CompleteBipartite => complete_bipartite(spec.n, spec.d),
        Family::Petersen => Ok(petersen()),
        Family::Heawood => Ok(heawood()),
        Family::Circulant => circulant(spec.n, &spec.offsets),
        f => Err(Error::usage(format!("{f} is a random family"))),
    }
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::usage(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::usage(format!("complete graph needs n >= 2, got {n}")));
    }
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `K_{p,q}` with parts `0..p` and `p..p+q`.
pub fn complete_bipartite(p: usize, q: usize) -> Result<Graph> {
    if p == 0 || q == 0 {
        return Err(Error::usage("complete_bipartite needs both parts non-empty"));
    }
    Graph::from_edges(p + q, (0..p).flat_map(|u| (p..p + q).map(move |v| (u, v))))
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i ~ i+5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes)).expect("static edge list")
}

/// Incidence graph of the Fano plane: 14 vertices, cubic, girth 6.
pub fn heawood() -> Graph {
    // LCF notation [5, -5]^7.
    let n = 14;
    let ring = (0..n).map(|i| (i, (i + 1) % n));
    let chords = (0..n).step_by(2).map(|i| (i, (i + 5) % n));
    Graph::from_edges(n, ring.chain(chords)).expect("static edge list")
}

/// Two diamonds (`K_4` minus an edge) joined at their degree-2 vertices.
///
/// In the first diamond `a = 0`, `b = 1` share the adjacent common
/// neighbors `2, 3`; bridges `0 - 4` and `1 - 5` lead to the second.
pub fn two_diamonds() -> Graph {
    let diamond = |o: VertexId| [(o, o + 2), (o, o + 3), (o + 1, o + 2), (o + 1, o + 3), (o + 2, o + 3)];
    let edges = diamond(0).into_iter().chain(diamond(4)).chain([(0, 4), (1, 5)]);
    Graph::from_edges(8, edges).expect("static edge list")
}

/// Two copies of the `K_{2,2}` gadget `a - {a1, a2} = {b1, b2} - b`, joined
/// `a - a'` and `b - b'`. The pair `(0, 5)` has `a1, a2 = 1, 2` and
/// `b1, b2 = 3, 4`, with remaining neighbors `6` and `11`.
pub fn twin_k22() -> Graph {
    let gadget = |o: VertexId| {
        [(o, o + 1), (o, o + 2), (o + 1, o + 3), (o + 1, o + 4), (o + 2, o + 3), (o + 2, o + 4), (o + 3, o + 5), (o + 4, o + 5)]
    };
    let edges = gadget(0).into_iter().chain(gadget(6)).chain([(0, 6), (5, 11)]);
    Graph::from_edges(12, edges).expect("static edge list")
}

/// Circulant `C_n(S)`: `i ~ i ± s (mod n)` for each offset `s`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(Error::usage(format!("circulant needs n >= 3, got {n}")));
    }
    if offsets.is_empty() || offsets.iter().any(|&s| s == 0 || s % n == 0) {
        return Err(Error::usage("circulant offsets must be non-zero modulo n"));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|i| offsets.iter().map(move |&s| (i, (i + s) % n)))
        .collect();
    Graph::from_edges(n, edges)
}

/// Uniform perfect matching of the `n·d` half-edges, via Fisher–Yates.
pub fn configuration_model(n: usize, d: usize, seed: u64) -> Result<Multigraph> {
    let mut rng = SimRng::new(seed);
    configuration_model_with(n, d, &mut rng)
}

pub fn configuration_model_with(n: usize, d: usize, rng: &mut SimRng) -> Result<Multigraph> {
    if d == 0 {
        return Err(Error::usage("configuration model needs d >= 1"));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::usage(format!("n·d = {} is odd", n * d)));
    }
    let mut slots: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    rng.shuffle(&mut slots);
    let edges = slots
        .chunks_exact(2)
        .map(|pair| (pair[0].min(pair[1]), pair[0].max(pair[1])))
        .collect();
    Ok(Multigraph { n, edges })
}

/// Rejection-samples the configuration model until it is simple (and
/// connected, if requested).
pub fn random_regular_simple(
    n: usize,
    d: usize,
    seed: u64,
    connected_required: bool,
    budget: u64,
) -> Result<Generated> {
    if (n * d) % 2 == 1 {
        return Err(Error::usage(format!("n·d = {} is odd", n * d)));
    }
    if d >= n {
        return Err(Error::usage(format!("d = {d} must be below n = {n}")));
    }
    let mut rng = SimRng::new(seed);
    for attempt in 0..budget {
        let mg = configuration_model_with(n, d, &mut rng)?;
        if !mg.is_simple() {
            continue;
        }
        let graph = mg.simple_support();
        if connected_required && !graph.is_connected() {
            continue;
        }
        return Ok(Generated {
            graph,
            rejections: attempt,
        });
    }
    Err(Error::Resource(format!(
        "no simple{} {d}-regular graph on {n} vertices within the rejection budget of {budget} attempts",
        if connected_required { " connected" } else { "" }
    )))
}
