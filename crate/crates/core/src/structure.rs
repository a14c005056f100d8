//! Forbidden-subgraph detectors, the cubic scenario classifier, and the
//! verdict on which coupling engine applies to a graph.
//!
//! Every detector scans candidates in lexicographic order and returns the
//! first witness it finds, so results are stable across runs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, VertexId};

/// An edge `{a, b}` whose endpoints share at least `d − 1` neighbors, i.e. a
/// copy of `H_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdWitness {
    pub a: VertexId,
    pub b: VertexId,
    pub common: Vec<VertexId>,
}

/// `K_{2,3}` on `{a, b} × common` plus the edge `{c1, c2}` inside `common`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H3TildeWitness {
    pub a: VertexId,
    pub b: VertexId,
    pub c1: VertexId,
    pub c2: VertexId,
}

/// The 4-cycle `u - c1 - v - c2 - u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareWitness {
    pub u: VertexId,
    pub c1: VertexId,
    pub v: VertexId,
    pub c2: VertexId,
}

/// `a1, a2 ∈ N(a)` and `b1, b2 ∈ N(b)`, all distinct, with every `a_i ~ b_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K22Witness {
    pub a1: VertexId,
    pub a2: VertexId,
    pub b1: VertexId,
    pub b2: VertexId,
}

pub fn contains_hd(g: &Graph, d: usize) -> Option<HdWitness> {
    assert!(d >= 2, "H_d is defined for d >= 2");
    g.edges().find_map(|(a, b)| {
        let common = g.common_neighbors(a, b).ok()?;
        (common.len() + 1 >= d).then_some(HdWitness { a, b, common })
    })
}

/// Unordered pairs with identical closed neighborhoods.
pub fn closed_neighborhood_duplicates(g: &Graph) -> Vec<(VertexId, VertexId)> {
    // N[a] = N[b] forces b ∈ N(a), so only edges need checking.
    g.edges()
        .filter(|&(a, b)| g.degree(a) == g.degree(b) && g.common_neighbor_count(a, b) + 1 == g.degree(a))
        .collect()
}

pub fn contains_h3tilde(g: &Graph) -> Option<H3TildeWitness> {
    for a in g.vertices() {
        for b in a + 1..g.n() {
            if g.common_neighbor_count(a, b) < 3 {
                continue;
            }
            let common = g.common_neighbors(a, b).ok()?;
            for (i, &c1) in common.iter().enumerate() {
                if let Some(&c2) = common[i + 1..].iter().find(|&&c2| g.has_edge(c1, c2)) {
                    return Some(H3TildeWitness { a, b, c1, c2 });
                }
            }
        }
    }
    None
}

/// `None` when the graph has no 4-cycle, otherwise the first one found.
pub fn is_square_free(g: &Graph) -> Option<SquareWitness> {
    for u in g.vertices() {
        for v in u + 1..g.n() {
            if g.common_neighbor_count(u, v) >= 2 {
                let common = g.common_neighbors(u, v).ok()?;
                return Some(SquareWitness {
                    u,
                    c1: common[0],
                    v,
                    c2: common[1],
                });
            }
        }
    }
    None
}

pub fn admits_k22(g: &Graph, a: VertexId, b: VertexId) -> Result<Option<K22Witness>> {
    if a == b || g.has_edge(a, b) {
        return Err(Error::usage(format!("admits_k22 needs distinct non-adjacent vertices, got ({a}, {b})")));
    }
    let na = g.neighbors(a);
    let nb = g.neighbors(b);
    for (i, &a1) in na.iter().enumerate() {
        for &a2 in &na[i + 1..] {
            let shared: Vec<_> = nb
                .iter()
                .copied()
                .filter(|&x| x != a1 && x != a2 && g.has_edge(a1, x) && g.has_edge(a2, x))
                .collect();
            if shared.len() >= 2 {
                return Ok(Some(K22Witness {
                    a1,
                    a2,
                    b1: shared[0],
                    b2: shared[1],
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioTag {
    S1,
    S2,
    S3a,
    S3b,
    S4,
    S5,
    S6,
}

impl ScenarioTag {
    pub const ALL: [ScenarioTag; 7] = [
        ScenarioTag::S1,
        ScenarioTag::S2,
        ScenarioTag::S3a,
        ScenarioTag::S3b,
        ScenarioTag::S4,
        ScenarioTag::S5,
        ScenarioTag::S6,
    ];
}

impl fmt::Display for ScenarioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Local configuration of a non-adjacent pair `(a, b)` in a cubic graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioClass {
    /// Distance at least 4.
    S1,
    /// `N(a) = N(b)`.
    S2 { common: [VertexId; 3] },
    /// Two common neighbors, not adjacent.
    S3a { c1: VertexId, c2: VertexId },
    /// Two common neighbors, adjacent; `c1 < c2`.
    S3b { c1: VertexId, c2: VertexId },
    /// One common neighbor, no `K_{2,2}`.
    S4 { c: VertexId },
    /// Distance exactly 3, no `K_{2,2}`.
    S5,
    /// The pair admits `K_{2,2}`; `ca`, `cb` are the remaining neighbors.
    S6 { k22: K22Witness, ca: VertexId, cb: VertexId },
}

impl ScenarioClass {
    pub fn tag(&self) -> ScenarioTag {
        match self {
            ScenarioClass::S1 => ScenarioTag::S1,
            ScenarioClass::S2 { .. } => ScenarioTag::S2,
            ScenarioClass::S3a { .. } => ScenarioTag::S3a,
            ScenarioClass::S3b { .. } => ScenarioTag::S3b,
            ScenarioClass::S4 { .. } => ScenarioTag::S4,
            ScenarioClass::S5 => ScenarioTag::S5,
            ScenarioClass::S6 { .. } => ScenarioTag::S6,
        }
    }
}

pub fn classify_scenario(g: &Graph, a: VertexId, b: VertexId) -> Result<ScenarioClass> {
    if a == b || g.has_edge(a, b) {
        return Err(Error::usage(format!("scenario pair ({a}, {b}) must be distinct and non-adjacent")));
    }
    if g.degree(a) != 3 || g.degree(b) != 3 {
        return Err(Error::usage(format!("scenario pair ({a}, {b}) must sit in a cubic graph")));
    }
    let common = g.common_neighbors(a, b)?;
    match common[..] {
        [c1, c2, c3] => {
            if g.has_edge(c1, c2) || g.has_edge(c1, c3) || g.has_edge(c2, c3) {
                return Err(Error::usage(format!("pair ({a}, {b}) spans a copy of H̃_3")));
            }
            Ok(ScenarioClass::S2 { common: [c1, c2, c3] })
        }
        [c1, c2] if g.has_edge(c1, c2) => Ok(ScenarioClass::S3b { c1, c2 }),
        [c1, c2] => Ok(ScenarioClass::S3a { c1, c2 }),
        _ => {
            if let Some(k22) = admits_k22(g, a, b)? {
                let other = |v: VertexId, x: VertexId, y: VertexId| {
                    g.neighbors(v).iter().copied().find(|&w| w != x && w != y).expect("cubic vertex")
                };
                return Ok(ScenarioClass::S6 {
                    k22,
                    ca: other(a, k22.a1, k22.a2),
                    cb: other(b, k22.b1, k22.b2),
                });
            }
            if let [c] = common[..] {
                return Ok(ScenarioClass::S4 { c });
            }
            match g.distance_capped(a, b, 4) {
                Distance::Exact(3) => Ok(ScenarioClass::S5),
                Distance::Exact(d) => Err(Error::Internal(format!(
                    "pair ({a}, {b}) at distance {d} with no common neighbor"
                ))),
                Distance::AtLeast(_) => Ok(ScenarioClass::S1),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Cycle,
    Cubic,
    Regular,
    Squarefree,
    None,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Cycle => "cycle",
            EngineKind::Cubic => "cubic",
            EngineKind::Regular => "regular",
            EngineKind::Squarefree => "squarefree",
            EngineKind::None => "none",
        })
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => EngineKind::Cycle,
            "cubic" => EngineKind::Cubic,
            "regular" => EngineKind::Regular,
            "squarefree" => EngineKind::Squarefree,
            "none" => EngineKind::None,
            other => return Err(Error::usage(format!("unknown engine '{other}'"))),
        })
    }
}

/// Which construction applies to a graph, and why not when none does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Preferred engine.
    pub engine: EngineKind,
    /// Every engine whose hypotheses hold, in preference order.
    pub applicable: Vec<EngineKind>,
    pub degree: Option<usize>,
    pub obstruction: Option<String>,
}

impl Verdict {
    pub fn admits(&self, engine: EngineKind) -> bool {
        self.applicable.contains(&engine)
    }
}

pub fn admissibility_verdict(g: &Graph) -> Result<Verdict> {
    if g.n() < 2 {
        return Err(Error::usage("verdict needs at least two vertices"));
    }
    if !g.is_connected() {
        return Err(Error::usage("graph is disconnected"));
    }
    let degree = g.regular_degree();
    let mut applicable = Vec::new();
    let mut reasons = Vec::new();

    match degree {
        Some(2) => applicable.push(EngineKind::Cycle),
        Some(d) if d >= 3 => {
            let forbidden = if d == 3 {
                contains_h3tilde(g).map(|w| format!("contains H̃_3 at pair ({}, {}) with edge ({}, {})", w.a, w.b, w.c1, w.c2))
            } else {
                contains_hd(g, d).map(|w| format!("contains H_{d} at pair ({}, {})", w.a, w.b))
            };
            match forbidden {
                Some(reason) => reasons.push(reason),
                None if g.n() < 5 => reasons.push(format!("n = {} < 5", g.n())),
                None => applicable.push(if d == 3 { EngineKind::Cubic } else { EngineKind::Regular }),
            }
        }
        Some(d) => reasons.push(format!("{d}-regular")),
        None => reasons.push("not regular".to_string()),
    }

    let min_degree = g.min_degree();
    match is_square_free(g) {
        Some(sq) => reasons.push(format!("contains C4 {}-{}-{}-{}", sq.u, sq.c1, sq.v, sq.c2)),
        None if min_degree < 3 => reasons.push(format!("minimum degree {min_degree} < 3")),
        None => applicable.push(EngineKind::Squarefree),
    }

    let engine = applicable.first().copied().unwrap_or(EngineKind::None);
    Ok(Verdict {
        engine,
        applicable,
        degree,
        obstruction: (engine == EngineKind::None).then(|| reasons.join("; ")),
    })
}
