//! Brute-force checks of the combinatorial lemmas behind the transports.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{MoverPair, RegularFrame};
use crate::rng::SimRng;
use crate::structure::contains_hd;

/// Largest `|𝒜|` (resp. `deg(a)`) swept exhaustively.
pub const MAX_EXHAUSTIVE_BITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma34Report {
    pub triple: (VertexId, VertexId, VertexId),
    pub d: usize,
    pub subsets_checked: u64,
    pub holds: bool,
    /// Non-empty subset minimizing `(d − 1)|cmp(𝒜₀)| − d|𝒜₀|`.
    pub worst_subset: Vec<MoverPair>,
    /// That minimum; the inequality holds iff it is non-negative.
    pub worst_margin: i64,
}

fn lemma34_margin(d: usize, subset_size: u32, cmp_size: u32) -> i64 {
    (d as i64 - 1) * cmp_size as i64 - d as i64 * subset_size as i64
}

fn subset_of(frame: &RegularFrame, mask: u64) -> Vec<MoverPair> {
    (0..frame.movers.len()).filter(|&i| mask >> i & 1 == 1).map(|i| frame.movers[i]).collect()
}

/// Checks `d·|𝒜₀| ≤ (d − 1)·|cmp(𝒜₀)|` for every subset `𝒜₀ ⊆ 𝒜`.
pub fn lemma34_oracle(g: &Graph, a: VertexId, b: VertexId, e: VertexId) -> Result<Lemma34Report> {
    let frame = RegularFrame::new(g, a, b, e)?;
    let bits = frame.movers.len();
    if bits > MAX_EXHAUSTIVE_BITS {
        return Err(Error::usage(format!(
            "2^{bits} subsets exceed the exhaustive cap of 2^{MAX_EXHAUSTIVE_BITS}; use lemma34_sampled"
        )));
    }
    let masks = frame.compatibility_masks(g);
    // cmp of S from cmp of S without its lowest element
    let mut cmp = vec![0u64; 1 << bits];
    let mut worst = (i64::MAX, 0u64);
    for s in 1u64..1 << bits {
        let low = s.trailing_zeros() as usize;
        cmp[s as usize] = cmp[(s & (s - 1)) as usize] | masks[low];
        let margin = lemma34_margin(frame.d, s.count_ones(), cmp[s as usize].count_ones());
        if margin < worst.0 {
            worst = (margin, s);
        }
    }
    Ok(Lemma34Report {
        triple: (a, b, e),
        d: frame.d,
        subsets_checked: 1 << bits,
        holds: worst.0 >= 0,
        worst_subset: subset_of(&frame, worst.1),
        worst_margin: worst.0,
    })
}

/// Random-subset variant for frames too large to sweep.
pub fn lemma34_sampled(g: &Graph, a: VertexId, b: VertexId, e: VertexId, samples: u64, seed: u64) -> Result<Lemma34Report> {
    let frame = RegularFrame::new(g, a, b, e)?;
    if frame.others.len() > 64 {
        return Err(Error::usage("sampled mode needs d² <= 64"));
    }
    let masks = frame.compatibility_masks(g);
    let mut rng = SimRng::new(seed);
    let mut worst = (i64::MAX, Vec::new());
    for _ in 0..samples {
        let chosen: Vec<usize> = (0..masks.len()).filter(|_| rng.coin()).collect();
        if chosen.is_empty() {
            continue;
        }
        let cmp = chosen.iter().fold(0u64, |acc, &i| acc | masks[i]);
        let margin = lemma34_margin(frame.d, chosen.len() as u32, cmp.count_ones());
        if margin < worst.0 {
            worst = (margin, chosen);
        }
    }
    Ok(Lemma34Report {
        triple: (a, b, e),
        d: frame.d,
        subsets_checked: samples,
        holds: worst.0 >= 0,
        worst_subset: worst.1.into_iter().map(|i| frame.movers[i]).collect(),
        worst_margin: if worst.0 == i64::MAX { 0 } else { worst.0 },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma42Report {
    pub pair: (VertexId, VertexId),
    /// `|N(a)|`, `|N(b)|`.
    pub k: usize,
    pub l: usize,
    pub subsets_checked: u64,
    pub holds: bool,
    /// Non-empty `𝒩 ⊆ N(a)` minimizing `k|cmp(𝒩)| − ℓ|𝒩|`.
    pub worst_subset: Vec<VertexId>,
    pub worst_margin: i64,
    /// `|cmp(N(a))|`.
    pub full_cmp: usize,
}

/// Checks `|cmp(𝒩)| ≥ (ℓ/k)|𝒩|` for every `𝒩 ⊆ N(a)`, computing `cmp`
/// straight from adjacency.
pub fn lemma42_oracle(g: &Graph, a: VertexId, b: VertexId) -> Result<Lemma42Report> {
    if a == b || g.has_edge(a, b) {
        return Err(Error::usage(format!("pair ({a}, {b}) must be distinct and non-adjacent")));
    }
    let na = g.neighbors(a);
    let nb = g.neighbors(b);
    if na.len() > MAX_EXHAUSTIVE_BITS {
        return Err(Error::usage(format!("deg({a}) = {} exceeds the cap of {MAX_EXHAUSTIVE_BITS}", na.len())));
    }
    let (k, l) = (na.len() as i64, nb.len() as i64);
    let mut worst = (i64::MAX, 0u64);
    let mut full_cmp = 0;
    for s in 1u64..1 << na.len() {
        let members: Vec<VertexId> = (0..na.len()).filter(|&i| s >> i & 1 == 1).map(|i| na[i]).collect();
        let cmp = nb
            .iter()
            .filter(|&&y| members.iter().any(|&x| y != x && !g.has_edge(x, y)))
            .count();
        let margin = k * cmp as i64 - l * members.len() as i64;
        if margin < worst.0 {
            worst = (margin, s);
        }
        if s == (1 << na.len()) - 1 {
            full_cmp = cmp;
        }
    }
    Ok(Lemma42Report {
        pair: (a, b),
        k: na.len(),
        l: nb.len(),
        subsets_checked: 1 << na.len(),
        holds: worst.0 >= 0,
        worst_subset: (0..na.len()).filter(|&i| worst.1 >> i & 1 == 1).map(|i| na[i]).collect(),
        worst_margin: worst.0,
        full_cmp,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma31Report {
    /// No copy of `H_d`.
    pub no_hd: bool,
    /// No two vertices with equal closed neighborhoods.
    pub distinct_closed_neighborhoods: bool,
    /// `N(a) \ (N(b) ∪ {b})` is non-empty whenever `N(a) ≠ N(b)`.
    pub nonempty_differences: bool,
    pub agree: bool,
}

/// Evaluates the three equivalent forms of `H_d`-freeness independently.
pub fn lemma31_equivalence(g: &Graph, d: usize) -> Result<Lemma31Report> {
    if g.regular_degree() != Some(d) {
        return Err(Error::usage(format!("graph is not {d}-regular")));
    }
    let no_hd = contains_hd(g, d).is_none();
    let open: Vec<BTreeSet<VertexId>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let closed: Vec<BTreeSet<VertexId>> = g
        .vertices()
        .map(|v| open[v].iter().copied().chain([v]).collect())
        .collect();
    let pairs = || g.vertices().flat_map(|u| g.vertices().filter(move |&v| v != u).map(move |v| (u, v)));
    let distinct = pairs().all(|(u, v)| closed[u] != closed[v]);
    let nonempty = pairs()
        .filter(|&(u, v)| open[u] != open[v])
        .all(|(u, v)| open[u].iter().any(|x| *x != v && !open[v].contains(x)));
    Ok(Lemma31Report {
        no_hd,
        distinct_closed_neighborhoods: distinct,
        nonempty_differences: nonempty,
        agree: no_hd == distinct && distinct == nonempty,
    })
}
