//! Compatible moves, `cmp` sets, and the integer transports that realize
//! Hall's condition for the regular and square-free couplings.
//!
//! Regular case, for a triple `(a, b, e)`: the mover (at `a`) picks a two-step
//! plan `(a', a'')` with `a' ∈ N(a) \ {e}`; the other walker (at `b`) picks a
//! step and its next excluded vertex `(b', e')`. Plans are indexed
//! `i·d + k` and `j·d + ℓ`, with neighbors in ascending order:
//! `a_i` is the `i`-th element of `N(a) \ {e}`, `a_i^k` the `k`-th of
//! `N(a_i)`, and likewise for `b_j`, `b_j^ℓ`.

mod cache;
mod flow;

pub use cache::{SolutionCache, DEFAULT_CACHE_CAPACITY};
pub use flow::{solve_transport, HallViolation, TransportMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoverPair {
    pub first_step: VertexId,
    pub second_step: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OtherPair {
    pub step: VertexId,
    pub next_excluded: VertexId,
}

/// `b' ∉ {a', a''}` and (`a'' ∈ N(b')` ⇒ `e' = a''`).
pub fn compatible(g: &Graph, mover: MoverPair, other: OtherPair) -> bool {
    other.step != mover.first_step
        && other.step != mover.second_step
        && (!g.has_edge(mover.second_step, other.step) || other.next_excluded == mover.second_step)
}

/// The plan sets for one `(a, b, e)` triple of a regular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularFrame {
    pub a: VertexId,
    pub b: VertexId,
    pub e: VertexId,
    pub d: usize,
    /// `𝒜`, indexed `i·d + k`; `d(d − 1)` entries.
    pub movers: Vec<MoverPair>,
    /// `ℬ`, indexed `j·d + ℓ`; `d²` entries.
    pub others: Vec<OtherPair>,
}

impl RegularFrame {
    pub fn new(g: &Graph, a: VertexId, b: VertexId, e: VertexId) -> Result<Self> {
        if a == b {
            return Err(Error::usage(format!("mover and other coincide at {a}")));
        }
        if !g.has_edge(a, e) {
            return Err(Error::usage(format!("excluded vertex {e} is not a neighbor of {a}")));
        }
        if g.has_edge(a, b) && e != b {
            return Err(Error::usage(format!("{b} is adjacent to {a}, so the excluded vertex must be {b}, not {e}")));
        }
        let d = g.degree(a);
        let uniform = |v: VertexId| g.degree(v) == d;
        let mover_firsts: Vec<VertexId> = g.neighbors(a).iter().copied().filter(|&v| v != e).collect();
        if d < 2 || !uniform(b) || !mover_firsts.iter().all(|&v| uniform(v)) || !g.neighbors(b).iter().all(|&v| uniform(v)) {
            return Err(Error::usage(format!("triple ({a}, {b}, {e}) does not sit in a {d}-regular neighborhood")));
        }
        let movers = mover_firsts
            .iter()
            .flat_map(|&first| g.neighbors(first).iter().map(move |&second| MoverPair { first_step: first, second_step: second }))
            .collect();
        let others = g
            .neighbors(b)
            .iter()
            .flat_map(|&step| g.neighbors(step).iter().map(move |&next| OtherPair { step, next_excluded: next }))
            .collect();
        Ok(RegularFrame { a, b, e, d, movers, others })
    }

    /// For each mover plan, the set of compatible other plans as a bitmask
    /// over `ℬ` indices. Requires `d² ≤ 64`.
    pub fn compatibility_masks(&self, g: &Graph) -> Vec<u64> {
        assert!(self.others.len() <= 64, "bitmask needs |ℬ| <= 64");
        self.movers
            .iter()
            .map(|&m| {
                self.others
                    .iter()
                    .enumerate()
                    .filter(|&(_, &o)| compatible(g, m, o))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect()
    }
}

/// `{ (b', e') ∈ ℬ : some plan in `subset` is compatible }`, in `ℬ` order.
pub fn cmp_regular(g: &Graph, a: VertexId, b: VertexId, e: VertexId, subset: &[MoverPair]) -> Result<Vec<OtherPair>> {
    let frame = RegularFrame::new(g, a, b, e)?;
    Ok(frame
        .others
        .iter()
        .copied()
        .filter(|&o| subset.iter().any(|&m| compatible(g, m, o)))
        .collect())
}

fn check_separated(g: &Graph, a: VertexId, b: VertexId) -> Result<()> {
    if a == b || g.has_edge(a, b) {
        return Err(Error::usage(format!("pair ({a}, {b}) must be distinct and non-adjacent")));
    }
    Ok(())
}

/// `{ b' ∈ N(b) : ∃ a' ∈ subset with b' ∉ {a'} ∪ N(a') }`.
pub fn cmp_squarefree(g: &Graph, a: VertexId, b: VertexId, subset: &[VertexId]) -> Result<Vec<VertexId>> {
    check_separated(g, a, b)?;
    if let Some(&x) = subset.iter().find(|&&x| !g.has_edge(a, x)) {
        return Err(Error::usage(format!("{x} is not a neighbor of {a}")));
    }
    Ok(g.neighbors(b)
        .iter()
        .copied()
        .filter(|&bp| subset.iter().any(|&ap| bp != ap && !g.has_edge(ap, bp)))
        .collect())
}

/// Transport over `𝒜 × ℬ` with row sums `d` and column sums `d − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularTransport {
    pub frame: RegularFrame,
    pub matrix: TransportMatrix,
}

impl RegularTransport {
    /// `m(i, j, k, ℓ)` with `i < d − 1` and `j, k, ℓ < d`.
    pub fn m(&self, i: usize, j: usize, k: usize, l: usize) -> u32 {
        let d = self.frame.d;
        self.matrix.get(i * d + k, j * d + l)
    }

    pub fn total(&self) -> u64 {
        self.matrix.total()
    }

    /// Row/column identities, the grand total `d²(d − 1)`, and support on
    /// compatible cells.
    pub fn certify(&self, g: &Graph) -> Result<()> {
        let d = self.frame.d as u64;
        if self.matrix.supplies().iter().any(|&s| s as u64 != d) || self.matrix.demands().iter().any(|&s| s as u64 != d - 1) {
            return Err(Error::Certification("regular transport margins are not (d, d − 1)".into()));
        }
        self.matrix.check_margins()?;
        if self.total() != d * d * (d - 1) {
            return Err(Error::Certification(format!("total {} != d²(d − 1)", self.total())));
        }
        self.matrix
            .check_support(|r, c| compatible(g, self.frame.movers[r], self.frame.others[c]))
    }
}

pub fn build_regular_transport(g: &Graph, a: VertexId, b: VertexId, e: VertexId) -> Result<RegularTransport> {
    let frame = RegularFrame::new(g, a, b, e)?;
    let d = frame.d as u32;
    let allowed: Vec<Vec<bool>> = frame
        .movers
        .iter()
        .map(|&m| frame.others.iter().map(|&o| compatible(g, m, o)).collect())
        .collect();
    let supplies = vec![d; frame.movers.len()];
    let demands = vec![d - 1; frame.others.len()];
    match solve_transport(&supplies, &demands, &allowed) {
        Ok(matrix) => Ok(RegularTransport { frame, matrix }),
        Err(Error::Infeasible { violation, .. }) => Err(Error::Infeasible {
            context: format!("hypothesis violated (H_{d} present?) at (a, b, e) = ({a}, {b}, {e})"),
            violation,
        }),
        Err(other) => Err(other),
    }
}

/// One-step transport between the neighborhoods of a separated pair.
///
/// Rows belong to `mover_side`, the endpoint with the larger degree `k`;
/// columns to the other endpoint, degree `ℓ`. Row sums are `ℓ`, column sums `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeTransport {
    pub a: VertexId,
    pub b: VertexId,
    /// True when `deg(b) > deg(a)`, so rows are `N(b)` and columns `N(a)`.
    pub swapped: bool,
    pub row_vertices: Vec<VertexId>,
    pub col_vertices: Vec<VertexId>,
    pub matrix: TransportMatrix,
}

impl SquareFreeTransport {
    pub fn certify(&self, g: &Graph) -> Result<()> {
        let (k, l) = (self.row_vertices.len() as u32, self.col_vertices.len() as u32);
        if self.matrix.supplies().iter().any(|&s| s != l) || self.matrix.demands().iter().any(|&s| s != k) {
            return Err(Error::Certification("square-free transport margins are not (ℓ, k)".into()));
        }
        self.matrix.check_margins()?;
        self.matrix.check_support(|r, c| {
            let (x, y) = (self.row_vertices[r], self.col_vertices[c]);
            x != y && !g.has_edge(x, y)
        })
    }
}

pub fn build_squarefree_transport(g: &Graph, a: VertexId, b: VertexId) -> Result<SquareFreeTransport> {
    check_separated(g, a, b)?;
    if g.min_degree() < 3 {
        return Err(Error::usage(format!("minimum degree {} < 3", g.min_degree())));
    }
    let swapped = g.degree(b) > g.degree(a);
    let (rows_of, cols_of) = if swapped { (b, a) } else { (a, b) };
    let row_vertices = g.neighbors(rows_of).to_vec();
    let col_vertices = g.neighbors(cols_of).to_vec();
    let (k, l) = (row_vertices.len() as u32, col_vertices.len() as u32);
    let allowed: Vec<Vec<bool>> = row_vertices
        .iter()
        .map(|&x| col_vertices.iter().map(|&y| x != y && !g.has_edge(x, y)).collect())
        .collect();
    match solve_transport(&vec![l; k as usize], &vec![k; l as usize], &allowed) {
        Ok(matrix) => Ok(SquareFreeTransport {
            a,
            b,
            swapped,
            row_vertices,
            col_vertices,
            matrix,
        }),
        Err(Error::Infeasible { violation, .. }) => Err(Error::Infeasible {
            context: format!("hypothesis violated (square present?) at pair ({a}, {b})"),
            violation,
        }),
        Err(other) => Err(other),
    }
}

/// A bijection `σ: N(a) → N(b)` with `σ(a') ∉ {a'} ∪ N(a')`, as the list of
/// images of `N(a)` in ascending order.
pub fn one_step_matching(g: &Graph, a: VertexId, b: VertexId) -> Result<Vec<VertexId>> {
    check_separated(g, a, b)?;
    let na = g.neighbors(a);
    let nb = g.neighbors(b);
    if na.len() != nb.len() {
        return Err(Error::usage(format!("degrees of {a} and {b} differ")));
    }
    let allowed: Vec<Vec<bool>> = na
        .iter()
        .map(|&x| nb.iter().map(|&y| x != y && !g.has_edge(x, y)).collect())
        .collect();
    let ones = vec![1; na.len()];
    let matrix = solve_transport(&ones, &ones, &allowed).map_err(|err| match err {
        Error::Infeasible { violation, .. } => Error::Infeasible {
            context: format!("scenario hypothesis violated at pair ({a}, {b})"),
            violation,
        },
        other => other,
    })?;
    Ok((0..na.len())
        .map(|r| nb[matrix.row(r).iter().position(|&x| x == 1).expect("unit row sum")])
        .collect())
}
