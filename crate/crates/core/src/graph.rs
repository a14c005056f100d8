//! Immutable simple undirected graphs and the edge-list interchange format.
//!
//! Vertices are dense indices `0..n`. Adjacency lists are kept sorted so that
//! every iteration order in the crate is deterministic.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

/// Multigraph with loops, as produced by the configuration model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    /// One entry per matched half-edge pair, endpoints ordered `u <= v`.
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub n: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub regular_degree: Option<usize>,
    pub connected: bool,
}

/// Result of a capped breadth-first search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    AtLeast(usize),
}

impl Distance {
    pub fn is_at_least(self, k: usize) -> bool {
        match self {
            Distance::Exact(d) => d >= k,
            Distance::AtLeast(cap) => cap >= k,
        }
    }
}

/// An edge list parsed from text, with the number of duplicate lines dropped.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Loops and out-of-range endpoints are
    /// rejected; repeated edges are collapsed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::usage(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::usage(format!("loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == first).then_some(first)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    pub fn profile(&self) -> Profile {
        let min_degree = self.min_degree();
        let max_degree = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Profile {
            n: self.n(),
            edge_count: self.edge_count,
            min_degree,
            max_degree,
            regular_degree: (min_degree == max_degree).then_some(min_degree),
            connected: self.is_connected(),
        }
    }

    fn bfs_distances(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Breadth-first distance from `u` to `v`, giving up once it reaches `cap`.
    pub fn distance_capped(&self, u: VertexId, v: VertexId, cap: usize) -> Distance {
        if u == v {
            return if cap == 0 { Distance::AtLeast(0) } else { Distance::Exact(0) };
        }
        let mut seen = vec![false; self.n()];
        seen[u] = true;
        let mut frontier = vec![u];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            if depth >= cap {
                break;
            }
            let mut next = Vec::new();
            for &x in &frontier {
                for &w in self.neighbors(x) {
                    if w == v {
                        return Distance::Exact(depth);
                    }
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Distance::AtLeast(cap)
    }

    /// Sorted `N(u) ∩ N(v)`.
    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        if u == v {
            return Err(Error::usage("common_neighbors requires u != v"));
        }
        Ok(sorted_intersection(self.neighbors(u), self.neighbors(v)))
    }

    pub(crate) fn common_neighbor_count(&self, u: VertexId, v: VertexId) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        let (a, b) = (self.neighbors(u), self.neighbors(v));
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Canonical edge-list text: header, then edges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.edge_count);
        let _ = writeln!(out, "{} {}", self.n(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// SHA-256 of the canonical edge list, lowercase hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_edge_list().as_bytes()))
    }

    /// Vertices of a 2-regular connected graph in cyclic order starting at 0,
    /// heading first towards the smaller neighbor.
    pub fn cycle_order(&self) -> Option<Vec<VertexId>> {
        if self.regular_degree() != Some(2) || !self.is_connected() {
            return None;
        }
        let mut order = Vec::with_capacity(self.n());
        let (mut prev, mut cur) = (usize::MAX, 0);
        loop {
            order.push(cur);
            let next = self.neighbors(cur).iter().copied().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
            if cur == 0 {
                break;
            }
        }
        Some(order)
    }
}

pub(crate) fn sorted_intersection(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Multigraph {
    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Number of edge slots that repeat an earlier non-loop edge.
    pub fn multi_edge_count(&self) -> usize {
        let mut sorted: Vec<_> = self.edges.iter().filter(|(u, v)| u != v).copied().collect();
        sorted.sort_unstable();
        sorted.windows(2).filter(|w| w[0] == w[1]).count()
    }

    pub fn is_simple(&self) -> bool {
        self.loop_count() == 0 && self.multi_edge_count() == 0
    }

    /// Underlying simple graph: loops dropped, parallel edges merged.
    pub fn simple_support(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied().filter(|(u, v)| u != v))
            .expect("multigraph endpoints are in range")
    }
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{token}'"),
    })
}

fn split_pair(text: &str, line: usize) -> Result<(&str, &str)> {
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line,
            message: format!("expected two integers, found '{text}'"),
        }),
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let (n_tok, m_tok) = split_pair(header, header_line)?;
    let n = parse_usize(n_tok, header_line, "vertex count")?;
    let m = parse_usize(m_tok, header_line, "edge count")?;

    let mut adjacency = vec![Vec::new(); n];
    let mut seen = 0;
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        if text.trim().is_empty() {
            continue;
        }
        if seen == m {
            return Err(Error::Parse {
                line,
                message: format!("more than {m} edge lines"),
            });
        }
        let (a, b) = split_pair(text, line)?;
        let u = parse_usize(a, line, "vertex")?;
        let v = parse_usize(b, line, "vertex")?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("vertex out of range (n = {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("loop at line {line}"),
            });
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
        seen += 1;
    }
    if seen < m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {m} edge lines, found {seen}"),
        });
    }

    let mut half_edges = 0;
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
        half_edges += list.len();
    }
    let edge_count = half_edges / 2;
    Ok(ParsedGraph {
        graph: Graph { adjacency, edge_count },
        duplicates: m - edge_count,
    })
}
