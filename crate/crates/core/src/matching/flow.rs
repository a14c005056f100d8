//! Integer transportation by maximum flow.
//!
//! Rows are supply nodes, columns demand nodes. Allowed cells get unbounded
//! capacity, so a max flow saturating every supply is exactly an integer
//! matrix with the prescribed margins. When none exists, the residual graph's
//! source side names a row set whose supply exceeds the demand of its
//! neighborhood.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows whose total supply exceeds the total demand of every column they may
/// ship to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolation {
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub supply: u64,
    pub demand: u64,
}

impl fmt::Display for HallViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows {:?} supply {} but their columns {:?} demand only {}",
            self.rows, self.supply, self.columns, self.demand
        )
    }
}

/// Nonnegative integer matrix with the margins it was solved for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<u32>,
    supplies: Vec<u32>,
    demands: Vec<u32>,
}

impl TransportMatrix {
    pub fn from_cells(cells: Vec<Vec<u32>>, supplies: Vec<u32>, demands: Vec<u32>) -> Self {
        let rows = cells.len();
        let cols = demands.len();
        assert_eq!(rows, supplies.len());
        assert!(cells.iter().all(|r| r.len() == cols));
        TransportMatrix {
            rows,
            cols,
            cells: cells.into_iter().flatten().collect(),
            supplies,
            demands,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        self.cells[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn supplies(&self) -> &[u32] {
        &self.supplies
    }

    pub fn demands(&self) -> &[u32] {
        &self.demands
    }

    pub fn row_sum(&self, row: usize) -> u64 {
        self.row(row).iter().map(|&x| x as u64).sum()
    }

    pub fn col_sum(&self, col: usize) -> u64 {
        (0..self.rows).map(|r| self.get(r, col) as u64).sum()
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().map(|&x| x as u64).sum()
    }

    /// Checks every row and column sum against the target margins.
    pub fn check_margins(&self) -> Result<()> {
        for r in 0..self.rows {
            let s = self.row_sum(r);
            if s != self.supplies[r] as u64 {
                return Err(Error::Certification(format!("row {r} sums to {s}, expected {}", self.supplies[r])));
            }
        }
        for c in 0..self.cols {
            let s = self.col_sum(c);
            if s != self.demands[c] as u64 {
                return Err(Error::Certification(format!("column {c} sums to {s}, expected {}", self.demands[c])));
            }
        }
        Ok(())
    }

    /// Checks that every positive cell is allowed.
    pub fn check_support(&self, allowed: impl Fn(usize, usize) -> bool) -> Result<()> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) > 0 && !allowed(r, c) {
                    return Err(Error::Certification(format!("cell ({r}, {c}) is positive but not allowed")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TransportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| format!("{x:>2}")).collect();
            writeln!(f, "{} | {:>3}", cells.join(" "), self.row_sum(r))?;
        }
        let sums: Vec<String> = (0..self.cols).map(|c| format!("{:>2}", self.col_sum(c))).collect();
        write!(f, "{}", sums.join(" "))
    }
}

struct Arc {
    to: usize,
    cap: u64,
}

/// Dinic max flow with arcs scanned in insertion order.
struct Dinic {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            next: vec![0; nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.out[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0 });
        self.out[to].push(id + 1);
        id
    }

    fn bfs(&mut self, source: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, sink: usize, limit: u64) -> u64 {
        if u == sink {
            return limit;
        }
        while self.next[u] < self.out[u].len() {
            let id = self.out[u][self.next[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, sink, limit.min(cap));
                if pushed > 0 {
                    self.arcs[id].cap -= pushed;
                    self.arcs[id ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut flow = 0;
        loop {
            self.bfs(source);
            if self.level[sink] < 0 {
                return flow;
            }
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let pushed = self.dfs(source, sink, u64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }
}

/// Finds an integer matrix supported on `allowed` with the given margins.
pub fn solve_transport(supplies: &[u32], demands: &[u32], allowed: &[Vec<bool>]) -> Result<TransportMatrix> {
    let total: u64 = supplies.iter().map(|&s| s as u64).sum();
    let total_demand: u64 = demands.iter().map(|&s| s as u64).sum();
    if total != total_demand {
        return Err(Error::usage(format!("supplies sum to {total} but demands sum to {total_demand}")));
    }
    if allowed.len() != supplies.len() || allowed.iter().any(|r| r.len() != demands.len()) {
        return Err(Error::usage("allowed matrix shape does not match supplies × demands"));
    }
    let (rows, cols) = (supplies.len(), demands.len());
    let source = rows + cols;
    let sink = source + 1;
    let mut net = Dinic::new(rows + cols + 2);
    for (r, &s) in supplies.iter().enumerate() {
        net.add_arc(source, r, s as u64);
    }
    let mut cell_arcs = Vec::new();
    for (r, row) in allowed.iter().enumerate() {
        for (c, &ok) in row.iter().enumerate() {
            if ok {
                cell_arcs.push((r, c, net.add_arc(r, rows + c, total)));
            }
        }
    }
    for (c, &d) in demands.iter().enumerate() {
        net.add_arc(rows + c, sink, d as u64);
    }

    let flow = net.max_flow(source, sink);
    if flow < total {
        net.bfs(source);
        let reach = |v: usize| net.level[v] >= 0;
        let bad_rows: Vec<usize> = (0..rows).filter(|&r| reach(r)).collect();
        let bad_cols: Vec<usize> = (0..cols).filter(|&c| reach(rows + c)).collect();
        let violation = HallViolation {
            supply: bad_rows.iter().map(|&r| supplies[r] as u64).sum(),
            demand: bad_cols.iter().map(|&c| demands[c] as u64).sum(),
            rows: bad_rows,
            columns: bad_cols,
        };
        return Err(Error::Infeasible {
            context: format!("max flow {flow} < {total}"),
            violation,
        });
    }

    let mut cells = vec![vec![0u32; cols]; rows];
    for (r, c, id) in cell_arcs {
        // reverse arc capacity holds the flow pushed through the cell
        cells[r][c] = net.arcs[id ^ 1].cap as u32;
    }
    Ok(TransportMatrix::from_cells(cells, supplies.to_vec(), demands.to_vec()))
}
