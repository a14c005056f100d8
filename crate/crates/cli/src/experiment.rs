//! Prevalence of the forbidden subgraph in the configuration model.

use std::io::{Read, Write};

use avoidkit::gen::{configuration_model, random_regular_simple};
use avoidkit::rng::derive_seed;
use avoidkit::structure::{contains_h3tilde, contains_hd};
use avoidkit::verify::{hd_probability_upper_bound, hd_shape, H3_TILDE_SHAPE};
use avoidkit::Graph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

pub const THREADS_ENV: &str = "AVOIDKIT_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceRow {
    pub n: usize,
    pub d: usize,
    pub samples: u64,
    pub hits: u64,
    pub freq: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Analytic upper bound; infinite when it does not apply at this `n`.
    pub bound: f64,
}

/// Per-`n` side counts that do not fit the CSV schema.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceTally {
    pub n: usize,
    pub loops: u64,
    pub multi_edges: u64,
    pub simple_samples: u64,
    /// Filled when the simple-and-connected route is requested.
    pub connected_hits: Option<u64>,
    pub connected_rejections: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrevalenceSpec {
    pub d: usize,
    pub n_list: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
    pub simple_connected: bool,
    pub rejection_budget: u64,
}

/// Wilson score interval, widened if needed so it contains `hits / samples`.
pub fn wilson_interval(hits: u64, samples: u64) -> (f64, f64) {
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).clamp(0.0, 1.0).min(p), (center + half).clamp(0.0, 1.0).max(p))
}

/// The forbidden pattern for degree `d`: `H̃_3` for cubic, `H_d` otherwise.
pub fn forbidden_present(g: &Graph, d: usize) -> bool {
    if d == 3 {
        contains_h3tilde(g).is_some()
    } else {
        contains_hd(g, d).is_some()
    }
}

pub fn bound_for(n: usize, d: usize) -> f64 {
    let (n0, m) = if d == 3 { H3_TILDE_SHAPE } else { hd_shape(d as u64) };
    hd_probability_upper_bound(n as u64, d as u64, n0, m).unwrap_or(f64::INFINITY)
}

pub fn cell_seed(seed: u64, n: usize, replica: u64) -> u64 {
    derive_seed(derive_seed(seed, n as u64), replica)
}

#[derive(Clone, Copy, Debug, Default)]
struct Cell {
    hit: bool,
    loops: u64,
    multi: u64,
    simple: bool,
    connected_hit: bool,
    rejections: u64,
}

fn run_cell(spec: &PrevalenceSpec, n: usize, replica: u64) -> avoidkit::Result<Cell> {
    let seed = cell_seed(spec.seed, n, replica);
    let mg = configuration_model(n, spec.d, seed)?;
    let mut cell = Cell {
        hit: forbidden_present(&mg.simple_support(), spec.d),
        loops: mg.loop_count() as u64,
        multi: mg.multi_edge_count() as u64,
        simple: mg.is_simple(),
        ..Cell::default()
    };
    if spec.simple_connected {
        let g = random_regular_simple(n, spec.d, derive_seed(seed, 1), true, spec.rejection_budget)?;
        cell.connected_hit = forbidden_present(&g.graph, spec.d);
        cell.rejections = g.rejections;
    }
    Ok(cell)
}

pub fn validate(spec: &PrevalenceSpec) -> CliResult<()> {
    if spec.samples == 0 {
        return Err(CliError::input("samples must be at least 1"));
    }
    if spec.d < 3 {
        return Err(CliError::input(format!("d must be at least 3, got {}", spec.d)));
    }
    if spec.n_list.is_empty() {
        return Err(CliError::input("empty n list"));
    }
    for &n in &spec.n_list {
        if n * spec.d % 2 == 1 {
            return Err(CliError::input(format!("n·d = {n}·{} is odd", spec.d)));
        }
        if spec.simple_connected && spec.d >= n {
            return Err(CliError::input(format!("d = {} must be below n = {n}", spec.d)));
        }
    }
    Ok(())
}

/// Worker pool size from `AVOIDKIT_THREADS`, if set.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(CliError::input(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}

/// Runs every `(n, replica)` cell on the pool and merges in that order.
pub fn run_prevalence(spec: &PrevalenceSpec, threads: Option<usize>) -> CliResult<(Vec<PrevalenceRow>, Vec<PrevalenceTally>)> {
    validate(spec)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| CliError::domain(format!("thread pool: {e}")))?;

    let mut rows = Vec::with_capacity(spec.n_list.len());
    let mut tallies = Vec::with_capacity(spec.n_list.len());
    for &n in &spec.n_list {
        let cells: Vec<Cell> = pool.install(|| {
            (0..spec.samples)
                .into_par_iter()
                .map(|r| run_cell(spec, n, r))
                .collect::<avoidkit::Result<_>>()
        })?;
        let hits = cells.iter().filter(|c| c.hit).count() as u64;
        let (ci_lo, ci_hi) = wilson_interval(hits, spec.samples);
        rows.push(PrevalenceRow {
            n,
            d: spec.d,
            samples: spec.samples,
            hits,
            freq: hits as f64 / spec.samples as f64,
            ci_lo,
            ci_hi,
            bound: bound_for(n, spec.d),
        });
        tallies.push(PrevalenceTally {
            n,
            loops: cells.iter().map(|c| c.loops).sum(),
            multi_edges: cells.iter().map(|c| c.multi).sum(),
            simple_samples: cells.iter().filter(|c| c.simple).count() as u64,
            connected_hits: spec.simple_connected.then(|| cells.iter().filter(|c| c.connected_hit).count() as u64),
            connected_rejections: spec.simple_connected.then(|| cells.iter().map(|c| c.rejections).sum()),
        });
    }
    Ok((rows, tallies))
}

pub fn write_rows<W: Write>(rows: &[PrevalenceRow], w: W) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(r: R) -> CliResult<Vec<PrevalenceRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(CliError::from)
}

/// Frequencies never rise from one `n` to the next unless the two intervals overlap.
pub fn weakly_decreasing(rows: &[PrevalenceRow]) -> bool {
    rows.windows(2).all(|w| w[1].freq <= w[0].freq || w[1].ci_lo <= w[0].ci_hi)
}
