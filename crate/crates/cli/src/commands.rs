use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use avoidkit::couplers::{simulate, SimOptions, SimSummary, Trajectory};
use avoidkit::gen::{self, Family, GenSpec};
use avoidkit::graph::Profile;
use avoidkit::matching::{build_regular_transport, build_squarefree_transport, TransportMatrix};
use avoidkit::structure::{
    admits_k22, classify_scenario, closed_neighborhood_duplicates, contains_h3tilde, contains_hd, is_square_free,
    H3TildeWitness, HdWitness, SquareWitness,
};
use avoidkit::verify::{
    check_avoidance, chi_square_faithfulness, lemma31_equivalence, lemma34_oracle, lemma34_sampled, lemma42_oracle,
    FaithfulnessReport, Lemma31Report, Lemma34Report, Lemma42Report, Violation,
};
use avoidkit::{admissibility_verdict, parse_graph, EngineKind, Error, Graph, ScenarioTag, Verdict, VertexId};
use serde::Serialize;

use crate::args::{
    AnalyzeArgs, ExperimentCommand, GenArgs, OracleCommand, SimulateArgs, TransportArgs, TransportMode, VerifyArgs,
};
use crate::config::{parse_b0, parse_engine, RunConfig};
use crate::error::{CliError, CliResult, EXIT_DOMAIN, EXIT_OK};
use crate::experiment::{run_prevalence, thread_cap, write_rows, PrevalenceSpec};

/// Pair censuses are quadratic; skip them on larger graphs.
pub const CENSUS_MAX_N: usize = 2000;

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let parsed = parse_graph(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if parsed.duplicates > 0 {
        eprintln!("warning: {}: dropped {} duplicate edge line(s)", path.display(), parsed.duplicates);
    }
    Ok(parsed.graph)
}

fn load_trajectory(path: &Path) -> CliResult<Trajectory> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Trajectory::parse(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn print_json<T: Serialize, W: Write>(out: &mut W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn config_or_default(path: Option<&Path>) -> CliResult<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
}

pub fn cmd_gen<W: Write>(args: &GenArgs, out: &mut W) -> CliResult<u8> {
    let family: Family = args.family.parse().map_err(|e: Error| CliError::input(e.to_string()))?;
    let spec = GenSpec {
        n: args.n,
        d: args.d,
        offsets: args.offsets.clone(),
        seed: args.seed,
        connected: args.connected,
        rejection_budget: args.budget.unwrap_or(gen::DEFAULT_REJECTION_BUDGET),
        ..GenSpec::new(family)
    };
    let g = gen::generate(&spec).map_err(|e| match e {
        Error::Usage(m) => CliError::input(m),
        other => other.into(),
    })?;
    let text = g.graph.to_edge_list();
    match &args.output {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            writeln!(
                out,
                "{family}: {} vertices, {} edges, {} rejection(s) -> {}",
                g.graph.n(),
                g.graph.edge_count(),
                g.rejections,
                path.display()
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub profile: Profile,
    pub digest: String,
    /// `H_d` for the regular degree `d`.
    pub hd: Option<HdWitness>,
    pub h3_tilde: Option<H3TildeWitness>,
    pub square: Option<SquareWitness>,
    pub closed_neighborhood_twins: Vec<(VertexId, VertexId)>,
    /// Cubic hosts: non-adjacent pairs, and those admitting `K_{2,2}`.
    pub nonadjacent_pairs: Option<u64>,
    pub k22_pairs: Option<u64>,
    pub scenario_census: Option<BTreeMap<ScenarioTag, u64>>,
    pub verdict: Verdict,
}

pub fn analyze(g: &Graph) -> CliResult<AnalyzeReport> {
    let profile = g.profile();
    let verdict = match admissibility_verdict(g) {
        Ok(v) => v,
        Err(Error::Usage(why)) => Verdict {
            engine: EngineKind::None,
            applicable: Vec::new(),
            degree: profile.regular_degree,
            obstruction: Some(why),
        },
        Err(e) => return Err(e.into()),
    };
    let d = profile.regular_degree;
    let (mut pairs, mut k22, mut census) = (None, None, None);
    if verdict.admits(EngineKind::Cubic) && g.n() <= CENSUS_MAX_N {
        let (mut p, mut k) = (0u64, 0u64);
        let mut c = BTreeMap::new();
        for a in g.vertices() {
            for b in (a + 1..g.n()).filter(|&b| !g.has_edge(a, b)) {
                p += 1;
                k += u64::from(admits_k22(g, a, b)?.is_some());
                *c.entry(classify_scenario(g, a, b)?.tag()).or_insert(0) += 1;
            }
        }
        (pairs, k22, census) = (Some(p), Some(k), Some(c));
    }
    Ok(AnalyzeReport {
        profile,
        digest: g.digest(),
        hd: d.filter(|&d| d >= 2).and_then(|d| contains_hd(g, d)),
        h3_tilde: if d == Some(3) { contains_h3tilde(g) } else { None },
        square: is_square_free(g),
        closed_neighborhood_twins: closed_neighborhood_duplicates(g),
        nonadjacent_pairs: pairs,
        k22_pairs: k22,
        scenario_census: census,
        verdict,
    })
}

fn write_analyze_text<W: Write>(r: &AnalyzeReport, out: &mut W) -> CliResult<()> {
    let p = &r.profile;
    let degree = p.regular_degree.map_or(format!("degree {}..{}", p.min_degree, p.max_degree), |d| format!("{d}-regular"));
    let connected = if p.connected { "connected" } else { "disconnected" };
    writeln!(out, "vertices {}, edges {}, {degree}, {connected}", p.n, p.edge_count)?;
    writeln!(out, "digest {}", r.digest)?;
    if let Some(d) = p.regular_degree.filter(|&d| d >= 2) {
        match &r.hd {
            Some(w) => writeln!(out, "H_{d}: edge ({}, {}) with common neighbors {:?}", w.a, w.b, w.common)?,
            None => writeln!(out, "H_{d}: none")?,
        }
    }
    if p.regular_degree == Some(3) {
        match &r.h3_tilde {
            Some(w) => writeln!(out, "H~_3: pair ({}, {}) with edge ({}, {})", w.a, w.b, w.c1, w.c2)?,
            None => writeln!(out, "H~_3: none")?,
        }
    }
    match &r.square {
        Some(s) => writeln!(out, "C4: {}-{}-{}-{}", s.u, s.c1, s.v, s.c2)?,
        None => writeln!(out, "C4: none")?,
    }
    writeln!(out, "closed-neighborhood twins: {}", r.closed_neighborhood_twins.len())?;
    if let (Some(p), Some(k)) = (r.nonadjacent_pairs, r.k22_pairs) {
        writeln!(out, "K_(2,2) pairs: {k} of {p} non-adjacent pairs")?;
    }
    if let Some(c) = &r.scenario_census {
        let parts: Vec<String> = c.iter().map(|(t, n)| format!("{t} {n}")).collect();
        writeln!(out, "scenarios: {}", parts.join(", "))?;
    }
    let v = &r.verdict;
    let applicable: Vec<String> = v.applicable.iter().map(|e| e.to_string()).collect();
    match &v.obstruction {
        Some(why) => writeln!(out, "verdict: none ({why})")?,
        None => writeln!(out, "verdict: {} (applicable: {})", v.engine, applicable.join(", "))?,
    }
    Ok(())
}

pub fn cmd_analyze<W: Write>(args: &AnalyzeArgs, out: &mut W) -> CliResult<u8> {
    let g = load_graph(&args.graph)?;
    let report = analyze(&g)?;
    if args.json {
        print_json(out, &report)?;
    } else {
        write_analyze_text(&report, out)?;
    }
    Ok(if report.verdict.engine == EngineKind::None { EXIT_DOMAIN } else { EXIT_OK })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub mode: String,
    pub a: VertexId,
    pub b: VertexId,
    pub e: Option<VertexId>,
    /// Square-free only: rows index `N(b)` because `b` has the larger degree.
    pub swapped: bool,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<u32>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
    pub certified: bool,
}

fn matrix_report(
    mode: &str,
    (a, b, e): (VertexId, VertexId, Option<VertexId>),
    swapped: bool,
    m: &TransportMatrix,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    certified: bool,
) -> TransportReport {
    TransportReport {
        mode: mode.into(),
        a,
        b,
        e,
        swapped,
        row_labels,
        col_labels,
        cells: (0..m.rows()).map(|r| m.row(r).to_vec()).collect(),
        row_sums: (0..m.rows()).map(|r| m.row_sum(r)).collect(),
        col_sums: (0..m.cols()).map(|c| m.col_sum(c)).collect(),
        total: m.total(),
        certified,
    }
}

pub fn transport_report(g: &Graph, a: VertexId, b: VertexId, e: Option<VertexId>, mode: TransportMode) -> CliResult<TransportReport> {
    let regular = match mode {
        TransportMode::Regular => true,
        TransportMode::Squarefree => false,
        TransportMode::Auto => e.is_some(),
    };
    if regular {
        let e = e.ok_or_else(|| CliError::input("the regular transport needs --e"))?;
        let t = build_regular_transport(g, a, b, e)?;
        let certified = t.certify(g).is_ok();
        let label = |x: VertexId, y: VertexId| format!("{x}>{y}");
        let rows = t.frame.movers.iter().map(|m| label(m.first_step, m.second_step)).collect();
        let cols = t.frame.others.iter().map(|o| label(o.step, o.next_excluded)).collect();
        Ok(matrix_report("regular", (a, b, Some(e)), false, &t.matrix, rows, cols, certified))
    } else {
        let t = build_squarefree_transport(g, a, b)?;
        let certified = t.certify(g).is_ok();
        let names = |v: &[VertexId]| v.iter().map(|x| x.to_string()).collect();
        Ok(matrix_report(
            "squarefree",
            (a, b, None),
            t.swapped,
            &t.matrix,
            names(&t.row_vertices),
            names(&t.col_vertices),
            certified,
        ))
    }
}

fn write_transport_text<W: Write>(r: &TransportReport, out: &mut W) -> CliResult<()> {
    match r.e {
        Some(e) => writeln!(out, "{} transport at (a, b, e) = ({}, {}, {e})", r.mode, r.a, r.b)?,
        None => writeln!(out, "{} transport at (a, b) = ({}, {}){}", r.mode, r.a, r.b, if r.swapped { ", rows index N(b)" } else { "" })?,
    }
    let width = r
        .row_labels
        .iter()
        .chain(&r.col_labels)
        .map(String::len)
        .chain([3])
        .max()
        .unwrap_or(3);
    write!(out, "{:>width$}", "")?;
    for c in &r.col_labels {
        write!(out, " {c:>width$}")?;
    }
    writeln!(out, " | {:>width$}", "sum")?;
    for ((label, row), sum) in r.row_labels.iter().zip(&r.cells).zip(&r.row_sums) {
        write!(out, "{label:>width$}")?;
        for v in row {
            write!(out, " {v:>width$}")?;
        }
        writeln!(out, " | {sum:>width$}")?;
    }
    write!(out, "{:>width$}", "sum")?;
    for s in &r.col_sums {
        write!(out, " {s:>width$}")?;
    }
    writeln!(out, " | {:>width$}", r.total)?;
    writeln!(out, "certified: {}", if r.certified { "yes" } else { "no" })?;
    Ok(())
}

pub fn cmd_transport<W: Write>(args: &TransportArgs, out: &mut W) -> CliResult<u8> {
    let g = load_graph(&args.graph)?;
    let report = transport_report(&g, args.a, args.b, args.e, args.mode)?;
    if args.json {
        print_json(out, &report)?;
    } else {
        write_transport_text(&report, out)?;
    }
    Ok(if report.certified { EXIT_OK } else { EXIT_DOMAIN })
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateReport {
    pub graph_digest: String,
    pub seed: u64,
    pub summary: SimSummary,
    pub cache_hit_rate: f64,
}

fn simulate_config(args: &SimulateArgs) -> CliResult<RunConfig> {
    let mut cfg = config_or_default(args.config.as_deref())?;
    if let Some(t) = args.ticks {
        cfg.ticks = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(e) = &args.engine {
        cfg.engine = parse_engine(e)?;
    }
    if let Some(w) = args.walkers {
        cfg.walkers = w;
    }
    if args.a0.is_some() {
        cfg.a0 = args.a0;
    }
    if let Some(b) = &args.b0 {
        cfg.b0 = parse_b0(b)?;
    }
    if let Some(c) = args.cache_capacity {
        cfg.cache_capacity = c;
    }
    if args.output.is_some() {
        cfg.trajectory_path = args.output.clone();
    }
    if args.summary.is_some() {
        cfg.summary_path = args.summary.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn write_summary_text<W: Write>(s: &SimSummary, seed: u64, out: &mut W) -> CliResult<()> {
    let engine = s.engine.map_or("none".to_string(), |e| e.to_string());
    writeln!(out, "engine {engine}, seed {seed}, {} ticks, {} block markers", s.ticks, s.blocks)?;
    if !s.scenarios.is_empty() {
        let parts: Vec<String> = s.scenarios.iter().map(|(t, n)| format!("{t} {n}")).collect();
        writeln!(out, "scenarios: {}", parts.join(", "))?;
        let lens: Vec<String> = s.block_lengths.iter().map(|(t, n)| format!("T={t} {n}")).collect();
        writeln!(out, "block lengths: {}", lens.join(", "))?;
    }
    if s.rounds > 0 {
        writeln!(out, "rounds: {}", s.rounds)?;
    }
    if s.cache_hits + s.cache_misses > 0 {
        writeln!(
            out,
            "cache: {} hits, {} misses, hit rate {:.4}",
            s.cache_hits,
            s.cache_misses,
            s.cache_hit_rate()
        )?;
    }
    Ok(())
}

pub fn cmd_simulate<W: Write>(args: &SimulateArgs, out: &mut W) -> CliResult<u8> {
    let g = load_graph(&args.graph)?;
    let cfg = simulate_config(args)?;
    let opts = SimOptions {
        engine: cfg.engine,
        ticks: cfg.ticks,
        seed: cfg.seed,
        a0: cfg.a0,
        b0: cfg.b0,
        walkers: cfg.walkers,
        cache_capacity: cfg.cache_capacity,
    };
    let (traj, summary) = simulate(&g, &opts)?;
    match &cfg.trajectory_path {
        Some(path) => {
            let mut w = create(path)?;
            traj.write_to(&mut w)?;
            w.flush()?;
            write_summary_text(&summary, cfg.seed, out)?;
        }
        None => {
            traj.write_to(&mut *out)?;
            write_summary_text(&summary, cfg.seed, &mut std::io::stderr())?;
        }
    }
    if let Some(path) = &cfg.summary_path {
        let report = SimulateReport {
            graph_digest: g.digest(),
            seed: cfg.seed,
            cache_hit_rate: summary.cache_hit_rate(),
            summary,
        };
        write_json(path, &report)?;
    }
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub graph_digest: String,
    pub engine: EngineKind,
    pub ticks: usize,
    pub walkers: usize,
    pub violations: Vec<Violation>,
    pub faithfulness: FaithfulnessReport,
    pub clean: bool,
}

pub fn verify(g: &Graph, traj: &Trajectory, alpha: f64, min_departures: u64) -> CliResult<VerifyReport> {
    let violations = check_avoidance(g, traj)?;
    let faithfulness = chi_square_faithfulness(g, traj, alpha, min_departures)?;
    Ok(VerifyReport {
        graph_digest: g.digest(),
        engine: traj.engine,
        ticks: traj.len().saturating_sub(1),
        walkers: traj.walkers(),
        clean: violations.is_empty() && faithfulness.passed,
        violations,
        faithfulness,
    })
}

fn write_verify_text<W: Write>(r: &VerifyReport, max_listed: usize, out: &mut W) -> CliResult<()> {
    writeln!(out, "trajectory: engine {}, {} ticks, {} walkers", r.engine, r.ticks, r.walkers)?;
    writeln!(out, "avoidance: {} violation(s)", r.violations.len())?;
    for v in r.violations.iter().take(max_listed) {
        writeln!(out, "  {v}")?;
    }
    if r.violations.len() > max_listed {
        writeln!(out, "  ... {} more", r.violations.len() - max_listed)?;
    }
    let f = &r.faithfulness;
    let min_p = f.min_p_value.map_or("n/a".to_string(), |p| format!("{p:.6e}"));
    writeln!(
        out,
        "faithfulness: {} cells tested, {} untested, min p {min_p}, threshold {:.6e}: {}",
        f.tested,
        f.untested,
        f.threshold,
        if f.passed { "pass" } else { "FAIL" }
    )?;
    writeln!(out, "result: {}", if r.clean { "clean" } else { "FAILED" })?;
    Ok(())
}

pub fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> CliResult<u8> {
    let mut cfg = config_or_default(args.config.as_deref())?;
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(m) = args.min_departures {
        cfg.min_departures = m;
    }
    if args.json.is_some() {
        cfg.report_path = args.json.clone();
    }
    cfg.validate()?;
    let g = load_graph(&args.graph)?;
    let traj = load_trajectory(&args.trajectory)?;
    let report = verify(&g, &traj, cfg.alpha, cfg.min_departures)?;
    write_verify_text(&report, args.max_listed, out)?;
    if let Some(path) = &cfg.report_path {
        write_json(path, &report)?;
    }
    Ok(if report.clean { EXIT_OK } else { EXIT_DOMAIN })
}

/// `(a, b, e)` with `e ∈ N(a)`, and `e = b` whenever `b ∈ N(a)`.
pub fn valid_triples(g: &Graph) -> Vec<(VertexId, VertexId, VertexId)> {
    let mut out = Vec::new();
    for a in g.vertices() {
        for b in g.vertices().filter(|&b| b != a) {
            for &e in g.neighbors(a) {
                if !g.has_edge(a, b) || e == b {
                    out.push((a, b, e));
                }
            }
        }
    }
    out
}

pub fn nonadjacent_pairs(g: &Graph) -> Vec<(VertexId, VertexId)> {
    g.vertices()
        .flat_map(|a| g.vertices().filter(move |&b| b != a).map(move |b| (a, b)))
        .filter(|&(a, b)| !g.has_edge(a, b))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary<R> {
    pub oracle: String,
    pub cases: usize,
    pub subsets_checked: u64,
    pub holds: bool,
    pub worst_margin: Option<i64>,
    /// Cases where the inequality fails.
    pub failures: Vec<R>,
}

fn summarize<R: Clone>(oracle: &str, reports: &[R], subsets: impl Fn(&R) -> u64, margin: impl Fn(&R) -> i64) -> OracleSummary<R> {
    let failures: Vec<R> = reports.iter().filter(|r| margin(r) < 0).cloned().collect();
    OracleSummary {
        oracle: oracle.into(),
        cases: reports.len(),
        subsets_checked: reports.iter().map(&subsets).sum(),
        holds: failures.is_empty(),
        worst_margin: reports.iter().map(&margin).min(),
        failures,
    }
}

fn emit_oracle<R: Serialize + std::fmt::Debug, W: Write>(s: &OracleSummary<R>, json: bool, out: &mut W) -> CliResult<u8> {
    if json {
        print_json(out, s)?;
    } else {
        let worst = s.worst_margin.map_or("n/a".to_string(), |m| m.to_string());
        writeln!(
            out,
            "{}: {} case(s), {} subsets, minimum margin {worst}: {}",
            s.oracle,
            s.cases,
            s.subsets_checked,
            if s.holds { "holds" } else { "FAILS" }
        )?;
        for f in &s.failures {
            writeln!(out, "  {f:?}")?;
        }
    }
    Ok(if s.holds { EXIT_OK } else { EXIT_DOMAIN })
}

fn one_or_all<T>(given: Option<T>, all: impl FnOnce() -> Vec<T>, what: &str, partial: bool) -> CliResult<Vec<T>> {
    match given {
        Some(x) => Ok(vec![x]),
        None if partial => Err(CliError::input(format!("give all of {what} or none of them"))),
        None => Ok(all()),
    }
}

pub fn cmd_oracle<W: Write>(which: &OracleCommand, out: &mut W) -> CliResult<u8> {
    match which {
        OracleCommand::Lemma34 {
            graph,
            a,
            b,
            e,
            sampled,
            seed,
            json,
        } => {
            let g = load_graph(graph)?;
            let given = a.zip(*b).zip(*e).map(|((a, b), e)| (a, b, e));
            let partial = a.is_some() || b.is_some() || e.is_some();
            let triples = one_or_all(given, || valid_triples(&g), "--a, --b, --e", partial)?;
            let reports: Vec<Lemma34Report> = triples
                .into_iter()
                .map(|(a, b, e)| match sampled {
                    Some(n) => lemma34_sampled(&g, a, b, e, *n, *seed),
                    None => lemma34_oracle(&g, a, b, e),
                })
                .collect::<avoidkit::Result<_>>()?;
            emit_oracle(&summarize("lemma34", &reports, |r| r.subsets_checked, |r| r.worst_margin), *json, out)
        }
        OracleCommand::Lemma42 { graph, a, b, json } => {
            let g = load_graph(graph)?;
            let partial = a.is_some() || b.is_some();
            let pairs = one_or_all(a.zip(*b), || nonadjacent_pairs(&g), "--a, --b", partial)?;
            let reports: Vec<Lemma42Report> = pairs
                .into_iter()
                .map(|(a, b)| lemma42_oracle(&g, a, b))
                .collect::<avoidkit::Result<_>>()?;
            emit_oracle(&summarize("lemma42", &reports, |r| r.subsets_checked, |r| r.worst_margin), *json, out)
        }
        OracleCommand::Lemma31 { graph, d, json } => {
            let g = load_graph(graph)?;
            let d = d
                .or(g.regular_degree())
                .ok_or_else(|| CliError::domain("graph is not regular; pass --d"))?;
            let r: Lemma31Report = lemma31_equivalence(&g, d)?;
            if *json {
                print_json(out, &r)?;
            } else {
                writeln!(
                    out,
                    "lemma31 (d = {d}): no H_d {}, distinct closed neighborhoods {}, nonempty differences {}: {}",
                    r.no_hd,
                    r.distinct_closed_neighborhoods,
                    r.nonempty_differences,
                    if r.agree { "agree" } else { "DISAGREE" }
                )?;
            }
            Ok(if r.agree { EXIT_OK } else { EXIT_DOMAIN })
        }
    }
}

pub fn cmd_experiment<W: Write>(which: &ExperimentCommand, out: &mut W) -> CliResult<u8> {
    let ExperimentCommand::Prevalence {
        config,
        d,
        n,
        samples,
        seed,
        simple_connected,
        budget,
        output,
        tally,
    } = which;
    let mut cfg = config_or_default(config.as_deref())?;
    if let Some(s) = seed {
        cfg.seed = *s;
    }
    if let Some(b) = budget {
        cfg.rejection_budget = *b;
    }
    if output.is_some() {
        cfg.csv_path = output.clone();
    }
    cfg.validate()?;
    let spec = PrevalenceSpec {
        d: *d,
        n_list: n.clone(),
        samples: *samples,
        seed: cfg.seed,
        simple_connected: *simple_connected,
        rejection_budget: cfg.rejection_budget,
    };
    let (rows, tallies) = run_prevalence(&spec, thread_cap()?)?;
    match &cfg.csv_path {
        Some(path) => {
            let mut w = create(path)?;
            write_rows(&rows, &mut w)?;
            w.flush()?;
            for r in &rows {
                writeln!(out, "n={} hits {}/{} freq {} ci [{:.4}, {:.4}] bound {}", r.n, r.hits, r.samples, r.freq, r.ci_lo, r.ci_hi, r.bound)?;
            }
        }
        None => write_rows(&rows, &mut *out)?,
    }
    for t in &tallies {
        let mut line = format!(
            "n={}: {} loop(s), {} repeated edge(s), {} simple sample(s)",
            t.n, t.loops, t.multi_edges, t.simple_samples
        );
        if let (Some(h), Some(r)) = (t.connected_hits, t.connected_rejections) {
            line += &format!("; simple connected: {h} hit(s), {r} rejection(s)");
        }
        eprintln!("{line}");
    }
    if let Some(path) = tally {
        write_json(path, &tallies)?;
    }
    Ok(EXIT_OK)
}
