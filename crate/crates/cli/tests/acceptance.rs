//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use avoidkit::couplers::{
    k22_excursion_coupling, regular_init, regular_round, s3b_table, simulate, InitialOther,
    SimOptions, Trajectory, TransportCache,
};
use avoidkit::gen::{self, random_regular_simple};
use avoidkit::matching::{build_regular_transport, build_squarefree_transport, one_step_matching, TransportMatrix};
use avoidkit::rng::derive_seed;
use avoidkit::structure::{contains_hd, EngineKind};
use avoidkit::verify::{
    check_avoidance, chi_square_faithfulness, enumerate_blocks, exact_cubic_marginals, exact_regular_index_laws,
    lemma31_equivalence, lemma34_oracle, lemma42_oracle, FaithfulnessReport,
};
use avoidkit::{Graph, SimRng, VertexId};
use avoidkit_cli::experiment::{run_prevalence, PrevalenceSpec};
use num_rational::{BigRational, Rational64};

const ALPHA: f64 = 0.001;
const MIN_DEPARTURES: u64 = 30;
const CUBIC_TICKS: usize = 1_000_000;
const CUBIC_RUN_LIMIT: Duration = Duration::from_secs(30);
const REGULAR_TICKS: usize = 300_000;
const SQUAREFREE_TICKS: usize = 1_000_000;
const LEMMA34_LIMIT: Duration = Duration::from_secs(300);
const LEMMA42_LIMIT: Duration = Duration::from_secs(10);
const LEMMA31_INSTANCES: u64 = 100;
const EXCURSION_MAX_LEN: usize = 8;
const EXCURSION_SAMPLES: u64 = 100_000;
const PREVALENCE_SAMPLES: u64 = 500;
const PREVALENCE_N: [usize; 4] = [16, 32, 64, 128];
const PREVALENCE_FINAL_MAX: f64 = 0.05;
const PREVALENCE_LIMIT: Duration = Duration::from_secs(120);
const CYCLE_STEPS: usize = 1_000_000;
const CYCLE_SIGMAS: f64 = 3.0;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn separated(g: &Graph, a: VertexId, b: VertexId) -> bool {
    a != b && !g.has_edge(a, b)
}

/// Independent avoidance scan for two walkers: edges, `B_t ≠ A_t`, `B_t ≠ A_{t+1}`.
fn scan_two_walkers(g: &Graph, t: &Trajectory) -> Result<(), String> {
    for i in 0..t.len() {
        let (a, b) = (t.alice(i), t.bob(i));
        ensure(a != b, || format!("tick {i}: collision at {a}"))?;
        if i + 1 < t.len() {
            let (na, nb) = (t.alice(i + 1), t.bob(i + 1));
            ensure(b != na, || format!("tick {i}: Bob at {b} where Alice steps next"))?;
            ensure(g.has_edge(a, na) && g.has_edge(b, nb), || format!("tick {i}: non-edge step"))?;
        }
    }
    Ok(())
}

/// Chi-square results of the long runs, consumed by criterion 5.
static FAITHFULNESS: Mutex<Vec<(String, FaithfulnessReport)>> = Mutex::new(Vec::new());

fn record_faithfulness(name: String, g: &Graph, t: &Trajectory) -> Result<(), String> {
    let r = chi_square_faithfulness(g, t, ALPHA, MIN_DEPARTURES).map_err(|e| e.to_string())?;
    FAITHFULNESS.lock().unwrap().push((name, r));
    Ok(())
}

fn criterion_1() -> Outcome {
    let g = gen::petersen();
    let mut slowest = Duration::ZERO;
    let mut markers = 0;
    for seed in [1, 2, 3] {
        let start = Instant::now();
        let opts = SimOptions {
            engine: Some(EngineKind::Cubic),
            ticks: CUBIC_TICKS,
            seed,
            ..SimOptions::default()
        };
        let (t, _) = simulate(&g, &opts).map_err(|e| e.to_string())?;
        let violations = check_avoidance(&g, &t).map_err(|e| e.to_string())?;
        ensure(violations.is_empty(), || format!("seed {seed}: {} violations, first {}", violations.len(), violations[0]))?;
        scan_two_walkers(&g, &t).map_err(|e| format!("seed {seed}: {e}"))?;
        for &m in t.blocks() {
            ensure(separated(&g, t.alice(m), t.bob(m)), || format!("seed {seed}: distance < 2 at marker {m}"))?;
        }
        let elapsed = start.elapsed();
        ensure(elapsed < CUBIC_RUN_LIMIT, || format!("seed {seed} took {elapsed:?}"))?;
        slowest = slowest.max(elapsed);
        markers += t.blocks().len();
        record_faithfulness(format!("petersen/cubic/seed{seed}"), &g, &t)?;
    }
    Ok(format!("3 runs of {CUBIC_TICKS} ticks, {markers} block markers at distance >= 2, slowest {slowest:.1?}"))
}

/// Replays the regular protocol round by round with the simulator's seed,
/// checking the phase invariant independently before every round.
fn replay_regular(g: &Graph, seed: u64, t: &Trajectory) -> Result<u64, String> {
    let err = |e: avoidkit::Error| e.to_string();
    let mut rng = SimRng::new(seed);
    let state = regular_init(g, 0, InitialOther::Auto, &mut rng).map_err(err)?;
    let cache = TransportCache::new(4096);
    let (mut a, mut b, mut e) = (state.alice, state.bob, state.excluded.expect("regular state"));
    let invariant = |mover: VertexId, other: VertexId, excluded: VertexId| {
        other != mover && g.has_edge(mover, excluded) && (!g.has_edge(mover, other) || other == excluded)
    };
    let mut tick = 0;
    let mut rounds = 0;
    ensure((t.alice(0), t.bob(0)) == (a, b), || "start differs from the simulator".into())?;
    while tick + 3 < t.len() {
        ensure(invariant(a, b, e), || format!("round start at tick {tick}: ({a}, {b}, {e})"))?;
        let r1 = regular_round(g, Some(&cache), a, b, e, &mut rng).map_err(err)?;
        let ([a1, a2], b1) = (r1.mover_path, r1.other_step);
        ensure(invariant(b1, a2, r1.next_excluded), || format!("second round at tick {}", tick + 1))?;
        let r2 = regular_round(g, Some(&cache), b1, a2, r1.next_excluded, &mut rng).map_err(err)?;
        let ([b2, b3], a3) = (r2.mover_path, r2.other_step);
        rounds += 2;
        for (k, pos) in [(a1, b1), (a2, b2), (a3, b3)].into_iter().enumerate() {
            let at = tick + 1 + k;
            ensure((t.alice(at), t.bob(at)) == pos, || format!("replay diverges at tick {at}"))?;
        }
        (a, b, e) = (a3, b3, r2.next_excluded);
        tick += 3;
    }
    Ok(rounds)
}

fn h4_free_hosts() -> Result<Vec<(String, Graph)>, String> {
    let mut hosts = vec![("circulant(9,{1,2})".to_string(), gen::circulant(9, &[1, 2]).map_err(|e| e.to_string())?)];
    for n in [12, 16, 20] {
        let (seed, g) = (0u64..)
            .map(|s| (s, random_regular_simple(n, 4, s, true, 100_000).map(|g| g.graph)))
            .find_map(|(s, g)| g.ok().filter(|g| contains_hd(g, 4).is_none()).map(|g| (s, g)))
            .expect("some seed yields an H_4-free host");
        hosts.push((format!("rrg(n={n},d=4,seed={seed})"), g));
    }
    Ok(hosts)
}

fn criterion_2() -> Outcome {
    let mut rounds = 0;
    for (name, g) in h4_free_hosts()? {
        let opts = SimOptions {
            engine: Some(EngineKind::Regular),
            ticks: REGULAR_TICKS,
            seed: 7,
            ..SimOptions::default()
        };
        let (t, _) = simulate(&g, &opts).map_err(|e| format!("{name}: {e}"))?;
        let violations = check_avoidance(&g, &t).map_err(|e| e.to_string())?;
        ensure(violations.is_empty(), || format!("{name}: {}", violations[0]))?;
        scan_two_walkers(&g, &t).map_err(|e| format!("{name}: {e}"))?;
        rounds += replay_regular(&g, opts.seed, &t).map_err(|e| format!("{name}: {e}"))?;
        record_faithfulness(format!("{name}/regular"), &g, &t)?;
    }
    Ok(format!("4 hosts x {REGULAR_TICKS} ticks clean; phase invariant held at all {rounds} round starts"))
}

fn criterion_3() -> Outcome {
    for (name, g) in [("petersen", gen::petersen()), ("heawood", gen::heawood())] {
        let opts = SimOptions {
            engine: Some(EngineKind::Squarefree),
            ticks: SQUAREFREE_TICKS,
            seed: 11,
            ..SimOptions::default()
        };
        let (t, _) = simulate(&g, &opts).map_err(|e| e.to_string())?;
        let violations = check_avoidance(&g, &t).map_err(|e| e.to_string())?;
        ensure(violations.is_empty(), || format!("{name}: {}", violations[0]))?;
        scan_two_walkers(&g, &t).map_err(|e| format!("{name}: {e}"))?;
        for i in 0..t.len() {
            ensure(separated(&g, t.alice(i), t.bob(i)), || format!("{name}: distance < 2 at tick {i}"))?;
        }
        record_faithfulness(format!("{name}/squarefree"), &g, &t)?;
    }
    Ok(format!("petersen and heawood, {SQUAREFREE_TICKS} ticks each, distance >= 2 after every step"))
}

fn check_sums(m: &TransportMatrix, row: u64, col: u64, what: &str) -> Result<(), String> {
    let rows_ok = (0..m.rows()).all(|r| m.row_sum(r) == row && m.row(r).iter().map(|&x| x as u64).sum::<u64>() == row);
    let cols_ok = (0..m.cols()).all(|c| m.col_sum(c) == col);
    let total_ok = m.total() == row * m.rows() as u64 && m.total() == col * m.cols() as u64;
    ensure(rows_ok && cols_ok && total_ok, || format!("{what}: sum identities fail"))
}

fn criterion_4() -> Outcome {
    // (a) cubic first steps
    let mut pairs = 0;
    for g in [gen::petersen(), gen::complete_bipartite(3, 3).map_err(|e| e.to_string())?] {
        for a in g.vertices() {
            for b in g.vertices().filter(|&b| separated(&g, a, b)) {
                let m = exact_cubic_marginals(&g, a, b).map_err(|e| e.to_string())?;
                ensure(m.residual == q(0, 1), || format!("({a}, {b}) residual {}", m.residual))?;
                for (law, v) in [(&m.alice, a), (&m.bob, b)] {
                    let support: BTreeSet<_> = law.keys().copied().collect();
                    let nbrs: BTreeSet<_> = g.neighbors(v).iter().copied().collect();
                    ensure(support == nbrs && law.values().all(|p| *p == q(1, 3)), || {
                        format!("({a}, {b}): first-step law from {v} is {law:?}")
                    })?;
                }
                pairs += 1;
            }
        }
    }
    // (b) regular index laws, (c) sum identities
    let g = gen::circulant(9, &[1, 2]).map_err(|e| e.to_string())?;
    let d = 4;
    let mut triples = 0;
    for a in g.vertices() {
        for b in g.vertices().filter(|&b| b != a) {
            for &e in g.neighbors(a).iter().filter(|&&e| !g.has_edge(a, b) || e == b) {
                let t = build_regular_transport(&g, a, b, e).map_err(|e| e.to_string())?;
                check_sums(&t.matrix, d, d - 1, &format!("regular ({a}, {b}, {e})"))?;
                let laws = exact_regular_index_laws(&t.matrix, d as usize).map_err(|e| e.to_string())?;
                let (third, quarter) = (Rational64::new(1, 3), Rational64::new(1, 4));
                let exact = laws.i.iter().all(|&p| p == third)
                    && laws.k_given_i.iter().flatten().all(|&p| p == quarter)
                    && laws.j.iter().all(|&p| p == quarter)
                    && laws.l_given_j.iter().flatten().all(|&p| p == quarter);
                ensure(exact && laws.i.len() == 3 && laws.j.len() == 4, || format!("({a}, {b}, {e}): {laws:?}"))?;
                triples += 1;
            }
        }
    }
    let mut matrices = triples;
    for (_, h) in h4_free_hosts()?.into_iter().skip(1) {
        for a in h.vertices() {
            for b in h.vertices().filter(|&b| b != a) {
                for &e in h.neighbors(a).iter().filter(|&&e| !h.has_edge(a, b) || e == b) {
                    let t = build_regular_transport(&h, a, b, e).map_err(|e| e.to_string())?;
                    check_sums(&t.matrix, 4, 3, "random host")?;
                    matrices += 1;
                }
            }
        }
    }
    for g in [gen::petersen(), gen::heawood()] {
        for a in g.vertices() {
            for b in g.vertices().filter(|&b| separated(&g, a, b)) {
                let t = build_squarefree_transport(&g, a, b).map_err(|e| e.to_string())?;
                let (k, l) = (g.degree(a) as u64, g.degree(b) as u64);
                check_sums(&t.matrix, l, k, &format!("square-free ({a}, {b})"))?;
                let sigma = one_step_matching(&g, a, b).map_err(|e| e.to_string())?;
                let image: BTreeSet<_> = sigma.iter().copied().collect();
                let nb: BTreeSet<_> = g.neighbors(b).iter().copied().collect();
                ensure(image == nb, || format!("σ at ({a}, {b}) is not a bijection onto N(b)"))?;
                matrices += 2;
            }
        }
    }
    Ok(format!("{pairs} cubic pairs uniform; {triples} circulant triples give (1/3, 1/4, 1/4, 1/4); {matrices} matrices satisfy their sums"))
}

/// First neighbor gets double weight: a walk that is not simple.
fn biased_walk(g: &Graph, steps: usize, seed: u64) -> Trajectory {
    let mut rng = SimRng::new(seed);
    let mut t = Trajectory::new(EngineKind::Cubic, seed, g.digest(), 1);
    let mut v = 0;
    t.push(&[v]);
    for _ in 0..steps {
        let nbrs = g.neighbors(v);
        let r = rng.index(nbrs.len() + 1);
        v = nbrs[if r == nbrs.len() { 0 } else { r }];
        t.push(&[v]);
    }
    t
}

fn criterion_5() -> Outcome {
    let runs = FAITHFULNESS.lock().unwrap();
    ensure(runs.len() == 3 + 4 + 2, || format!("expected 9 recorded runs, found {}", runs.len()))?;
    let mut tested = 0;
    for (name, r) in runs.iter() {
        ensure(r.passed && r.tested > 0 && r.off_graph_steps == 0, || {
            format!("{name}: tested {}, min p {:?} vs {}", r.tested, r.min_p_value, r.threshold)
        })?;
        tested += r.tested;
    }
    let min_p = runs.iter().filter_map(|(_, r)| r.min_p_value).fold(1.0, f64::min);
    let g = gen::petersen();
    let planted = chi_square_faithfulness(&g, &biased_walk(&g, 100_000, 5), ALPHA, MIN_DEPARTURES).map_err(|e| e.to_string())?;
    ensure(!planted.passed, || "planted bias was not detected".into())?;
    Ok(format!(
        "9 runs pass at alpha {ALPHA} over {tested} cells (smallest p {min_p:.3e}); planted bias rejected with p {:.3e}",
        planted.min_p_value.unwrap_or(f64::NAN)
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let g = gen::circulant(9, &[1, 2]).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for a in g.vertices() {
        for b in g.vertices().filter(|&b| b != a) {
            for &e in g.neighbors(a).iter().filter(|&&e| !g.has_edge(a, b) || e == b) {
                let r = lemma34_oracle(&g, a, b, e).map_err(|e| e.to_string())?;
                ensure(r.holds && r.subsets_checked == 1 << 12, || format!("{r:?}"))?;
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LEMMA34_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} triples x 4096 subsets hold in {elapsed:.1?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for g in [gen::petersen(), gen::heawood()] {
        for a in g.vertices() {
            for b in g.vertices().filter(|&b| separated(&g, a, b)) {
                let r = lemma42_oracle(&g, a, b).map_err(|e| e.to_string())?;
                ensure(r.holds && r.subsets_checked == 8, || format!("{r:?}"))?;
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LEMMA42_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} pairs x 8 subsets hold in {elapsed:.1?}"))
}

fn criterion_8() -> Outcome {
    let mut with_hd = 0;
    let mut produced = 0u64;
    let mut index = 0u64;
    while produced < LEMMA31_INSTANCES {
        let seed = derive_seed(31, index);
        index += 1;
        let d = 3 + (produced % 3) as usize;
        let n = d + 1 + (seed % (20 - d) as u64) as usize;
        if n * d % 2 == 1 {
            continue;
        }
        let g = random_regular_simple(n, d, seed, false, 100_000).map_err(|e| e.to_string())?.graph;
        let r = lemma31_equivalence(&g, d).map_err(|e| e.to_string())?;
        ensure(r.agree, || format!("n={n} d={d} seed={seed}: {r:?}"))?;
        with_hd += usize::from(!r.no_hd);
        produced += 1;
    }
    Ok(format!("{LEMMA31_INSTANCES} graphs agree ({with_hd} contain H_d)"))
}

fn criterion_9() -> Outcome {
    let g = gen::two_diamonds();
    let (a, b) = (0, 1);
    let rows = s3b_table(&g, a, b).map_err(|e| e.to_string())?;
    let leaves = enumerate_blocks(&g, a, b, 4).map_err(|e| e.to_string())?;
    ensure(rows.len() == 9 && leaves.len() == 9, || format!("{} rows, {} leaves", rows.len(), leaves.len()))?;
    let mut alice: BTreeMap<(VertexId, VertexId), BigRational> = BTreeMap::new();
    let mut bob: BTreeMap<(VertexId, VertexId), BigRational> = BTreeMap::new();
    for leaf in &leaves {
        let o = &leaf.outcome;
        ensure(!leaf.truncated && o.len() == 2, || format!("bad leaf {o:?}"))?;
        let (pa, pb) = ([a, o.alice_steps[0], o.alice_steps[1]], [b, o.bob_steps[0], o.bob_steps[1]]);
        for t in 0..3 {
            ensure(pa[t] != pb[t], || format!("{o:?}: collision at step {t}"))?;
            if t < 2 {
                ensure(pb[t] != pa[t + 1], || format!("{o:?}: Bob on Alice's next vertex at step {t}"))?;
            }
        }
        ensure(!g.has_edge(pa[2], pb[2]), || format!("{o:?}: adjacent at the end"))?;
        *alice.entry((pa[1], pa[2])).or_insert_with(|| q(0, 1)) += &leaf.probability;
        *bob.entry((pb[1], pb[2])).or_insert_with(|| q(0, 1)) += &leaf.probability;
    }
    for (law, s) in [(&alice, a), (&bob, b)] {
        let paths: Vec<_> = g.neighbors(s).iter().flat_map(|&x| g.neighbors(x).iter().map(move |&y| (x, y))).collect();
        ensure(law.len() == paths.len() && paths.iter().all(|p| law.get(p) == Some(&q(1, 9))), || {
            format!("two-step law from {s}: {law:?}")
        })?;
    }
    Ok("9 rows; each walker's two-step paths have probability exactly 1/9; no collision, ends non-adjacent".into())
}

fn criterion_10() -> Outcome {
    let g = gen::twin_k22();
    let (a, b) = (0, 5);
    // T + 2 draws per excursion of length T
    let leaves = enumerate_blocks(&g, a, b, EXCURSION_MAX_LEN + 2).map_err(|e| e.to_string())?;
    let mut complete_mass = q(0, 1);
    let mut lengths = BTreeSet::new();
    let mut first_a: BTreeMap<VertexId, BigRational> = BTreeMap::new();
    let mut first_b: BTreeMap<VertexId, BigRational> = BTreeMap::new();
    for leaf in &leaves {
        let o = &leaf.outcome;
        let (&fa, &fb) = (o.alice_steps.first().ok_or("leaf without a step")?, o.bob_steps.first().ok_or("leaf without a Bob step")?);
        *first_a.entry(fa).or_insert_with(|| q(0, 1)) += &leaf.probability;
        *first_b.entry(fb).or_insert_with(|| q(0, 1)) += &leaf.probability;
        if leaf.truncated {
            continue;
        }
        ensure(o.len() <= EXCURSION_MAX_LEN, || format!("complete excursion of length {}", o.len()))?;
        let pa: Vec<_> = std::iter::once(a).chain(o.alice_steps.iter().copied()).collect();
        let pb: Vec<_> = std::iter::once(b).chain(o.bob_steps.iter().copied()).collect();
        for t in 0..pa.len() {
            ensure(pa[t] != pb[t], || format!("collision in {o:?}"))?;
            if t + 1 < pa.len() {
                ensure(pb[t] != pa[t + 1], || format!("swap in {o:?}"))?;
                ensure(g.has_edge(pa[t], pa[t + 1]) && g.has_edge(pb[t], pb[t + 1]), || format!("non-edge in {o:?}"))?;
            }
        }
        ensure(separated(&g, *pa.last().unwrap(), *pb.last().unwrap()), || format!("adjacent end in {o:?}"))?;
        complete_mass += &leaf.probability;
        lengths.insert(o.len());
    }
    // P(T > 8) = (1/3)(2/3)^7
    let tail = q(1, 3) * q(2i64.pow(7), 3i64.pow(7));
    ensure(complete_mass == q(1, 1) - &tail, || format!("complete mass {complete_mass}"))?;
    ensure(lengths == (1..=EXCURSION_MAX_LEN).collect(), || format!("lengths {lengths:?}"))?;
    for (law, v) in [(&first_a, a), (&first_b, b)] {
        let nbrs: BTreeSet<_> = g.neighbors(v).iter().copied().collect();
        ensure(law.keys().copied().collect::<BTreeSet<_>>() == nbrs && law.values().all(|p| *p == q(1, 3)), || {
            format!("first step from {v}: {law:?}")
        })?;
    }
    let mut rng = SimRng::new(10);
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..EXCURSION_SAMPLES {
        let o = k22_excursion_coupling(&g, a, b, &mut rng).map_err(|e| e.to_string())?;
        *hist.entry(o.len()).or_default() += 1;
    }
    ensure([1, 2, 3].iter().all(|t| hist.contains_key(t)), || format!("T histogram {hist:?}"))?;
    Ok(format!(
        "{} leaves, lengths 1..={EXCURSION_MAX_LEN} clean; first steps exactly 1/3; T over {EXCURSION_SAMPLES} samples spans 1..={}",
        leaves.len(),
        hist.keys().last().unwrap()
    ))
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let spec = PrevalenceSpec {
        d: 3,
        n_list: PREVALENCE_N.to_vec(),
        samples: PREVALENCE_SAMPLES,
        seed: 2024,
        simple_connected: false,
        rejection_budget: 100_000,
    };
    let (rows, _) = run_prevalence(&spec, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let freqs: Vec<String> = rows.iter().map(|r| format!("{}:{:.3}", r.n, r.freq)).collect();
    let last = rows.last().ok_or("no rows")?;
    ensure(last.freq <= PREVALENCE_FINAL_MAX, || format!("final frequency {} ({})", last.freq, freqs.join(" ")))?;
    for w in rows.windows(2) {
        ensure(w[1].freq <= w[0].freq || w[1].ci_lo <= w[0].ci_hi, || format!("rise without CI overlap: {}", freqs.join(" ")))?;
    }
    ensure(elapsed < PREVALENCE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("frequencies {} in {elapsed:.1?}", freqs.join(" ")))
}

fn criterion_12() -> Outcome {
    let (n, k) = (10, 5);
    let g = gen::cycle(n).map_err(|e| e.to_string())?;
    let opts = SimOptions {
        engine: Some(EngineKind::Cycle),
        ticks: CYCLE_STEPS,
        seed: 12,
        walkers: k,
        ..SimOptions::default()
    };
    let (t, _) = simulate(&g, &opts).map_err(|e| e.to_string())?;
    let violations = check_avoidance(&g, &t).map_err(|e| e.to_string())?;
    ensure(violations.is_empty(), || format!("{}", violations[0]))?;
    let gaps = |p: &[VertexId]| -> Vec<usize> { (0..k).map(|i| (p[(i + 1) % k] + n - p[i]) % n).collect() };
    let start = gaps(t.at(0));
    let mut plus = vec![0u64; k];
    for i in 1..t.len() {
        let (prev, now) = (t.at(i - 1), t.at(i));
        ensure(gaps(now) == start, || format!("gap change at step {i}"))?;
        for w in 0..k {
            let set: BTreeSet<_> = now.iter().collect();
            ensure(set.len() == k, || format!("collision at step {i}"))?;
            match (now[w] + n - prev[w]) % n {
                1 => plus[w] += 1,
                x if x == n - 1 => {}
                _ => return Err(format!("walker {w} jumped at step {i}")),
            }
        }
    }
    let steps = (t.len() - 1) as f64;
    let sigma = (0.25 / steps).sqrt();
    let worst = plus.iter().map(|&p| (p as f64 / steps - 0.5).abs()).fold(0.0, f64::max);
    ensure(worst <= CYCLE_SIGMAS * sigma, || format!("+1 frequency off by {worst:.2e}, 3σ = {:.2e}", CYCLE_SIGMAS * sigma))?;
    Ok(format!("{k} walkers, {CYCLE_STEPS} steps, gaps {start:?} constant, max |f - 1/2| = {:.2}σ", worst / sigma))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Result<(i32, Vec<u8>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_avoidkit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("AVOIDKIT_THREADS", t),
        None => cmd.env_remove("AVOIDKIT_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

/// Runs every command in `dir`, returning stdout and output files by name.
fn command_round(dir: &Path, threads: &str) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let p = |name: &str| dir.join(name).display().to_string();
    std::fs::write(
        dir.join("run.cfg"),
        format!(
            "rng.seed = 77\nsim.ticks = 20000\nsim.engine = auto\noutput.trajectory = {}\noutput.summary = {}\noutput.report = {}\n",
            p("traj.txt"),
            p("summary.json"),
            p("report.json")
        ),
    )
    .map_err(|e| e.to_string())?;
    let cfg = p("run.cfg");
    let (pet, circ, rrg, tr, csv, tally) = (p("pet.txt"), p("circ.txt"), p("rrg.txt"), p("traj.txt"), p("prev.csv"), p("tally.json"));
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("gen_petersen", vec!["gen", "--family", "petersen", "-o", &pet]),
        ("gen_circulant", vec!["gen", "--family", "circulant", "--n", "9", "--offsets", "1,2", "-o", &circ]),
        ("gen_rrg", vec!["gen", "--family", "random_regular", "--n", "30", "--d", "3", "--seed", "5", "--connected", "-o", &rrg]),
        ("analyze", vec!["analyze", &pet, "--json"]),
        ("transport", vec!["transport", &circ, "--a", "0", "--b", "4", "--e", "1", "--json"]),
        ("simulate", vec!["simulate", &pet, "--config", &cfg]),
        ("verify", vec!["verify", &pet, &tr, "--config", &cfg]),
        ("lemma34", vec!["oracle", "lemma34", &circ, "--json"]),
        ("lemma42", vec!["oracle", "lemma42", &pet, "--json"]),
        ("lemma31", vec!["oracle", "lemma31", &rrg, "--json"]),
        ("experiment", vec!["experiment", "prevalence", "--d", "3", "--n", "16,32", "--samples", "100", "--seed", "9", "-o", &csv, "--tally", &tally]),
    ];
    let mut outputs = BTreeMap::new();
    for (name, args) in commands {
        let (code, stdout) = run_cli(&args, Some(threads))?;
        ensure(code == 0, || format!("{name} exited with {code}"))?;
        outputs.insert(format!("{name}.stdout"), stdout);
    }
    for file in ["pet.txt", "circ.txt", "rrg.txt", "traj.txt", "summary.json", "report.json", "prev.csv", "tally.json"] {
        outputs.insert(file.to_string(), std::fs::read(dir.join(file)).map_err(|e| format!("{file}: {e}"))?);
    }
    Ok(outputs)
}

fn criterion_13() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    // One directory so that paths printed in stdout agree between rounds.
    let first = command_round(tmp.path(), "1")?;
    let second = command_round(tmp.path(), "4")?;
    for (name, bytes) in &first {
        ensure(second.get(name) == Some(bytes), || format!("{name} differs between runs"))?;
    }
    Ok(format!("{} outputs byte-identical across reruns (1 vs 4 worker threads)", first.len()))
}

fn main() {
    let started = Instant::now();
    let criteria: Vec<Criterion> = vec![
        (1, "avoidance, cubic", criterion_1),
        (2, "avoidance, regular d=4", criterion_2),
        (3, "avoidance, square-free", criterion_3),
        (4, "exact faithfulness", criterion_4),
        (5, "empirical faithfulness", criterion_5),
        (6, "transport inequality, regular", criterion_6),
        (7, "transport inequality, square-free", criterion_7),
        (8, "H_d-freeness equivalence", criterion_8),
        (9, "two-step table block", criterion_9),
        (10, "K_(2,2) excursion", criterion_10),
        (11, "forbidden-subgraph prevalence trend", criterion_11),
        (12, "cycle engine", criterion_12),
        (13, "determinism", criterion_13),
    ];
    let mut failed = 0;
    for (id, name, f) in &criteria {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} [{secs:.1}s]: {why}");
            }
        }
    }
    println!("\nacceptance: {} passed, {failed} failed in {:.1?}", criteria.len() - failed, started.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
