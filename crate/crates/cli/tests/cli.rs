use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use avoidkit::couplers::Trajectory;
use avoidkit::gen;
use avoidkit::structure::EngineKind;
use avoidkit_cli::experiment::read_rows;
use serde_json::Value;

fn avoidkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avoidkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_graph(dir: &Path, name: &str, g: &avoidkit::Graph) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, g.to_edge_list()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pet = write_graph(dir.path(), "pet.txt", &gen::petersen());
    let o = avoidkit(&["analyze", s(&pet)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("verdict: cubic"), "{text}");
    assert!(text.contains("scenarios: S4 30"), "{text}");

    let k5 = write_graph(dir.path(), "k5.txt", &gen::complete(5).unwrap());
    let o = avoidkit(&["analyze", s(&k5)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("contains H_4"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n1 x\n").unwrap();
    let o = avoidkit(&["analyze", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&avoidkit(&["analyze", "/nonexistent/graph.txt"])), 2);
}

#[test]
fn analyze_json_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "c.txt", &gen::circulant(9, &[1, 2]).unwrap());
    let o = avoidkit(&["analyze", s(&g), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["engine"], "regular");
    assert_eq!(v["profile"]["regular_degree"], 4);
    assert!(v["hd"].is_null());
}

#[test]
fn gen_writes_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let o = avoidkit(&["gen", "--family", "circulant", "--n", "9", "--offsets", "1,2", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let g = avoidkit::parse_graph(&std::fs::read_to_string(&out).unwrap()).unwrap().graph;
    assert_eq!(g, gen::circulant(9, &[1, 2]).unwrap());

    let o = avoidkit(&["gen", "--family", "random_regular", "--n", "4", "--d", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(avoidkit::parse_graph(&stdout(&o)).unwrap().graph, gen::complete(4).unwrap());

    assert_eq!(code(&avoidkit(&["gen", "--family", "cycle", "--n", "2"])), 2);
    assert_eq!(code(&avoidkit(&["gen", "--family", "random_regular", "--n", "5", "--d", "3"])), 2);
    assert_eq!(code(&avoidkit(&["gen", "--family", "moebius"])), 2);
}

#[test]
fn transport_prints_sums_or_hall_violation() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_graph(dir.path(), "c.txt", &gen::circulant(9, &[1, 2]).unwrap());
    let o = avoidkit(&["transport", s(&c), "--a", "0", "--b", "4", "--e", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["row_sums"].as_array().unwrap().iter().all(|x| x == 4));
    assert!(v["col_sums"].as_array().unwrap().iter().all(|x| x == 3));
    assert_eq!(v["total"], 48);

    let h = write_graph(dir.path(), "h.txt", &gen::heawood());
    let o = avoidkit(&["transport", s(&h), "--a", "0", "--b", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("certified: yes"));

    // K_5 contains H_4, so no regular transport exists
    let k5 = write_graph(dir.path(), "k5.txt", &gen::complete(5).unwrap());
    let o = avoidkit(&["transport", s(&k5), "--a", "0", "--b", "1", "--e", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn simulate_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pet = write_graph(dir.path(), "pet.txt", &gen::petersen());
    let traj = dir.path().join("t.txt");
    let summary = dir.path().join("s.json");
    let o = avoidkit(&["simulate", s(&pet), "--ticks", "20000", "--seed", "3", "-o", s(&traj), "--summary", s(&summary)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("scenarios: S4"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["summary"]["engine"], "cubic");
    assert_eq!(v["summary"]["scenarios"].as_object().unwrap().keys().collect::<Vec<_>>(), ["S4"]);

    let report = dir.path().join("r.json");
    let o = avoidkit(&["verify", s(&pet), s(&traj), "--json", s(&report)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["clean"], true);
    assert_eq!(r["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn regular_cache_warms_up() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_graph(dir.path(), "c.txt", &gen::circulant(9, &[1, 2]).unwrap());
    let summary = dir.path().join("s.json");
    let traj = dir.path().join("t.txt");
    let o = avoidkit(&["simulate", s(&c), "--ticks", "30000", "-o", s(&traj), "--summary", s(&summary)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(v["cache_hit_rate"].as_f64().unwrap() > 0.9, "{v}");
    assert!(v["summary"]["cache_misses"].as_u64().unwrap() <= 9 * 8 * 4);
}

#[test]
fn simulate_engine_mismatch_is_a_domain_failure() {
    let dir = tempfile::tempdir().unwrap();
    let pet = write_graph(dir.path(), "pet.txt", &gen::petersen());
    let o = avoidkit(&["simulate", s(&pet), "--engine", "regular", "--ticks", "10"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&avoidkit(&["simulate", s(&pet), "--engine", "warp"])), 2);
    assert_eq!(code(&avoidkit(&["simulate", s(&pet), "--ticks", "0"])), 2);
}

#[test]
fn verify_planted_collision_and_digest_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen::petersen();
    let pet = write_graph(dir.path(), "pet.txt", &g);
    let mut t = Trajectory::new(EngineKind::Squarefree, 0, g.digest(), 2);
    // Alice 0-1-2, Bob 3-2-1: at tick 1 Bob sits on Alice's next vertex
    for (a, b) in [(0, 3), (1, 2), (2, 1)] {
        t.push(&[a, b]);
    }
    let traj = dir.path().join("bad.txt");
    std::fs::write(&traj, t.to_text()).unwrap();
    let o = avoidkit(&["verify", s(&pet), s(&traj)]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("1 violation(s)") && text.contains("tick 1: collision_swap"), "{text}");

    let other = write_graph(dir.path(), "heawood.txt", &gen::heawood());
    assert_eq!(code(&avoidkit(&["verify", s(&other), s(&traj)])), 2);
    let garbage = dir.path().join("garbage.txt");
    std::fs::write(&garbage, "not a trajectory\n").unwrap();
    assert_eq!(code(&avoidkit(&["verify", s(&pet), s(&garbage)])), 2);
}

#[test]
fn oracles_report_and_fail_correctly() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_graph(dir.path(), "c.txt", &gen::circulant(9, &[1, 2]).unwrap());
    let o = avoidkit(&["oracle", "lemma34", s(&c)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("180 case(s), 737280 subsets, minimum margin 0: holds"), "{}", stdout(&o));

    let k5 = write_graph(dir.path(), "k5.txt", &gen::complete(5).unwrap());
    let o = avoidkit(&["oracle", "lemma34", s(&k5), "--json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(code(&avoidkit(&["oracle", "lemma34", s(&k5), "--a", "0"])), 2);

    let pet = write_graph(dir.path(), "pet.txt", &gen::petersen());
    assert_eq!(code(&avoidkit(&["oracle", "lemma42", s(&pet)])), 0);
    let o = avoidkit(&["oracle", "lemma31", s(&k5)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no H_d false"));
}

#[test]
fn experiment_csv_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let o = avoidkit(&["experiment", "prevalence", "--d", "3", "--n", "16,32", "--samples", "50", "--seed", "1", "-o", s(&csv)]);
    assert_eq!(code(&o), 0);
    let rows = read_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [16, 32]);
    assert!(rows.iter().all(|r| r.samples == 50 && r.hits <= 50 && r.ci_lo <= r.freq && r.freq <= r.ci_hi));

    let o = avoidkit(&["experiment", "prevalence", "--d", "3", "--n", "16", "--samples", "0"]);
    assert_eq!(code(&o), 2);
    let o = avoidkit(&["experiment", "prevalence", "--d", "3", "--n", "15", "--samples", "10"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_drives_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = write_graph(dir.path(), "c10.txt", &gen::cycle(10).unwrap());
    let traj = dir.path().join("t.txt");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("rng.seed = 4\nsim.ticks = 500\nsim.walkers = 5\noutput.trajectory = {}\n", s(&traj))).unwrap();
    assert_eq!(code(&avoidkit(&["simulate", s(&cyc), "--config", s(&cfg)])), 0);
    let t = Trajectory::parse(&std::fs::read_to_string(&traj).unwrap()).unwrap();
    assert_eq!((t.walkers(), t.len(), t.seed), (5, 501, 4));

    std::fs::write(&cfg, "sim.tickz = 5\n").unwrap();
    assert_eq!(code(&avoidkit(&["simulate", s(&cyc), "--config", s(&cfg)])), 2);
}
