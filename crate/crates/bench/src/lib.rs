//! Benchmark fixtures shared by the criterion targets.

use avoidkit::gen;
use avoidkit::Graph;

/// Named hosts, one per engine.
pub fn hosts() -> Vec<(&'static str, Graph)> {
    vec![
        ("petersen", gen::petersen()),
        ("heawood", gen::heawood()),
        ("circulant_9_1_2", gen::circulant(9, &[1, 2]).expect("valid circulant")),
        ("cycle_10", gen::cycle(10).expect("valid cycle")),
    ]
}
