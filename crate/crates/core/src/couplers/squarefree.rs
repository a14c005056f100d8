//! One-step coupling for square-free graphs of minimum degree at least 3.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{build_squarefree_transport, SolutionCache, SquareFreeTransport};
use crate::rng::Chooser;

pub type SquareFreeCache = SolutionCache<(VertexId, VertexId), SquareFreeTransport>;

/// Draws `(I, J)`: `I` uniform over rows, then `J` with probability `m(I, j) / ℓ`.
pub fn sample_pair<C: Chooser>(t: &SquareFreeTransport, rng: &mut C) -> Result<(usize, usize)> {
    let i = rng.below(t.row_vertices.len())?;
    let mut r = rng.below(t.col_vertices.len())?;
    for (j, &m) in t.matrix.row(i).iter().enumerate() {
        if r < m as usize {
            return Ok((i, j));
        }
        r -= m as usize;
    }
    Err(Error::Internal(format!("row {i} does not sum to ℓ")))
}

/// Moves Alice from `a` and Bob from `b`; returns `(a', b')` with
/// `b' ∉ {a'} ∪ N(a')`.
pub fn squarefree_step<C: Chooser>(
    g: &Graph,
    cache: Option<&SquareFreeCache>,
    a: VertexId,
    b: VertexId,
    rng: &mut C,
) -> Result<(VertexId, VertexId)> {
    let build = || build_squarefree_transport(g, a, b);
    let t = match cache {
        Some(c) => c.get_or_try_insert((a, b), build)?,
        None => std::sync::Arc::new(build()?),
    };
    let (i, j) = sample_pair(&t, rng)?;
    let (row, col) = (t.row_vertices[i], t.col_vertices[j]);
    Ok(if t.swapped { (col, row) } else { (row, col) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::rng::SimRng;

    #[test]
    fn heawood_steps_keep_distance() {
        let g = gen::heawood();
        let cache = SquareFreeCache::new(256);
        let mut rng = SimRng::new(8);
        let (mut a, mut b) = (0, 2);
        for _ in 0..20_000 {
            let (x, y) = squarefree_step(&g, Some(&cache), a, b, &mut rng).unwrap();
            assert!(g.has_edge(a, x) && g.has_edge(b, y));
            assert!(b != x && x != y && !g.has_edge(x, y));
            (a, b) = (x, y);
        }
    }

    /// Three Petersen copies plus a hub joined to vertex 0 of each: square-free,
    /// degrees 3 and 4.
    fn mixed_degree_host() -> Graph {
        let p = gen::petersen();
        let mut edges: Vec<_> = (0..3).flat_map(|c| p.edges().map(move |(u, v)| (u + 10 * c, v + 10 * c))).collect();
        edges.extend([(0, 30), (10, 30), (20, 30)]);
        Graph::from_edges(31, edges).unwrap()
    }

    #[test]
    fn swapped_transport_maps_back() {
        let g = mixed_degree_host();
        assert!(crate::structure::is_square_free(&g).is_none());
        let (a, b) = (2, 0);
        assert_eq!((g.degree(a), g.degree(b)), (3, 4));
        let t = build_squarefree_transport(&g, a, b).unwrap();
        assert!(t.swapped);
        assert_eq!((t.matrix.rows(), t.matrix.cols()), (4, 3));
        t.certify(&g).unwrap();
        let mut rng = SimRng::new(1);
        let mut alice = std::collections::BTreeMap::new();
        for _ in 0..4000 {
            let (x, y) = squarefree_step(&g, None, a, b, &mut rng).unwrap();
            assert!(g.has_edge(a, x) && g.has_edge(b, y));
            assert!(x != y && !g.has_edge(x, y));
            *alice.entry(x).or_insert(0) += 1;
        }
        assert_eq!(alice.len(), 3);
    }
}
