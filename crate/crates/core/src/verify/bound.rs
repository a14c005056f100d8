use crate::error::{Error, Result};

/// Upper bound `n^{n0} · (d / (n − 2m))^m` on the probability that the
/// `d`-regular configuration model on `n` vertices contains a fixed graph
/// with `n0` vertices and `m > n0` edges. Evaluated in logarithms.
pub fn hd_probability_upper_bound(n: u64, d: u64, n0: u64, m_edges: u64) -> Result<f64> {
    if m_edges <= n0 {
        return Err(Error::usage(format!("need m > n0, got m = {m_edges}, n0 = {n0}")));
    }
    if n <= 2 * m_edges {
        return Err(Error::usage(format!("need n > 2m, got n = {n}, m = {m_edges}")));
    }
    if d == 0 {
        return Ok(0.0);
    }
    let log = n0 as f64 * (n as f64).ln() + m_edges as f64 * ((d as f64).ln() - ((n - 2 * m_edges) as f64).ln());
    Ok(log.exp())
}

/// `(n0, m)` for `H̃_3`.
pub const H3_TILDE_SHAPE: (u64, u64) = (5, 7);

/// `(n0, m)` for `H_d`: `d + 1` vertices, an edge plus `d − 1` common neighbors.
pub fn hd_shape(d: u64) -> (u64, u64) {
    (d + 1, 2 * d - 1)
}
