//! Exact laws of the engines, in rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use crate::couplers::{cubic_block_into, enumerate, squarefree_step, BlockOutcome, Leaf};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::TransportMatrix;
use crate::structure::{classify_scenario, ScenarioTag};

/// Distribution over vertices.
pub type Law = BTreeMap<VertexId, BigRational>;

/// Choice cap for cubic enumeration: two leading choices, `T − 1` walk steps
/// and one final coin, so excursions up to length 16 complete.
pub const CUBIC_CHOICE_CAP: usize = 18;

#[derive(Clone, Debug, PartialEq)]
pub struct CubicMarginals {
    pub scenario: ScenarioTag,
    pub alice: Law,
    pub bob: Law,
    /// Probability of branches cut at the choice cap. Their first steps are
    /// already decided and are included in the laws.
    pub residual: BigRational,
    pub leaves: usize,
}

fn uniform_over(law: &Law, support: &[VertexId]) -> bool {
    let p = BigRational::new(BigInt::from(1), BigInt::from(support.len()));
    law.len() == support.len() && support.iter().all(|v| law.get(v) == Some(&p))
}

impl CubicMarginals {
    /// Both first-step laws equal `1/deg` on the respective neighborhoods.
    pub fn is_uniform(&self, g: &Graph, a: VertexId, b: VertexId) -> bool {
        uniform_over(&self.alice, g.neighbors(a)) && uniform_over(&self.bob, g.neighbors(b))
    }
}

/// Every leaf of the cubic block coupler from `(a, b)`, cutting at
/// `max_choices` draws. Truncated leaves carry their partial block.
pub fn enumerate_blocks(g: &Graph, a: VertexId, b: VertexId, max_choices: usize) -> Result<Vec<Leaf<BlockOutcome>>> {
    let tree = enumerate(max_choices, |ex| {
        let mut out = BlockOutcome::default();
        let res = cubic_block_into(g, a, b, ex, &mut out);
        (res, out)
    })?;
    tree.leaves
        .into_iter()
        .map(|leaf| match leaf.outcome {
            (Err(err), _) if !leaf.truncated => Err(err),
            (_, out) => Ok(Leaf {
                probability: leaf.probability,
                outcome: out,
                truncated: leaf.truncated,
            }),
        })
        .collect()
}

pub fn exact_cubic_marginals(g: &Graph, a: VertexId, b: VertexId) -> Result<CubicMarginals> {
    let scenario = classify_scenario(g, a, b)?.tag();
    let leaves = enumerate_blocks(g, a, b, CUBIC_CHOICE_CAP)?;
    let mut alice = Law::new();
    let mut bob = Law::new();
    let mut residual = BigRational::zero();
    for leaf in &leaves {
        let (Some(&x), Some(&y)) = (leaf.outcome.alice_steps.first(), leaf.outcome.bob_steps.first()) else {
            return Err(Error::Internal("branch cut before both first steps were decided".into()));
        };
        *alice.entry(x).or_insert_with(BigRational::zero) += &leaf.probability;
        *bob.entry(y).or_insert_with(BigRational::zero) += &leaf.probability;
        if leaf.truncated {
            residual += &leaf.probability;
        }
    }
    Ok(CubicMarginals {
        scenario,
        alice,
        bob,
        residual,
        leaves: leaves.len(),
    })
}

/// First-step laws of the square-free coupling from `(a, b)`.
pub fn exact_squarefree_marginals(g: &Graph, a: VertexId, b: VertexId) -> Result<(Law, Law)> {
    let tree = enumerate(2, |ex| squarefree_step(g, None, a, b, ex))?;
    let mut alice = Law::new();
    let mut bob = Law::new();
    for leaf in tree.leaves {
        let (x, y) = leaf.outcome?;
        *alice.entry(x).or_insert_with(BigRational::zero) += &leaf.probability;
        *bob.entry(y).or_insert_with(BigRational::zero) += leaf.probability;
    }
    Ok((alice, bob))
}

/// `P(I = i)`, `P(K = k | I = i)`, `P(J = j)`, `P(L = ℓ | J = j)` for the
/// regular transport, all zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexLaws {
    pub d: usize,
    pub i: Vec<Rational64>,
    pub k_given_i: Vec<Vec<Rational64>>,
    pub j: Vec<Rational64>,
    pub l_given_j: Vec<Vec<Rational64>>,
}

/// Computes the four index laws from `m` and certifies them against
/// `1/(d − 1)`, `1/d`, `1/d`, `1/d`.
pub fn exact_regular_index_laws(m: &TransportMatrix, d: usize) -> Result<IndexLaws> {
    if d < 2 || m.rows() != (d - 1) * d || m.cols() != d * d {
        return Err(Error::Certification(format!(
            "matrix is {}×{}, expected {}×{} for d = {d}",
            m.rows(),
            m.cols(),
            d.saturating_sub(1) * d,
            d * d
        )));
    }
    let total = m.total() as i64;
    let expected_total = (d * d * (d - 1)) as i64;
    if total != expected_total {
        return Err(Error::Certification(format!("total mass {total}, expected d²(d − 1) = {expected_total}")));
    }
    // mass[i][k] over (j, ℓ), mass[j][ℓ] over (i, k)
    let row_mass = |i: usize, k: usize| m.row_sum(i * d + k) as i64;
    let col_mass = |j: usize, l: usize| m.col_sum(j * d + l) as i64;
    let ratio = |num: i64, den: i64| -> Result<Rational64> {
        if den == 0 {
            Err(Error::Certification("conditioning on an index of zero mass".into()))
        } else {
            Ok(Rational64::new(num, den))
        }
    };
    let mut laws = IndexLaws {
        d,
        i: Vec::new(),
        k_given_i: Vec::new(),
        j: Vec::new(),
        l_given_j: Vec::new(),
    };
    for i in 0..d - 1 {
        let mass_i: i64 = (0..d).map(|k| row_mass(i, k)).sum();
        laws.i.push(ratio(mass_i, total)?);
        laws.k_given_i.push((0..d).map(|k| ratio(row_mass(i, k), mass_i)).collect::<Result<_>>()?);
    }
    for j in 0..d {
        let mass_j: i64 = (0..d).map(|l| col_mass(j, l)).sum();
        laws.j.push(ratio(mass_j, total)?);
        laws.l_given_j.push((0..d).map(|l| ratio(col_mass(j, l), mass_j)).collect::<Result<_>>()?);
    }

    let inv = |x: usize| Rational64::new(1, x as i64);
    let fail = |what: String, got: Rational64, want: Rational64| {
        Err(Error::Certification(format!("{what} = {got}, expected {want}")))
    };
    for (i, &p) in laws.i.iter().enumerate() {
        if p != inv(d - 1) {
            return fail(format!("P(I = {i})"), p, inv(d - 1));
        }
        for (k, &q) in laws.k_given_i[i].iter().enumerate() {
            if q != inv(d) {
                return fail(format!("P(K = {k} | I = {i})"), q, inv(d));
            }
        }
    }
    for (j, &p) in laws.j.iter().enumerate() {
        if p != inv(d) {
            return fail(format!("P(J = {j})"), p, inv(d));
        }
        for (l, &q) in laws.l_given_j[j].iter().enumerate() {
            if q != inv(d) {
                return fail(format!("P(L = {l} | J = {j})"), q, inv(d));
            }
        }
    }
    Ok(laws)
}
