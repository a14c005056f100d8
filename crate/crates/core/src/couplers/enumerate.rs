//! Exhaustive enumeration of an engine's random choices.
//!
//! An engine that draws only through [`Chooser`] is a finite decision tree
//! whose edges are uniform choices. [`enumerate`] walks that tree depth-first,
//! replaying a prefix of choices per run, and returns every leaf with its
//! exact probability. Branches deeper than the cap are cut and reported as
//! truncated, together with whatever partial outcome the run produced.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rng::Chooser;

/// Replays a fixed prefix of choices, then extends it with zeros.
#[derive(Debug, Default)]
pub struct Explorer {
    path: Vec<(usize, usize)>,
    pos: usize,
    cap: usize,
    truncated: bool,
    mismatch: Option<String>,
}

impl Chooser for Explorer {
    fn below(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::Internal("choice over an empty range".into()));
        }
        if let Some(&(choice, bound)) = self.path.get(self.pos) {
            if bound != n {
                let msg = format!("choice {} asked for {n} options on replay, {bound} before", self.pos);
                self.mismatch = Some(msg.clone());
                return Err(Error::Internal(msg));
            }
            self.pos += 1;
            return Ok(choice);
        }
        if self.pos >= self.cap {
            self.truncated = true;
            return Err(Error::Truncated(self.cap));
        }
        self.path.push((0, n));
        self.pos += 1;
        Ok(0)
    }
}

impl Explorer {
    /// Product of `1/n` over the choices consumed so far.
    fn probability(&self) -> BigRational {
        let denom = self.path[..self.pos]
            .iter()
            .fold(BigInt::one(), |acc, &(_, n)| acc * BigInt::from(n));
        BigRational::new(BigInt::one(), denom)
    }

    /// Moves to the next unexplored prefix; false once the tree is exhausted.
    fn advance(&mut self) -> bool {
        self.path.truncate(self.pos);
        while let Some(last) = self.path.last_mut() {
            if last.0 + 1 < last.1 {
                last.0 += 1;
                self.pos = 0;
                self.truncated = false;
                return true;
            }
            self.path.pop();
        }
        false
    }
}

#[derive(Clone, Debug)]
pub struct Leaf<R> {
    pub probability: BigRational,
    pub outcome: R,
    /// The run hit the choice cap; `outcome` is whatever it had built so far.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct Enumeration<R> {
    pub leaves: Vec<Leaf<R>>,
}

impl<R> Enumeration<R> {
    pub fn complete(&self) -> impl Iterator<Item = &Leaf<R>> {
        self.leaves.iter().filter(|l| !l.truncated)
    }

    /// Total probability of truncated branches.
    pub fn residual(&self) -> BigRational {
        self.leaves
            .iter()
            .filter(|l| l.truncated)
            .fold(BigRational::zero(), |acc, l| acc + &l.probability)
    }

    pub fn total(&self) -> BigRational {
        self.leaves.iter().fold(BigRational::zero(), |acc, l| acc + &l.probability)
    }
}

/// Runs `run` once per leaf of its choice tree, cutting branches after
/// `max_choices` draws. `run` must be deterministic given its choices.
pub fn enumerate<R>(max_choices: usize, mut run: impl FnMut(&mut Explorer) -> R) -> Result<Enumeration<R>> {
    let mut explorer = Explorer {
        cap: max_choices,
        ..Explorer::default()
    };
    let mut leaves = Vec::new();
    loop {
        let outcome = run(&mut explorer);
        if let Some(msg) = explorer.mismatch.take() {
            return Err(Error::Internal(format!("non-deterministic run: {msg}")));
        }
        if explorer.pos != explorer.path.len() {
            return Err(Error::Internal("run stopped before replaying its own prefix".into()));
        }
        leaves.push(Leaf {
            probability: explorer.probability(),
            outcome,
            truncated: explorer.truncated,
        });
        if !explorer.advance() {
            return Ok(Enumeration { leaves });
        }
    }
}
