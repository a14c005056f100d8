//! Avoidance checking, exact engine laws, chi-square faithfulness, lemma
//! oracles and the configuration-model containment bound.

mod avoidance;
mod bound;
mod chisq;
mod exact;
mod oracles;

pub use avoidance::{block_conditions_hold, check_avoidance, Violation, ViolationKind};
pub use bound::{hd_probability_upper_bound, hd_shape, H3_TILDE_SHAPE};
pub use chisq::{chi_square_faithfulness, CellTest, FaithfulnessReport, DEFAULT_ALPHA, DEFAULT_MIN_DEPARTURES};
pub use exact::{
    enumerate_blocks, exact_cubic_marginals, exact_regular_index_laws, exact_squarefree_marginals, CubicMarginals,
    IndexLaws, Law, CUBIC_CHOICE_CAP,
};
pub use oracles::{
    lemma31_equivalence, lemma34_oracle, lemma34_sampled, lemma42_oracle, Lemma31Report, Lemma34Report, Lemma42Report,
    MAX_EXHAUSTIVE_BITS,
};
