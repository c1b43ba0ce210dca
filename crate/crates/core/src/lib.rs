//! Concentration bounds for read-k families of Boolean functions.
//!
//! A read-k family is a collection of indicators `Y_j = f_j(X_{P_j})` over
//! independent finite variables `X_1..X_m`, where each variable is read by
//! at most `k` of the functions. The sum `Y = sum_j Y_j` obeys a Chernoff
//! bound whose exponent is divided by `k`.
//!
//! This crate provides
//!
//! * [`info_theory`]: entropy, KL divergence, binary KL, projections;
//! * [`family`]: the family model and its JSON file format;
//! * [`exact`]: the exact law of `Y` by weighted enumeration;
//! * [`bounds`]: the read-k tail bounds and the AND bound `p^(r/k)`;
//! * [`sampler`]: seeded Monte Carlo estimates with Hoeffding intervals;
//! * [`audit`]: numeric checks of Shearer's lemma and the entropy chain;
//! * [`generators`]: tight block families and random read-k families.
//!
//! Combinatorial code is generic over [`Weight`] (`f32`, `f64`, exact
//! rationals); log-domain code over [`Real`]. The aliases below fix the
//! common choices.
//!
//! Bounds obtained by viewing `Y` as a `k`-Lipschitz function of the `X_i`
//! (Azuma and friends) are not implemented; they only bite for deviations
//! of order `sqrt(m)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod family;
pub mod generators;
pub mod info_theory;
pub mod sampler;
pub mod scalar;

pub use audit::{proof_trace, shearer_entropy_gap, shearer_kl_gap, Gap, ProofTrace};
pub use bounds::{read_k_tail_bound, shearer_and_bound, simplified_tail_bound, BoundQuery, BoundResult};
pub use error::{Error, Result};
pub use exact::{
    conditional_function_marginals, function_marginals, sum_pmf, tail_prob, ExactEngine, Marginals, SumPmf, Tail,
    TailQuery, DEFAULT_GUARD,
};
pub use family::{Component, FamilySpec, Probs, ReadFunction, Variable};
pub use generators::{gen_block_tight, gen_random_family, RandomFamilyParams};
pub use info_theory::{entropy, kl_binary, kl_divergence, project, Distribution, Nats, Tuple};
pub use sampler::{estimate_tail, sample_assignment, McEstimate};
pub use scalar::{Real, Weight};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Family with `f64` probabilities, as read from files.
pub type Family = FamilySpec<f64>;
/// Family with exact rational probabilities.
pub type ExactFamily = FamilySpec<Rational>;
/// Joint distribution over assignment tuples.
pub type JointDistribution = Distribution<Tuple, f64>;
pub type SumPmf64 = SumPmf<f64>;
pub type ExactSumPmf = SumPmf<Rational>;
pub type BoundQuery64 = BoundQuery<f64>;
pub type BoundResult64 = BoundResult<f64>;
pub type ProofTrace64 = ProofTrace<f64>;
pub type Nats64 = Nats<f64>;
