//! Exact multiple harmonic sums, their multi-parameter nested-sum
//! generalizations, and the difference/inversion calculus on multi-sequences.
//!
//! Everything is computed over arbitrary-precision rationals; identities are
//! checked by exact equality, never by tolerance.
//!
//! - [`exact`]: rational scalars, binomial/multinomial/generalized binomial coefficients
//! - [`multiseq`]: sequence rules `N^r -> Q`, the difference operators and the inversion operator
//! - [`mhs`]: multiple harmonic sums, dual indices and the 0/1 parameter embeddings
//! - [`nested`]: the generalized nested sums, direct and recursive evaluation, identity verifiers
//! - [`egf`]: truncated multivariate power series and the operator algebra on them
//! - [`cli`]: the `mhs` command-line front end

pub mod bench;
pub mod chains;
pub mod cli;
pub mod egf;
pub mod error;
pub mod exact;
pub mod mhs;
pub mod multiseq;
pub mod nested;
pub mod random;
pub mod report;

pub use error::{Error, Result};
pub use exact::Rational;
pub use mhs::MultiIndex;
pub use multiseq::{IndexBox, MultiSequenceTable, SequenceRule};
pub use nested::NestedSumSpec;
pub use report::{Comparison, Identity, Report};

/// Default limit on the number of summands a direct enumeration may visit.
pub const DEFAULT_GUARD: u128 = 10_000_000;
