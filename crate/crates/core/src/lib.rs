//! Exact combinatorics of t-intersecting families of set partitions.
//!
//! A family of set partitions of [n] is *t-intersecting* when every two
//! members share at least `t` blocks, and *nontrivially* so when fewer than
//! `t` blocks are common to all members at once. This crate provides:
//!
//! - [`bell`]: arbitrary-precision tables of Bell numbers `B(n)` and their
//!   singleton-free variant, plus the numeric identities tied to them;
//! - [`partition`]: canonical set partitions, enumeration, and the fixing /
//!   shifting compression operators;
//! - [`setfam`]: upsets of subset families and the exact size of the
//!   partition family a generator family induces through fixed-point sets;
//! - [`extremal`]: the candidate-family formulas and selection rules that
//!   compute the maximum size of (nontrivially) t-intersecting families;
//! - [`oracle`]: brute-force ground truth via enumeration and a
//!   branch-and-bound clique search over the intersection graph.
//!
//! All counts are exact (`BigCount`); all threshold comparisons in decision
//! paths are exact rationals (`ExactRatio`). Floating point appears only in
//! explicitly approximate series cross-checks.

pub mod bell;
pub mod extremal;
pub mod oracle;
pub mod partition;
pub mod setfam;

/// Exact nonnegative count.
pub type BigCount = num_bigint::BigUint;

/// Exact rational with arbitrary-precision numerator and denominator.
pub type ExactRatio = num_rational::BigRational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Precondition violation on an argument.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A request exceeded a configured or hard table/enumeration capacity.
    #[error("capacity exceeded: {what} requires {requested}, capacity is {cap}")]
    Capacity {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// The gamma ratio is undefined: its denominator sum vanishes
    /// (exactly when ell = n = t+2).
    #[error("gamma is degenerate at n={n}, t={t}, ell={ell} (zero denominator)")]
    DegenerateGamma { n: u32, t: u32, ell: u32 },

    /// phi has a pole: gamma(ell) = 2.
    #[error("phi pole at n={n}, t={t}, ell={ell}: gamma equals 2")]
    PhiPole { n: u32, t: u32, ell: u32 },

    /// No nontrivial regime: m_tilde needs n >= t+3.
    #[error("empty nontrivial regime for n={n}, t={t} (need n >= t+3)")]
    EmptyRegime { n: u32, t: u32 },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
