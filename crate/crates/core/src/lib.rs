//! Exact densities of automatic sets and sequences.
//!
//! Given a deterministic finite automaton with output (DFAO) reading base-`k`
//! digits most-significant first, this crate computes the limit superior and
//! limit inferior of the running mean `s(n)/n` as exact rationals, together
//! with witness words realizing each extreme. For 0/1-valued automata these
//! are the upper and lower densities of the underlying automatic set.
//!
//! The pipeline is:
//!
//! 1. [`automaton`]: parse, normalize, and extract the kernel system
//!    (digit matrices `A_x`, their sum `B`, and the output vector `v0`).
//! 2. [`asymptotics`]: the period `a` of the peripheral spectrum of `B` and
//!    the census constants `c[i][j]` giving `Σ_{|w|=an+j} f_i(w) ~ c[i][j]·k^(an+j)`.
//! 3. [`density`]: extremal means from the census constants, witness words,
//!    and the zero/one dichotomy for sets.
//!
//! [`constructor`] goes the other way, building an automatic set with a
//! prescribed pair of lower and upper densities, and [`oracle`] holds the
//! brute-force counterparts used to check everything else.

pub mod asymptotics;
pub mod automaton;
pub mod constructor;
pub mod density;
mod error;
pub mod exact;
pub mod oracle;

pub use error::{Error, ParseError, Result};
pub use exact::Rational;
