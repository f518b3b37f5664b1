//! Arithmetic progressions in orderings of finite additive sets.
//!
//! The crate counts progression k-orderings of interval boxes and finite
//! abelian groups, computes the longest arithmetic subsequence of an
//! ordering, enumerates the exact distribution of that statistic for small
//! sets, solves the gamma-function threshold equations that predict it for
//! large sets, and checks those predictions by seeded simulation.

pub mod arith;
pub mod asymptotics;
pub mod counting;
pub mod enumeration;
pub mod error;
pub mod group;
pub mod las;
pub mod montecarlo;
pub mod noncommutative;

pub use counting::{APSpec, CountResult, Method};
pub use error::{Error, Result};
pub use group::{AdditiveSet, Element, Family};
pub use las::{LasResult, Ordering};

/// Version string recorded in cache files and output envelopes.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
