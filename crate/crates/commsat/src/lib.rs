//! Random 3-SAT instances with a planted solution and tunable community
//! structure.
//!
//! The generator plants a satisfying assignment `s`, partitions the variables
//! into communities, and then draws clauses in two steps: first the three
//! variables (biased towards single communities with probability `p`, and
//! towards community-core variables by `alpha`), then the polarities (the
//! number of literals agreeing with `s` is drawn from a clause-type
//! distribution `(p1, p2, p3)`). Clauses with zero agreeing literals are
//! never produced, so `s` satisfies every instance by construction.
//!
//! The crate also ships the tooling needed to study such instances: the
//! variable incidence graph and its modularity, small complete/stochastic
//! solvers for hardness probes, DIMACS and metadata serialization, and a
//! batch runner behind the `commsat` binary.

pub mod analysis;
pub mod batch;
pub mod cli;
pub mod distribution;
pub mod error;
pub mod generator;
pub mod io;
pub mod model;
pub mod partition;
pub mod runner;
pub mod solvers;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
