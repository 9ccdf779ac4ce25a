//! Desk-scale solvers for hardness probes and cross-checking: a complete
//! DPLL with unit propagation and pure-literal elimination, a WalkSAT-style
//! local search, and an exhaustive model counter for tiny formulas.
//!
//! None of these aim to compete with industrial solvers; they exist so that
//! instance hardness can be measured reproducibly (DPLL decision counts,
//! WalkSAT flip counts) and small instances can be verified exactly.

mod brute;
mod dpll;
mod walksat;

pub use brute::{brute_force_count, BruteForceReport, MAX_BRUTE_VARS};
pub use dpll::{dpll_solve, DpllLimits, DpllReport};
pub use walksat::{walksat_probe, WalksatParams, WalksatReport};

use crate::model::Assignment;

/// Outcome shared by all solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    /// A model was found (total assignment).
    Satisfiable(Assignment),
    /// Exhaustively refuted (complete solvers only).
    Unsatisfiable,
    /// Search budget (decisions, flips, or wall clock) exhausted.
    LimitReached,
}

impl SolveStatus {
    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SolveStatus::Satisfiable(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SolveStatus::Satisfiable(_))
    }
}
