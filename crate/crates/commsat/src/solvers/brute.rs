//! Exhaustive model counting for tiny formulas; the ground-truth oracle the
//! other solvers are checked against.

use crate::model::{Assignment, Formula};
use crate::{Error, Result};

/// Largest variable count the exhaustive counter accepts (2^25 assignments).
pub const MAX_BRUTE_VARS: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceReport {
    /// Number of satisfying total assignments.
    pub count: u64,
    /// Lexicographically first model (all-false end), if any.
    pub first_model: Option<Assignment>,
}

/// Counts all models of `f` by enumerating every assignment.
pub fn brute_force_count(f: &Formula) -> Result<BruteForceReport> {
    let n = f.num_vars();
    if n > MAX_BRUTE_VARS {
        return Err(Error::InvalidParameters(format!(
            "exhaustive counting is limited to {MAX_BRUTE_VARS} variables, got {n}"
        )));
    }

    // Bit i of a mask is the value of variable i + 1; a clause is satisfied
    // iff one of its positive vars is set or one of its negative vars is not.
    let masks: Vec<(u32, u32)> = f
        .clauses()
        .iter()
        .map(|clause| {
            let mut pos = 0u32;
            let mut neg = 0u32;
            for &lit in clause.iter() {
                let bit = 1u32 << (lit.var() - 1);
                if lit.is_positive() {
                    pos |= bit;
                } else {
                    neg |= bit;
                }
            }
            (pos, neg)
        })
        .collect();

    let mut count = 0u64;
    let mut first_model = None;
    for m in 0u64..1u64 << n {
        let m = m as u32;
        if masks.iter().all(|&(pos, neg)| (pos & m) | (neg & !m) != 0) {
            count += 1;
            if first_model.is_none() {
                first_model = Some(Assignment::from_values(
                    (0..n).map(|i| m & (1 << i) != 0).collect(),
                ));
            }
        }
    }
    Ok(BruteForceReport { count, first_model })
}
