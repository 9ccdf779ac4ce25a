//! WalkSAT-style stochastic local search.
//!
//! Start from a random assignment; while some clause is falsified, pick one
//! uniformly and flip either a random variable of it (with probability
//! `noise`) or the variable breaking the fewest currently satisfied clauses
//! (ties to the lowest index). Incomplete: it can prove satisfiability, never
//! refutation — flip counts on satisfiable instances are the hardness probe.

use super::SolveStatus;
use crate::model::{evaluate, Assignment, Evaluation, Formula};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalksatParams {
    /// Probability of a random walk step instead of a greedy one.
    pub noise: f64,
    pub max_flips: u64,
    pub seed: u64,
}

impl Default for WalksatParams {
    fn default() -> Self {
        WalksatParams { noise: 0.5, max_flips: 1_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalksatReport {
    pub status: SolveStatus,
    pub flips: u64,
    pub elapsed: Duration,
}

struct Walk {
    values: Vec<bool>,
    /// Clause indices containing +v / -v, one entry per occurrence.
    occ_pos: Vec<Vec<u32>>,
    occ_neg: Vec<Vec<u32>>,
    n_true: Vec<u32>,
    /// Falsified clauses, unordered, with per-clause positions for O(1)
    /// removal. `usize::MAX` means "not in the list".
    unsat: Vec<u32>,
    unsat_pos: Vec<usize>,
}

impl Walk {
    fn new(f: &Formula, values: Vec<bool>) -> Self {
        let n = f.num_vars();
        let m = f.num_clauses();
        let mut w = Walk {
            values,
            occ_pos: vec![Vec::new(); n],
            occ_neg: vec![Vec::new(); n],
            n_true: vec![0; m],
            unsat: Vec::new(),
            unsat_pos: vec![usize::MAX; m],
        };
        for (ci, clause) in f.clauses().iter().enumerate() {
            for &lit in clause.iter() {
                let v = lit.var() as usize - 1;
                if lit.is_positive() {
                    w.occ_pos[v].push(ci as u32);
                } else {
                    w.occ_neg[v].push(ci as u32);
                }
                if w.values[v] == lit.is_positive() {
                    w.n_true[ci] += 1;
                }
            }
            if w.n_true[ci] == 0 {
                w.unsat_pos[ci] = w.unsat.len();
                w.unsat.push(ci as u32);
            }
        }
        w
    }

    fn mark_unsat(&mut self, ci: u32) {
        self.unsat_pos[ci as usize] = self.unsat.len();
        self.unsat.push(ci);
    }

    fn mark_sat(&mut self, ci: u32) {
        let pos = self.unsat_pos[ci as usize];
        self.unsat_pos[ci as usize] = usize::MAX;
        let last = self.unsat.pop().unwrap();
        if pos < self.unsat.len() {
            self.unsat[pos] = last;
            self.unsat_pos[last as usize] = pos;
        }
    }

    /// Clauses kept alive solely by `v`'s current literal; the greedy score.
    fn break_count(&self, v: usize) -> usize {
        let occs = if self.values[v] { &self.occ_pos[v] } else { &self.occ_neg[v] };
        occs.iter().filter(|&&ci| self.n_true[ci as usize] == 1).count()
    }

    fn flip(&mut self, v: usize) {
        let (losing, gaining) = if self.values[v] {
            (&self.occ_pos[v], &self.occ_neg[v])
        } else {
            (&self.occ_neg[v], &self.occ_pos[v])
        };
        let mut newly_unsat: Vec<u32> = Vec::new();
        let mut newly_sat: Vec<u32> = Vec::new();
        for &ci in losing {
            self.n_true[ci as usize] -= 1;
            if self.n_true[ci as usize] == 0 {
                newly_unsat.push(ci);
            }
        }
        for &ci in gaining {
            if self.n_true[ci as usize] == 0 {
                newly_sat.push(ci);
            }
            self.n_true[ci as usize] += 1;
        }
        for ci in newly_unsat {
            self.mark_unsat(ci);
        }
        for ci in newly_sat {
            self.mark_sat(ci);
        }
        self.values[v] = !self.values[v];
    }
}

/// Runs one WalkSAT trajectory on `f`.
pub fn walksat_probe(f: &Formula, params: &WalksatParams) -> Result<WalksatReport> {
    if !params.noise.is_finite() || !(0.0..=1.0).contains(&params.noise) {
        return Err(Error::InvalidParameters(format!(
            "noise must lie in [0, 1], got {}",
            params.noise
        )));
    }
    let start = Instant::now();

    // An empty clause can never be fixed by flipping; report a spent budget
    // rather than looping on it.
    if f.clauses().iter().any(|c| c.is_empty()) {
        return Ok(WalksatReport { status: SolveStatus::LimitReached, flips: 0, elapsed: start.elapsed() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let init = Assignment::random(f.num_vars(), &mut rng);
    let mut walk = Walk::new(f, init.values().to_vec());

    let mut flips = 0u64;
    while !walk.unsat.is_empty() {
        if flips >= params.max_flips {
            return Ok(WalksatReport { status: SolveStatus::LimitReached, flips, elapsed: start.elapsed() });
        }
        let ci = walk.unsat[rng.random_range(0..walk.unsat.len())];
        let lits = f.clauses()[ci as usize].literals();
        let v = if rng.random::<f64>() < params.noise {
            lits[rng.random_range(0..lits.len())].var() as usize - 1
        } else {
            let mut best = usize::MAX;
            let mut best_breaks = usize::MAX;
            for lit in lits {
                let cand = lit.var() as usize - 1;
                if cand == best {
                    continue;
                }
                let breaks = walk.break_count(cand);
                if breaks < best_breaks || (breaks == best_breaks && cand < best) {
                    best = cand;
                    best_breaks = breaks;
                }
            }
            best
        };
        walk.flip(v);
        flips += 1;
    }

    let model = Assignment::from_values(walk.values);
    debug_assert!(matches!(evaluate(f, &model), Ok(Evaluation::Satisfied)));
    Ok(WalksatReport { status: SolveStatus::Satisfiable(model), flips, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_formula, GeneratorParams};
    use crate::model::{Clause, Literal};

    fn clause(codes: &[i32]) -> Clause {
        Clause::new(codes.iter().map(|&c| Literal::from_dimacs(c).unwrap()).collect())
    }

    #[test]
    fn easy_formula_is_solved_quickly() {
        let f = Formula::new(3, vec![clause(&[1, 2, 3]), clause(&[-1, 2, 3])]).unwrap();
        let report = walksat_probe(&f, &WalksatParams::default()).unwrap();
        let model = report.status.model().expect("trivially satisfiable");
        assert_eq!(evaluate(&f, model).unwrap(), Evaluation::Satisfied);
        assert!(report.flips < 100);
    }

    #[test]
    fn unsat_input_exhausts_the_budget_without_lying() {
        let f = Formula::new(1, vec![clause(&[1]), clause(&[-1])]).unwrap();
        let params = WalksatParams { max_flips: 2000, ..Default::default() };
        let report = walksat_probe(&f, &params).unwrap();
        assert_eq!(report.status, SolveStatus::LimitReached);
        assert_eq!(report.flips, 2000);
    }

    #[test]
    fn empty_clause_reports_limit_immediately() {
        let f = Formula::new(2, vec![clause(&[1, 2]), Clause::new(vec![])]).unwrap();
        let report = walksat_probe(&f, &WalksatParams::default()).unwrap();
        assert_eq!(report.status, SolveStatus::LimitReached);
        assert_eq!(report.flips, 0);
    }

    #[test]
    fn same_seed_reproduces_the_trajectory() {
        let params = GeneratorParams { n: 80, c: 8, seed: 40, ..Default::default() };
        let f = generate_formula(&params).unwrap().formula;
        let wp = WalksatParams { seed: 7, ..Default::default() };
        let a = walksat_probe(&f, &wp).unwrap();
        let b = walksat_probe(&f, &wp).unwrap();
        assert_eq!(a.flips, b.flips);
        assert_eq!(a.status, b.status);
        assert!(a.status.is_sat());
    }

    #[test]
    fn generated_instances_are_solved() {
        for seed in 0..5 {
            let params = GeneratorParams { n: 100, c: 10, seed, ..Default::default() };
            let inst = generate_formula(&params).unwrap();
            let report = walksat_probe(
                &inst.formula,
                &WalksatParams { seed: seed ^ 0xabcd, ..Default::default() },
            )
            .unwrap();
            let model = report.status.model().expect("planted instance");
            assert_eq!(evaluate(&inst.formula, model).unwrap(), Evaluation::Satisfied);
        }
    }

    #[test]
    fn zero_flip_budget_only_accepts_lucky_starts() {
        let f = Formula::new(2, vec![clause(&[1, 2])]).unwrap();
        // Whatever the initial assignment, the status must be decided
        // without any flips.
        let report =
            walksat_probe(&f, &WalksatParams { max_flips: 0, ..Default::default() }).unwrap();
        assert_eq!(report.flips, 0);
        match report.status {
            SolveStatus::Satisfiable(a) => {
                assert_eq!(evaluate(&f, &a).unwrap(), Evaluation::Satisfied)
            }
            SolveStatus::LimitReached => {}
            SolveStatus::Unsatisfiable => panic!("local search cannot refute"),
        }
    }

    #[test]
    fn noise_outside_unit_interval_is_rejected() {
        let f = Formula::new(1, vec![clause(&[1])]).unwrap();
        for noise in [-0.1, 1.1, f64::NAN] {
            assert!(walksat_probe(&f, &WalksatParams { noise, ..Default::default() }).is_err());
        }
    }
}
