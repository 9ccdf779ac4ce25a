//! Complete DPLL search with unit propagation and pure-literal elimination.
//!
//! Branching is fixed — lowest-index unassigned variable, `true` first — so
//! the decision count of a formula is deterministic and usable as a hardness
//! measure. Clause state is tracked with counters (true / unassigned literal
//! occurrences per clause), and purity with per-polarity counts of
//! occurrences in not-yet-satisfied clauses.

use super::SolveStatus;
use crate::model::{evaluate, Assignment, Evaluation, Formula, Literal};
use crate::{Error, Result};
use std::collections::VecDeque;
use std::time::{Duration, Instant};

/// Search budgets; `None` means unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DpllLimits {
    /// Maximum number of decisions (every branch value tried counts).
    pub max_decisions: Option<u64>,
    pub max_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpllReport {
    pub status: SolveStatus,
    /// Branch value trials; the hardness proxy reported by the binary.
    pub decisions: u64,
    /// Unit and pure-literal assignments.
    pub propagations: u64,
    pub elapsed: Duration,
}

struct Searcher {
    num_vars: usize,
    /// All literals, clause `ci` owning `lits[bounds[ci]..bounds[ci + 1]]`.
    lits: Vec<Literal>,
    bounds: Vec<usize>,
    /// Clause indices containing +v / -v, one entry per occurrence.
    occ_pos: Vec<Vec<u32>>,
    occ_neg: Vec<Vec<u32>>,
    n_true: Vec<u32>,
    n_unassigned: Vec<u32>,
    /// Occurrences of +v / -v in clauses that are not yet satisfied.
    active_pos: Vec<u32>,
    active_neg: Vec<u32>,
    values: Vec<Option<bool>>,
    trail: Vec<u32>,
    num_sat: usize,
    unit_queue: VecDeque<u32>,
    decisions: u64,
    propagations: u64,
}

struct Frame {
    var: u32,
    trail_mark: usize,
    flipped: bool,
}

impl Searcher {
    fn new(f: &Formula) -> Self {
        let n = f.num_vars();
        let m = f.num_clauses();
        let mut s = Searcher {
            num_vars: n,
            lits: Vec::new(),
            bounds: Vec::with_capacity(m + 1),
            occ_pos: vec![Vec::new(); n],
            occ_neg: vec![Vec::new(); n],
            n_true: vec![0; m],
            n_unassigned: Vec::with_capacity(m),
            active_pos: vec![0; n],
            active_neg: vec![0; n],
            values: vec![None; n],
            trail: Vec::with_capacity(n),
            num_sat: 0,
            unit_queue: VecDeque::new(),
            decisions: 0,
            propagations: 0,
        };
        s.bounds.push(0);
        for (ci, clause) in f.clauses().iter().enumerate() {
            for &lit in clause.iter() {
                let v = lit.var() as usize - 1;
                if lit.is_positive() {
                    s.occ_pos[v].push(ci as u32);
                    s.active_pos[v] += 1;
                } else {
                    s.occ_neg[v].push(ci as u32);
                    s.active_neg[v] += 1;
                }
                s.lits.push(lit);
            }
            s.bounds.push(s.lits.len());
            s.n_unassigned.push(clause.len() as u32);
            if clause.len() == 1 {
                s.unit_queue.push_back(ci as u32);
            }
        }
        s
    }

    fn clause_lits(&self, ci: u32) -> &[Literal] {
        &self.lits[self.bounds[ci as usize]..self.bounds[ci as usize + 1]]
    }

    fn set_clause_active(&mut self, ci: u32, active: bool) {
        let (start, end) = (self.bounds[ci as usize], self.bounds[ci as usize + 1]);
        for i in start..end {
            let lit = self.lits[i];
            let v = lit.var() as usize - 1;
            let slot = if lit.is_positive() {
                &mut self.active_pos[v]
            } else {
                &mut self.active_neg[v]
            };
            if active {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }

    /// Assigns and updates all counters; returns false on conflict.
    fn assign(&mut self, var: u32, value: bool) -> bool {
        debug_assert!(self.values[var as usize - 1].is_none());
        self.values[var as usize - 1] = Some(value);
        self.trail.push(var);
        let mut ok = true;

        let sat_occs = if value { &self.occ_pos } else { &self.occ_neg };
        for i in 0..sat_occs[var as usize - 1].len() {
            let ci = (if value { &self.occ_pos } else { &self.occ_neg })[var as usize - 1][i];
            self.n_unassigned[ci as usize] -= 1;
            self.n_true[ci as usize] += 1;
            if self.n_true[ci as usize] == 1 {
                self.num_sat += 1;
                self.set_clause_active(ci, false);
            }
        }
        let other_occs = if value { &self.occ_neg[var as usize - 1] } else { &self.occ_pos[var as usize - 1] };
        for i in 0..other_occs.len() {
            let ci = (if value { &self.occ_neg } else { &self.occ_pos })[var as usize - 1][i];
            self.n_unassigned[ci as usize] -= 1;
            if self.n_true[ci as usize] == 0 {
                match self.n_unassigned[ci as usize] {
                    0 => ok = false,
                    1 => self.unit_queue.push_back(ci),
                    _ => {}
                }
            }
        }
        ok
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            let value = self.values[var as usize - 1].take().unwrap();
            for i in 0..if value { &self.occ_pos } else { &self.occ_neg }[var as usize - 1].len() {
                let ci = (if value { &self.occ_pos } else { &self.occ_neg })[var as usize - 1][i];
                self.n_unassigned[ci as usize] += 1;
                self.n_true[ci as usize] -= 1;
                if self.n_true[ci as usize] == 0 {
                    self.num_sat -= 1;
                    self.set_clause_active(ci, true);
                }
            }
            for i in 0..if value { &self.occ_neg } else { &self.occ_pos }[var as usize - 1].len() {
                let ci = (if value { &self.occ_neg } else { &self.occ_pos })[var as usize - 1][i];
                self.n_unassigned[ci as usize] += 1;
            }
        }
    }

    /// Unit propagation to fixpoint, then pure-literal rounds (which can
    /// only satisfy clauses, never conflict). Returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            while let Some(ci) = self.unit_queue.pop_front() {
                if self.n_true[ci as usize] > 0 || self.n_unassigned[ci as usize] != 1 {
                    continue;
                }
                let lit = *self
                    .clause_lits(ci)
                    .iter()
                    .find(|l| self.values[l.var() as usize - 1].is_none())
                    .expect("counter says one literal is unassigned");
                self.propagations += 1;
                if !self.assign(lit.var(), lit.is_positive()) {
                    self.unit_queue.clear();
                    return false;
                }
            }
            let mut assigned_any = false;
            for v in 0..self.num_vars {
                if self.values[v].is_some() {
                    continue;
                }
                let (ap, an) = (self.active_pos[v], self.active_neg[v]);
                if ap + an == 0 || (ap > 0 && an > 0) {
                    continue;
                }
                self.propagations += 1;
                let ok = self.assign(v as u32 + 1, ap > 0);
                debug_assert!(ok, "pure-literal assignment cannot conflict");
                assigned_any = true;
            }
            if !assigned_any && self.unit_queue.is_empty() {
                return true;
            }
        }
    }

    fn extract_model(&self) -> Assignment {
        Assignment::from_values(self.values.iter().map(|v| v.unwrap_or(true)).collect())
    }
}

/// Decides satisfiability of `f` within `limits`.
pub fn dpll_solve(f: &Formula, limits: &DpllLimits) -> Result<DpllReport> {
    if let Some(s) = limits.max_seconds {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "time limit must be a finite non-negative number of seconds, got {s}"
            )));
        }
    }
    let start = Instant::now();
    let mut s = Searcher::new(f);
    let deadline = limits.max_seconds.map(|secs| start + Duration::from_secs_f64(secs));

    let report = |s: &Searcher, status: SolveStatus| DpllReport {
        status,
        decisions: s.decisions,
        propagations: s.propagations,
        elapsed: start.elapsed(),
    };

    // An empty clause refutes the formula before any search.
    if s.n_unassigned.iter().any(|&u| u == 0) {
        return Ok(report(&s, SolveStatus::Unsatisfiable));
    }

    if !s.propagate() {
        return Ok(report(&s, SolveStatus::Unsatisfiable));
    }
    let mut frames: Vec<Frame> = Vec::new();
    loop {
        if s.num_sat == f.num_clauses() {
            let model = s.extract_model();
            debug_assert!(matches!(evaluate(f, &model), Ok(Evaluation::Satisfied)));
            return Ok(report(&s, SolveStatus::Satisfiable(model)));
        }

        if let Some(max) = limits.max_decisions {
            if s.decisions >= max {
                return Ok(report(&s, SolveStatus::LimitReached));
            }
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Ok(report(&s, SolveStatus::LimitReached));
            }
        }

        // Decide: lowest-index unassigned variable, true first.
        let var = s
            .values
            .iter()
            .position(|v| v.is_none())
            .map(|i| i as u32 + 1)
            .expect("unsatisfied clause must have an unassigned literal");
        frames.push(Frame { var, trail_mark: s.trail.len(), flipped: false });
        s.decisions += 1;

        let mut conflict = !s.assign(var, true) || !s.propagate();
        while conflict {
            match frames.last_mut() {
                None => return Ok(report(&s, SolveStatus::Unsatisfiable)),
                Some(frame) if !frame.flipped => {
                    frame.flipped = true;
                    let (var, mark) = (frame.var, frame.trail_mark);
                    s.unassign_to(mark);
                    if let Some(max) = limits.max_decisions {
                        if s.decisions >= max {
                            return Ok(report(&s, SolveStatus::LimitReached));
                        }
                    }
                    s.decisions += 1;
                    conflict = !s.assign(var, false) || !s.propagate();
                }
                Some(frame) => {
                    let mark = frame.trail_mark;
                    s.unassign_to(mark);
                    frames.pop();
                }
            }
        }
    }
}
