//! Cross-validation of the three solvers on formulas small enough for
//! exhaustive enumeration. The brute-force counter is the ground truth;
//! DPLL must agree exactly on satisfiability, and WalkSAT — being
//! incomplete — may only err on the side of "limit reached".

use commsat::distribution::ClauseDistribution;
use commsat::generator::{derive_seed, generate_formula, GeneratorParams, SolutionSpec};
use commsat::model::{evaluate, Clause, Evaluation, Formula, Literal};
use commsat::solvers::{
    brute_force_count, dpll_solve, walksat_probe, DpllLimits, SolveStatus, WalksatParams,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A random CNF with the given clause widths — unlike generated instances
/// these have no planted solution, so a good share come out unsatisfiable.
/// Duplicate literals and tautologies are deliberately allowed.
fn random_formula(rng: &mut ChaCha8Rng, n: usize, widths: &[usize]) -> Formula {
    let clauses = widths
        .iter()
        .map(|&w| {
            Clause::new(
                (0..w)
                    .map(|_| Literal::new(rng.random_range(1..=n as u32), rng.random()))
                    .collect(),
            )
        })
        .collect();
    Formula::new(n, clauses).unwrap()
}

fn check_against_brute(f: &Formula, label: &str) {
    let truth = brute_force_count(f).unwrap();
    let dpll = dpll_solve(f, &DpllLimits::default()).unwrap();
    match &dpll.status {
        SolveStatus::Satisfiable(model) => {
            assert!(truth.count > 0, "{label}: dpll found a model but enumeration found none");
            assert_eq!(
                evaluate(f, model).unwrap(),
                Evaluation::Satisfied,
                "{label}: dpll returned a bogus model"
            );
        }
        SolveStatus::Unsatisfiable => {
            assert_eq!(truth.count, 0, "{label}: dpll said UNSAT but {} models exist", truth.count);
        }
        SolveStatus::LimitReached => panic!("{label}: no limits were set"),
    }

    let walk =
        walksat_probe(f, &WalksatParams { noise: 0.5, max_flips: 20_000, seed: 11 }).unwrap();
    match &walk.status {
        SolveStatus::Satisfiable(model) => {
            assert!(truth.count > 0, "{label}: walksat 'solved' an unsatisfiable formula");
            assert_eq!(evaluate(f, model).unwrap(), Evaluation::Satisfied, "{label}");
        }
        SolveStatus::LimitReached => {} // allowed, complete solvers decide
        SolveStatus::Unsatisfiable => panic!("{label}: walksat can never prove UNSAT"),
    }
}

#[test]
fn solvers_agree_on_generated_planted_instances() {
    // Planted instances are satisfiable by construction; both complete
    // solvers must confirm it and the model count must include s.
    let mut checked = 0;
    for i in 0..150u64 {
        let n = 6 + (i % 9) as usize; // 6..=14
        let (c, p) = match i % 3 {
            0 => (1, 1.0),
            1 => (3, 0.5),
            _ => (3, 0.0),
        };
        let beta = [0.35, 0.5, 0.8, 0.95][(i % 4) as usize];
        let r = [3.0, 4.26, 6.0][(i % 3) as usize];
        let params = GeneratorParams {
            n,
            c,
            p,
            alpha: 1.0,
            dist: ClauseDistribution::from_beta(beta).unwrap(),
            r,
            seed: derive_seed(50, i),
            solution: SolutionSpec::Random,
            reject_duplicate_clauses: i % 5 == 0,
        };
        let inst = generate_formula(&params).unwrap();
        let truth = brute_force_count(&inst.formula).unwrap();
        assert!(truth.count > 0, "instance {i}: planted formula has no models?");
        assert_eq!(evaluate(&inst.formula, &inst.solution).unwrap(), Evaluation::Satisfied);
        check_against_brute(&inst.formula, &format!("generated {i}"));
        checked += 1;
    }
    assert_eq!(checked, 150);
}

#[test]
fn solvers_agree_on_random_unplanted_formulas() {
    // At m/n = 8 most of these are UNSAT, exercising the refutation path.
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut unsat_seen = 0;
    for i in 0..200 {
        let f = random_formula(&mut rng, 8, &[3; 64]);
        if brute_force_count(&f).unwrap().count == 0 {
            unsat_seen += 1;
        }
        check_against_brute(&f, &format!("random {i}"));
    }
    assert!(unsat_seen >= 100, "only {unsat_seen}/200 UNSAT; the stress mix is off");
}

#[test]
fn solvers_agree_on_mixed_width_formulas() {
    // Widths 1, 2, 4, and 5 plus the occasional duplicate literal and
    // tautology; exercises unit propagation and non-3-SAT handling.
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for i in 0..100 {
        let mut widths = vec![1, 2, 4, 5];
        widths.extend(std::iter::repeat(3).take(12 + (i % 7)));
        let f = random_formula(&mut rng, 7, &widths);
        check_against_brute(&f, &format!("mixed {i}"));
    }
}

#[test]
fn empty_clauses_refute_everything() {
    let f = Formula::new(
        3,
        vec![
            Clause::new(vec![Literal::new(1, true), Literal::new(2, true), Literal::new(3, true)]),
            Clause::new(vec![]),
        ],
    )
    .unwrap();
    assert_eq!(brute_force_count(&f).unwrap().count, 0);
    let dpll = dpll_solve(&f, &DpllLimits::default()).unwrap();
    assert_eq!(dpll.status, SolveStatus::Unsatisfiable);
}
