//! Instance generation: planted solution, community-biased variable
//! selection, and clause-type-driven polarity assignment.
//!
//! Each of the `m = round(r * n)` clauses is drawn in three steps:
//!
//! 1. with probability `p` pick all three variables inside one community
//!    ([`select_one`]), otherwise across three communities ([`select_three`]);
//! 2. draw the clause type `t` (number of literals that will agree with the
//!    planted solution) from the clause-type distribution;
//! 3. give `t` uniformly chosen variables the polarity that agrees with the
//!    planted solution and the rest the opposite one ([`set_polarity`]).
//!
//! Since `t >= 1` always, the planted assignment satisfies every clause.

use crate::distribution::ClauseDistribution;
use crate::model::{evaluate, Assignment, Clause, Evaluation, Formula};
use crate::partition::{partition_communities, CommunityPartition};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{HashMap, HashSet};
use std::fmt;

/// Draws of a community that cannot host a full clause before giving up.
const COMMUNITY_ATTEMPTS: usize = 100;
/// Variable-triple redraws before the chosen communities are abandoned.
const TRIPLE_ATTEMPTS: usize = 10_000;
/// Community redraws before cross-community selection is declared infeasible.
const COMMUNITY_REDRAWS: usize = 100;
/// Whole-clause redraws when duplicate clauses are being rejected.
const DUPLICATE_ATTEMPTS: usize = 10_000;

/// How the planted solution is obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSpec {
    /// Draw a fresh uniform assignment from the instance seed.
    Random,
    /// Plant this exact assignment (length must equal `n`).
    Fixed(Assignment),
}

/// Full parameter set for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    /// Number of variables.
    pub n: usize,
    /// Number of communities.
    pub c: usize,
    /// Probability that a clause is drawn inside a single community.
    pub p: f64,
    /// Fraction of each community's variables that stay intra-community.
    pub alpha: f64,
    /// Clause-type distribution `(p1, p2, p3)`.
    pub dist: ClauseDistribution,
    /// Clause-to-variable ratio; the instance gets `round(r * n)` clauses.
    pub r: f64,
    /// RNG seed; equal parameters and seed reproduce the instance exactly.
    pub seed: u64,
    pub solution: SolutionSpec,
    /// Resample clauses that duplicate an earlier one (off by default; the
    /// base model allows duplicates).
    pub reject_duplicate_clauses: bool,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            n: 500,
            c: 20,
            p: 0.3,
            alpha: 1.0,
            dist: ClauseDistribution::from_beta(0.5).expect("0.5 is a valid beta"),
            r: 4.5,
            seed: 0,
            solution: SolutionSpec::Random,
            reject_duplicate_clauses: false,
        }
    }
}

impl GeneratorParams {
    /// Number of clauses this parameter set produces.
    pub fn num_clauses(&self) -> usize {
        (self.r * self.n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameters(msg));
        if self.n == 0 {
            return fail("need at least one variable".into());
        }
        if self.c == 0 || self.c > self.n {
            return fail(format!(
                "community count must satisfy 1 <= c <= n, got c={}, n={}",
                self.c, self.n
            ));
        }
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return fail(format!("p must lie in [0, 1], got {}", self.p));
        }
        if !self.alpha.is_finite() || !(0.0..=1.0).contains(&self.alpha) {
            return fail(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if self.alpha < 1.0 && self.c < 2 {
            return fail("alpha < 1 requires at least two communities".into());
        }
        if !self.r.is_finite() || self.r <= 0.0 {
            return fail(format!("clause ratio r must be positive, got {}", self.r));
        }
        if self.num_clauses() == 0 {
            return fail(format!("r={} with n={} rounds to zero clauses", self.r, self.n));
        }
        if self.p < 1.0 && self.c < 3 {
            return fail(format!(
                "cross-community clauses need three distinct communities, \
                 so p < 1 requires c >= 3 (got p={}, c={})",
                self.p, self.c
            ));
        }
        if let SolutionSpec::Fixed(a) = &self.solution {
            if a.len() != self.n {
                return fail(format!(
                    "fixed solution covers {} variables, expected {}",
                    a.len(),
                    self.n
                ));
            }
        }
        Ok(())
    }
}

/// Where a clause's variables came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// All three variables drawn from a single community.
    Intra,
    /// Variables drawn from three distinct communities.
    Inter,
}

/// Per-clause generation record: selection mode and clause type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseOrigin {
    pub mode: SelectionMode,
    /// Number of literals agreeing with the planted solution (1..=3).
    pub clause_type: u8,
}

impl fmt::Display for ClauseOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            SelectionMode::Intra => 'i',
            SelectionMode::Inter => 'e',
        };
        write!(f, "{}{}", mode, self.clause_type)
    }
}

impl std::str::FromStr for ClauseOrigin {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut chars = s.chars();
        let (mode, ty) = (chars.next(), chars.next());
        if chars.next().is_some() {
            return Err(format!("expected two characters, got {s:?}"));
        }
        let mode = match mode {
            Some('i') => SelectionMode::Intra,
            Some('e') => SelectionMode::Inter,
            _ => return Err(format!("bad selection mode in {s:?}")),
        };
        let clause_type = match ty {
            Some(c @ '1'..='3') => c as u8 - b'0',
            _ => return Err(format!("bad clause type in {s:?}")),
        };
        Ok(ClauseOrigin { mode, clause_type })
    }
}

impl Serialize for ClauseOrigin {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClauseOrigin {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// A generated formula together with everything that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub formula: Formula,
    pub solution: Assignment,
    pub partition: CommunityPartition,
    pub params: GeneratorParams,
    /// One entry per clause, in clause order.
    pub provenance: Vec<ClauseOrigin>,
}

impl GeneratedInstance {
    /// Clauses whose variables were drawn inside a single community.
    pub fn intra_clause_count(&self) -> usize {
        self.provenance.iter().filter(|o| o.mode == SelectionMode::Intra).count()
    }

    /// Clause counts by type `(1, 2, 3)`.
    pub fn type_counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for origin in &self.provenance {
            counts[origin.clause_type as usize - 1] += 1;
        }
        counts
    }
}

/// Weighted sample of three distinct variables from `pool` (`(var, weight)`
/// pairs, distinct vars, positive weights). Selecting a variable removes its
/// whole weight before the next draw.
fn sample_three_from_pool<R: Rng + ?Sized>(pool: &[(u32, u64)], rng: &mut R) -> [u32; 3] {
    debug_assert!(pool.len() >= 3);
    let mut total: u64 = pool.iter().map(|&(_, w)| w).sum();
    let mut chosen = [0u32; 3];
    for k in 0..3 {
        let mut x = rng.random_range(0..total);
        for &(v, w) in pool {
            if chosen[..k].contains(&v) {
                continue;
            }
            if x < w {
                chosen[k] = v;
                total -= w;
                break;
            }
            x -= w;
        }
    }
    chosen
}

fn community_pool(part: &CommunityPartition, cid: u32) -> Vec<(u32, u64)> {
    part.members(cid).iter().map(|&v| (v, part.weight_in(v, cid) as u64)).collect()
}

/// Pooled membership of three communities; a variable belonging to more
/// than one of them gets the sum of its per-community weights.
pub(crate) fn union_pool(part: &CommunityPartition, cids: [u32; 3]) -> Vec<(u32, u64)> {
    let mut pool: Vec<(u32, u64)> = Vec::new();
    let mut slot: HashMap<u32, usize> = HashMap::new();
    for cid in cids {
        for &v in part.members(cid) {
            let w = part.weight_in(v, cid) as u64;
            match slot.get(&v) {
                Some(&i) => pool[i].1 += w,
                None => {
                    slot.insert(v, pool.len());
                    pool.push((v, w));
                }
            }
        }
    }
    pool
}

/// Picks a uniform community and draws three distinct variables from it,
/// intra-community members counting twice. Communities with fewer than three
/// variables are redrawn (bounded).
pub fn select_one<R: Rng + ?Sized>(part: &CommunityPartition, rng: &mut R) -> Result<[u32; 3]> {
    let c = part.num_communities() as u32;
    for _ in 0..COMMUNITY_ATTEMPTS {
        let cid = rng.random_range(0..c);
        if part.members(cid).len() >= 3 {
            return Ok(sample_three_from_pool(&community_pool(part, cid), rng));
        }
    }
    Err(Error::CommunityTooSmall { attempts: COMMUNITY_ATTEMPTS })
}

/// Picks three distinct communities and draws three distinct variables from
/// their pooled membership (weights merged for variables in more than one of
/// them), rejecting triples that still fit inside a single community.
pub fn select_three<R: Rng + ?Sized>(part: &CommunityPartition, rng: &mut R) -> Result<[u32; 3]> {
    let c = part.num_communities();
    if c < 3 {
        return Err(Error::InvalidParameters(format!(
            "cross-community selection needs c >= 3, got c={c}"
        )));
    }
    let mut cids: Vec<u32> = (0..c as u32).collect();
    for _ in 0..COMMUNITY_REDRAWS {
        for j in 0..3 {
            let k = rng.random_range(j..c);
            cids.swap(j, k);
        }

        let pool = union_pool(part, [cids[0], cids[1], cids[2]]);
        if pool.len() < 3 {
            continue;
        }

        for _ in 0..TRIPLE_ATTEMPTS {
            let vars = sample_three_from_pool(&pool, rng);
            if part.common_community(&vars).is_none() {
                return Ok(vars);
            }
        }
    }
    Err(Error::InfeasibleSelection(format!(
        "no cross-community triple found after {COMMUNITY_REDRAWS} community redraws \
         of {TRIPLE_ATTEMPTS} attempts each"
    )))
}

/// Core of [`set_polarity`] with the agreeing positions fixed; exposed for
/// deterministic tests.
pub(crate) fn apply_polarity(
    s: &Assignment,
    vars: [u32; 3],
    agree: [bool; 3],
) -> Result<Clause> {
    let mut lits = Vec::with_capacity(3);
    for (v, agrees) in vars.into_iter().zip(agree) {
        let planted = s.get(v)?;
        lits.push(crate::model::Literal::new(v, if agrees { planted } else { !planted }));
    }
    Clause::three([lits[0], lits[1], lits[2]])
}

/// Builds the clause over `vars` in which exactly `num_true` literals
/// (uniformly chosen positions, without replacement) agree with `s` and the
/// rest disagree. Requires `num_true` in `1..=3` and distinct in-range vars.
pub fn set_polarity<R: Rng + ?Sized>(
    s: &Assignment,
    vars: [u32; 3],
    num_true: usize,
    rng: &mut R,
) -> Result<Clause> {
    if !(1..=3).contains(&num_true) {
        return Err(Error::InvalidParameters(format!(
            "a clause has 1..=3 agreeing literals, got {num_true}"
        )));
    }
    let mut order = [0usize, 1, 2];
    for j in 0..num_true {
        let k = rng.random_range(j..3);
        order.swap(j, k);
    }
    let mut agree = [false; 3];
    for &i in &order[..num_true] {
        agree[i] = true;
    }
    apply_polarity(s, vars, agree)
}

/// Generates one instance. All randomness comes from `params.seed`, so equal
/// parameters reproduce the instance bit for bit.
pub fn generate_formula(params: &GeneratorParams) -> Result<GeneratedInstance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let solution = match &params.solution {
        SolutionSpec::Fixed(a) => a.clone(),
        SolutionSpec::Random => Assignment::random(params.n, &mut rng),
    };
    let partition = partition_communities(params.n, params.c, params.alpha, &mut rng)?;
    if params.p > 0.0 && (0..params.c as u32).all(|cid| partition.members(cid).len() < 3) {
        return Err(Error::InvalidParameters(format!(
            "p > 0 needs a community with at least three variables, \
             but n={} over c={} leaves none",
            params.n, params.c
        )));
    }

    let m = params.num_clauses();
    let mut clauses = Vec::with_capacity(m);
    let mut provenance = Vec::with_capacity(m);
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    for _ in 0..m {
        let mut attempts = 0usize;
        let (clause, origin) = loop {
            let intra = rng.random::<f64>() < params.p;
            let vars = if intra { select_one(&partition, &mut rng)? } else { select_three(&partition, &mut rng)? };
            let t = params.dist.sample_type(&mut rng);
            let clause = set_polarity(&solution, vars, t, &mut rng)?;
            let mode = if intra { SelectionMode::Intra } else { SelectionMode::Inter };
            if !params.reject_duplicate_clauses || seen.insert(clause.normalized_key()) {
                break (clause, ClauseOrigin { mode, clause_type: t as u8 });
            }
            attempts += 1;
            if attempts >= DUPLICATE_ATTEMPTS {
                return Err(Error::InfeasibleSelection(format!(
                    "could not draw a fresh clause after {DUPLICATE_ATTEMPTS} attempts \
                     ({} of {} placed)",
                    clauses.len(),
                    m
                )));
            }
        };
        clauses.push(clause);
        provenance.push(origin);
    }

    let formula = Formula::new(params.n, clauses)?;
    debug_assert!(matches!(evaluate(&formula, &solution), Ok(Evaluation::Satisfied)));
    Ok(GeneratedInstance { formula, solution, partition, params: params.clone(), provenance })
}

/// Stable per-index seed derivation (splitmix64 finalizer), so batches can
/// be regenerated or extended without disturbing existing instances.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates `count` instances with seeds derived from `master_seed`.
/// Instances are independent unless `base.solution` is fixed.
pub fn generate_batch(
    base: &GeneratorParams,
    count: usize,
    master_seed: u64,
) -> Result<Vec<GeneratedInstance>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut params = base.clone();
            params.seed = derive_seed(master_seed, i);
            generate_formula(&params)
        })
        .collect()
}
