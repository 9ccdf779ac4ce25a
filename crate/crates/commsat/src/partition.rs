//! Variable-to-community partition.
//!
//! Every variable gets a *home* community; communities are balanced (sizes
//! differ by at most one). A `1 - alpha` fraction of each community's
//! variables is then promoted to *inter-community* variables: they keep
//! their home but additionally join one other community chosen uniformly.
//! Intra-community variables (the remaining `alpha` fraction) belong to
//! their home only and carry double weight when clauses are drawn inside a
//! community.

use crate::{Error, Result};
use rand::Rng;

/// Communities are identified by `0..c`; variables by `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityPartition {
    n: usize,
    c: usize,
    home: Vec<u32>,
    second: Vec<Option<u32>>,
    /// Per community: sorted variables that belong to it (home or second).
    members: Vec<Vec<u32>>,
}

impl CommunityPartition {
    /// Rebuilds a partition from its raw maps (e.g. from a metadata file),
    /// checking all structural invariants.
    pub fn from_parts(n: usize, c: usize, home: Vec<u32>, second: Vec<Option<u32>>) -> Result<Self> {
        if home.len() != n || second.len() != n {
            return Err(Error::InvalidParameters(format!(
                "partition maps must cover all {n} variables (got {} home, {} second entries)",
                home.len(),
                second.len()
            )));
        }
        if c == 0 {
            return Err(Error::InvalidParameters("need at least one community".into()));
        }
        for (i, &h) in home.iter().enumerate() {
            if h as usize >= c {
                return Err(Error::InvalidParameters(format!(
                    "variable {} has home community {h}, but there are only {c}",
                    i + 1
                )));
            }
            if let Some(s) = second[i] {
                if s as usize >= c {
                    return Err(Error::InvalidParameters(format!(
                        "variable {} joins community {s}, but there are only {c}",
                        i + 1
                    )));
                }
                if s == h {
                    return Err(Error::InvalidParameters(format!(
                        "variable {} lists its home community {h} twice",
                        i + 1
                    )));
                }
            }
        }
        let mut members = vec![Vec::new(); c];
        for (i, &h) in home.iter().enumerate() {
            members[h as usize].push(i as u32 + 1);
            if let Some(s) = second[i] {
                members[s as usize].push(i as u32 + 1);
            }
        }
        for list in &mut members {
            list.sort_unstable();
        }
        if let Some(empty) = members.iter().position(|l| l.is_empty()) {
            return Err(Error::InvalidParameters(format!("community {empty} has no members")));
        }
        Ok(CommunityPartition { n, c, home, second, members })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_communities(&self) -> usize {
        self.c
    }

    /// Home community of `var`. Panics if `var` is out of range.
    pub fn home(&self, var: u32) -> u32 {
        self.home[var as usize - 1]
    }

    /// The extra community an inter-community variable joins.
    pub fn second(&self, var: u32) -> Option<u32> {
        self.second[var as usize - 1]
    }

    /// True for variables that belong to their home community only.
    pub fn is_intra(&self, var: u32) -> bool {
        self.second[var as usize - 1].is_none()
    }

    /// Sorted variables belonging to community `cid` (home or joined).
    pub fn members(&self, cid: u32) -> &[u32] {
        &self.members[cid as usize]
    }

    /// Sampling weight of `var` inside community `cid`: intra-community
    /// members count twice, joined members once, outsiders zero.
    pub fn weight_in(&self, var: u32, cid: u32) -> u32 {
        let idx = var as usize - 1;
        if self.home[idx] == cid {
            if self.second[idx].is_none() {
                2
            } else {
                1
            }
        } else if self.second[idx] == Some(cid) {
            1
        } else {
            0
        }
    }

    /// Some community containing every listed variable, if one exists.
    pub fn common_community(&self, vars: &[u32]) -> Option<u32> {
        let (&first, rest) = vars.split_first()?;
        let idx = first as usize - 1;
        let mut candidates = [Some(self.home[idx]), self.second[idx]];
        for cid in candidates.iter_mut().flatten() {
            if rest.iter().all(|&v| {
                let j = v as usize - 1;
                self.home[j] == *cid || self.second[j] == Some(*cid)
            }) {
                return Some(*cid);
            }
        }
        None
    }

    pub fn intra_count(&self) -> usize {
        self.second.iter().filter(|s| s.is_none()).count()
    }

    pub fn inter_count(&self) -> usize {
        self.n - self.intra_count()
    }

    pub fn home_map(&self) -> &[u32] {
        &self.home
    }

    pub fn second_map(&self) -> &[Option<u32>] {
        &self.second
    }

    /// Re-checks all structural invariants; useful after deserialization.
    pub fn validate(&self) -> Result<()> {
        let rebuilt =
            CommunityPartition::from_parts(self.n, self.c, self.home.clone(), self.second.clone())?;
        if rebuilt.members != self.members {
            return Err(Error::InvalidParameters(
                "membership lists inconsistent with home/second maps".into(),
            ));
        }
        Ok(())
    }
}

/// Draws a random balanced partition of `1..=n` into `c` communities and
/// promotes a `1 - alpha` fraction of each community to inter-community
/// variables (rounded to nearest, ties to even).
///
/// Requires `1 <= c <= n` and `alpha` in `[0, 1]`; promotion needs somewhere
/// to go, so `alpha < 1` requires `c >= 2`.
pub fn partition_communities<R: Rng + ?Sized>(
    n: usize,
    c: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<CommunityPartition> {
    if c == 0 || c > n {
        return Err(Error::InvalidParameters(format!(
            "community count must satisfy 1 <= c <= n, got c={c}, n={n}"
        )));
    }
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameters(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if alpha < 1.0 && c < 2 {
        return Err(Error::InvalidParameters(
            "alpha < 1 promotes variables into another community, so c >= 2 is required".into(),
        ));
    }

    // Balanced home assignment: shuffle the variables, then cut into chunks
    // of size n/c, the first n % c chunks one larger.
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    for j in 0..n.saturating_sub(1) {
        let k = rng.random_range(j..n);
        perm.swap(j, k);
    }
    let mut home = vec![0u32; n];
    let base = n / c;
    let extra = n % c;
    let mut cursor = 0usize;
    let mut home_lists: Vec<Vec<u32>> = Vec::with_capacity(c);
    for cid in 0..c {
        let size = base + usize::from(cid < extra);
        let chunk = &perm[cursor..cursor + size];
        cursor += size;
        for &v in chunk {
            home[v as usize - 1] = cid as u32;
        }
        let mut list = chunk.to_vec();
        list.sort_unstable();
        home_lists.push(list);
    }

    // Promote round(h * (1 - alpha)) variables per community; each joins one
    // uniformly chosen other community.
    let mut second: Vec<Option<u32>> = vec![None; n];
    for (cid, list) in home_lists.iter_mut().enumerate() {
        let k = (list.len() as f64 * (1.0 - alpha)).round_ties_even() as usize;
        for j in 0..k {
            let pick = rng.random_range(j..list.len());
            list.swap(j, pick);
            let other = rng.random_range(0..c as u32 - 1);
            let dest = if other >= cid as u32 { other + 1 } else { other };
            second[list[j] as usize - 1] = Some(dest);
        }
    }

    CommunityPartition::from_parts(n, c, home, second)
}
