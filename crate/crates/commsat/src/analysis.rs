//! Variable incidence graph (VIG) and community metrics.
//!
//! The VIG has one node per variable; each clause distributes a total edge
//! weight of 1 evenly over the pairs of distinct variables it mentions
//! (weight 1/3 per pair for a three-literal clause). Modularity of a node
//! partition is the usual weighted form
//!
//! ```text
//! Q = sum_C [ W_in(C) / W  -  (deg(C) / D)^2 ]
//! ```
//!
//! with `W` the total edge weight, `W_in(C)` the weight inside community
//! `C`, `deg(C)` the summed weighted degrees of its nodes, and `D = 2W`.

use crate::generator::GeneratedInstance;
use crate::model::Formula;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Undirected weighted graph over nodes `1..=n` without self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(u32, u32), f64>,
    degrees: Vec<f64>,
    total: f64,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { n, edges: BTreeMap::new(), degrees: vec![0.0; n], total: 0.0 }
    }

    /// Adds `w` to the edge `{a, b}`. Panics on self-loops, out-of-range
    /// nodes, or non-positive weights; those are construction bugs.
    pub fn add_weight(&mut self, a: u32, b: u32, w: f64) {
        assert!(a != b, "self-loop on node {a}");
        assert!(
            a >= 1 && b >= 1 && a as usize <= self.n && b as usize <= self.n,
            "edge ({a}, {b}) outside 1..={}",
            self.n
        );
        assert!(w.is_finite() && w > 0.0, "edge weight must be positive, got {w}");
        let key = (a.min(b), a.max(b));
        *self.edges.entry(key).or_insert(0.0) += w;
        self.degrees[a as usize - 1] += w;
        self.degrees[b as usize - 1] += w;
        self.total += w;
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn edge_weight(&self, a: u32, b: u32) -> f64 {
        self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0)
    }

    /// Weighted degree of `var` (sum of incident edge weights).
    pub fn degree(&self, var: u32) -> f64 {
        self.degrees[var as usize - 1]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn edges(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.edges.iter().map(|(&k, &w)| (k, w))
    }
}

/// Builds the variable incidence graph of `f`. Each clause spreads total
/// weight 1 over its pairs of distinct variables; clauses with fewer than
/// two distinct variables add nothing.
pub fn build_vig(f: &Formula) -> WeightedGraph {
    let mut g = WeightedGraph::new(f.num_vars());
    let mut vars: Vec<u32> = Vec::with_capacity(8);
    for clause in f.clauses() {
        vars.clear();
        vars.extend(clause.iter().map(|l| l.var()));
        vars.sort_unstable();
        vars.dedup();
        let k = vars.len();
        if k < 2 {
            continue;
        }
        let w = 1.0 / (k * (k - 1) / 2) as f64;
        for i in 0..k {
            for j in i + 1..k {
                g.add_weight(vars[i], vars[j], w);
            }
        }
    }
    g
}

/// Weighted modularity of the node partition `community`, where
/// `community[i]` is the community of node `i + 1`. Community ids may be
/// arbitrary (they only need to be equal within a community).
///
/// An edgeless graph has modularity 0 by convention.
pub fn modularity(g: &WeightedGraph, community: &[u32]) -> Result<f64> {
    if community.len() != g.num_nodes() {
        return Err(Error::InvalidParameters(format!(
            "partition covers {} nodes, graph has {}",
            community.len(),
            g.num_nodes()
        )));
    }
    if g.total_weight() == 0.0 {
        return Ok(0.0);
    }

    let mut weight_in: BTreeMap<u32, f64> = BTreeMap::new();
    for ((a, b), w) in g.edges() {
        let (ca, cb) = (community[a as usize - 1], community[b as usize - 1]);
        if ca == cb {
            *weight_in.entry(ca).or_insert(0.0) += w;
        }
    }
    let mut degree_sum: BTreeMap<u32, f64> = BTreeMap::new();
    for (i, &d) in g.degrees().iter().enumerate() {
        *degree_sum.entry(community[i]).or_insert(0.0) += d;
    }

    let total = g.total_weight();
    let degree_total = 2.0 * total;
    let mut q = 0.0;
    for (&cid, &deg) in &degree_sum {
        let win = weight_in.get(&cid).copied().unwrap_or(0.0);
        q += win / total - (deg / degree_total).powi(2);
    }
    Ok(q)
}

/// Summary statistics of a generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceStats {
    pub num_vars: usize,
    pub num_clauses: usize,
    /// Clause counts by type (1, 2, 3 literals agreeing with the solution).
    pub type_counts: [usize; 3],
    /// Mean fraction of agreeing literals; estimates the distribution's beta.
    pub empirical_beta: f64,
    /// Clauses drawn inside a single community.
    pub intra_clauses: usize,
    pub intra_clause_fraction: f64,
    /// Variables belonging to their home community only.
    pub intra_variables: usize,
    /// VIG modularity of the home-community partition.
    pub modularity: f64,
    pub degree_mean: f64,
    /// Coefficient of variation (std/mean) of VIG degrees.
    pub degree_cv: f64,
    pub duplicate_clauses: usize,
}

/// Computes [`InstanceStats`] from the instance's own generation record.
pub fn instance_stats(inst: &GeneratedInstance) -> InstanceStats {
    let m = inst.formula.num_clauses();
    let type_counts = inst.type_counts();
    let agreeing: usize =
        type_counts.iter().enumerate().map(|(i, &count)| (i + 1) * count).sum();
    let empirical_beta = if m == 0 { 0.0 } else { agreeing as f64 / (3 * m) as f64 };

    let g = build_vig(&inst.formula);
    let q = modularity(&g, inst.partition.home_map())
        .expect("home map covers every variable of the formula");
    let n = g.num_nodes() as f64;
    let degree_mean = g.degrees().iter().sum::<f64>() / n;
    let variance =
        g.degrees().iter().map(|d| (d - degree_mean).powi(2)).sum::<f64>() / n;
    let degree_cv = if degree_mean > 0.0 { variance.sqrt() / degree_mean } else { 0.0 };

    let intra_clauses = inst.intra_clause_count();
    InstanceStats {
        num_vars: inst.formula.num_vars(),
        num_clauses: m,
        type_counts,
        empirical_beta,
        intra_clauses,
        intra_clause_fraction: if m == 0 { 0.0 } else { intra_clauses as f64 / m as f64 },
        intra_variables: inst.partition.intra_count(),
        modularity: q,
        degree_mean,
        degree_cv,
        duplicate_clauses: inst.formula.duplicate_clause_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_formula, GeneratorParams};
    use crate::model::{clause_type, Clause, Literal};

    fn clause(codes: &[i32]) -> Clause {
        Clause::new(codes.iter().map(|&c| Literal::from_dimacs(c).unwrap()).collect())
    }

    #[test]
    fn single_clause_spreads_weight_over_three_pairs() {
        let f = Formula::new(4, vec![clause(&[1, -2, 3])]).unwrap();
        let g = build_vig(&f);
        assert_eq!(g.num_edges(), 3);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            assert!((g.edge_weight(a, b) - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(g.edge_weight(1, 4), 0.0);
        assert!((g.total_weight() - 1.0).abs() < 1e-15);
        assert!((g.degree(1) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(g.degree(4), 0.0);
    }

    #[test]
    fn repeated_clauses_accumulate_weight() {
        let f = Formula::new(3, vec![clause(&[1, 2, 3]), clause(&[3, -1, 2])]).unwrap();
        let g = build_vig(&f);
        assert!((g.edge_weight(1, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.total_weight() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn general_widths_still_spread_unit_weight() {
        // Binary clause: one pair, full weight. Unit clause: nothing.
        // Width four: six pairs of weight 1/6.
        let f = Formula::new(
            6,
            vec![clause(&[1, 2]), clause(&[5]), clause(&[1, 2, 3, 4])],
        )
        .unwrap();
        let g = build_vig(&f);
        assert!((g.edge_weight(1, 2) - (1.0 + 1.0 / 6.0)).abs() < 1e-15);
        assert!((g.edge_weight(3, 4) - 1.0 / 6.0).abs() < 1e-15);
        assert!((g.total_weight() - 2.0).abs() < 1e-15);
        // Repeated variable: the clause (1 v 1 v 2) has one distinct pair.
        let f = Formula::new(2, vec![clause(&[1, 1, 2])]).unwrap();
        assert!((build_vig(&f).edge_weight(1, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_disjoint_triangles_have_modularity_half() {
        let mut g = WeightedGraph::new(6);
        for (a, b) in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)] {
            g.add_weight(a, b, 1.0);
        }
        let q = modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!((q - 0.5).abs() <= 1e-12, "q = {q}");
    }

    #[test]
    fn one_community_has_zero_modularity() {
        let mut g = WeightedGraph::new(4);
        g.add_weight(1, 2, 0.5);
        g.add_weight(3, 4, 1.5);
        let q = modularity(&g, &[7, 7, 7, 7]).unwrap();
        assert!(q.abs() <= 1e-15, "q = {q}");
    }

    #[test]
    fn splitting_a_triangle_gives_minus_one_third() {
        // All edges cross communities: Q = -3 * (2/6)^2 = -1/3.
        let mut g = WeightedGraph::new(3);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            g.add_weight(a, b, 1.0);
        }
        let q = modularity(&g, &[0, 1, 2]).unwrap();
        assert!((q + 1.0 / 3.0).abs() <= 1e-12, "q = {q}");
    }

    #[test]
    fn isolated_nodes_and_edgeless_graphs_are_fine() {
        let mut g = WeightedGraph::new(3);
        g.add_weight(1, 2, 1.0);
        // Node 3 is isolated; it contributes degree 0 wherever it is.
        let q_with = modularity(&g, &[0, 0, 1]).unwrap();
        let q_same = modularity(&g, &[0, 0, 0]).unwrap();
        assert!((q_with - q_same).abs() < 1e-15);

        assert_eq!(modularity(&WeightedGraph::new(5), &[0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn modularity_rejects_short_partitions() {
        let g = WeightedGraph::new(3);
        assert!(modularity(&g, &[0, 0]).is_err());
    }

    #[test]
    fn vig_total_weight_equals_clause_count() {
        let params = GeneratorParams { n: 90, c: 9, seed: 21, ..Default::default() };
        let inst = generate_formula(&params).unwrap();
        let g = build_vig(&inst.formula);
        assert!((g.total_weight() - inst.formula.num_clauses() as f64).abs() < 1e-9);
    }

    #[test]
    fn stats_agree_with_direct_recomputation() {
        let params =
            GeneratorParams { n: 120, c: 6, p: 0.6, alpha: 0.8, seed: 22, ..Default::default() };
        let inst = generate_formula(&params).unwrap();
        let stats = instance_stats(&inst);

        let mut counts = [0usize; 3];
        for cl in inst.formula.clauses() {
            counts[clause_type(cl, &inst.solution).unwrap() - 1] += 1;
        }
        assert_eq!(stats.type_counts, counts);
        assert_eq!(stats.num_clauses, 540);

        let beta = (counts[0] + 2 * counts[1] + 3 * counts[2]) as f64 / (3.0 * 540.0);
        assert!((stats.empirical_beta - beta).abs() < 1e-12);

        // Mean VIG degree is 2W/n = 2m/n = 2r exactly.
        assert!((stats.degree_mean - 2.0 * 540.0 / 120.0).abs() < 1e-9);
        assert!(stats.degree_cv > 0.0);
        assert_eq!(stats.intra_variables, inst.partition.intra_count());
        assert!(stats.modularity > 0.0 && stats.modularity < 1.0);
    }

    #[test]
    fn modularity_grows_with_intra_clause_probability() {
        // Quick directional check on a small grid; the full statistical
        // claim lives in the integration suite.
        let q_at = |p: f64| {
            let params =
                GeneratorParams { n: 200, c: 10, p, seed: 23, ..Default::default() };
            instance_stats(&generate_formula(&params).unwrap()).modularity
        };
        let (lo, mid, hi) = (q_at(0.1), q_at(0.5), q_at(0.9));
        assert!(lo < mid && mid < hi, "Q sequence: {lo:.3}, {mid:.3}, {hi:.3}");
    }
}
