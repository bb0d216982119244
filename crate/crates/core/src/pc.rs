//! Level-wise PC-style baseline: one skeleton search over the full
//! vertex set, then the same collider orientation and rules closure as
//! the decomposition learner. Used for head-to-head comparisons.

use itertools::Itertools;

use crate::chordal::UndirectedGraph;
use crate::ci::CiTester;
use crate::decomp::{
    apply_rules, minimum_bidirected, orient_v_structures, LearnOutput, SepsetMap, Variant,
    DENSE_POOL_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Learns the skeleton level by level: at level `ℓ`, every ordered
/// adjacent pair `(u, v)` is tested against all size-`ℓ` subsets of
/// `adj(u) \ {v}` (taken from the current graph, re-read after every
/// removal), and the first separating subset removes the edge. The
/// search stops once no pair has a pool larger than the level.
pub fn pc_skeleton(
    tester: &(impl CiTester + ?Sized),
    alpha: f64,
) -> Result<(UndirectedGraph, SepsetMap, Vec<String>)> {
    let p = tester.n_vars();
    let mut g = UndirectedGraph::complete(tester.names().to_vec())?;
    let mut sepsets = SepsetMap::new();
    let mut warnings = Vec::new();
    let mut level = 0;
    loop {
        let mut deeper = false;
        for u in 0..p {
            let nbrs: Vec<usize> = g.neighbors(u).iter().copied().collect();
            for &v in &nbrs {
                if !g.has_edge(u, v) {
                    continue; // removed earlier in this level
                }
                let pool: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| w != v)
                    .collect();
                if pool.len() > level {
                    deeper = true;
                }
                if pool.len() < level {
                    continue;
                }
                if level >= 1 && pool.len() > DENSE_POOL_LIMIT && warnings.is_empty() {
                    warnings.push(format!(
                        "vertex '{}' keeps {} neighbors after the first level; the level-wise search may be slow",
                        tester.names()[u],
                        pool.len()
                    ));
                }
                for combo in pool.iter().copied().combinations(level) {
                    let cond: VertexSet = combo.into_iter().collect();
                    match tester.test(u, v, &cond, alpha) {
                        Ok(r) if r.independent => {
                            g.remove_edge(u, v);
                            sepsets.insert_first(u, v, cond);
                            break;
                        }
                        Ok(_) => {}
                        Err(Error::InsufficientSamples { .. }) => break,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        if !deeper {
            break;
        }
        level += 1;
    }
    Ok((g, sepsets, warnings))
}

/// Runs the PC-style pipeline end to end. The output's `tree` is `None`:
/// this learner never builds one.
pub fn learn(
    tester: &(impl CiTester + ?Sized),
    alpha: f64,
    variant: Variant,
) -> Result<LearnOutput> {
    let (skeleton, sepsets, warnings) = pc_skeleton(tester, alpha)?;
    let mut graph = orient_v_structures(&skeleton, &sepsets);
    apply_rules(&mut graph);
    if variant == Variant::MinimumBidirected {
        graph = minimum_bidirected(&graph)?;
    }
    Ok(LearnOutput {
        graph,
        sepsets,
        tree: None,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::{GaussianStats, GaussianTester, OracleTester};
    use crate::decomp;
    use crate::graph::{Mark, MixedGraph};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|i| format!("x{i}")).collect()
    }

    fn gene_graph() -> MixedGraph {
        let mut g = MixedGraph::with_names(&["G1", "G2", "D1", "D2"]).unwrap();
        g.add_directed(0, 2).unwrap();
        g.add_directed(1, 3).unwrap();
        g.add_bidirected(2, 3).unwrap();
        g
    }

    fn random_mvr(rng: &mut StdRng, p: usize, prob: f64) -> MixedGraph {
        loop {
            let mut g = MixedGraph::new(names(p)).unwrap();
            for u in 0..p {
                for v in u + 1..p {
                    if rng.random::<f64>() < prob {
                        match rng.random_range(0..3) {
                            0 => g.add_directed(u, v).unwrap(),
                            1 => g.add_directed(v, u).unwrap(),
                            _ => g.add_bidirected(u, v).unwrap(),
                        }
                    }
                }
            }
            if g.is_mvr_cg() {
                return g;
            }
        }
    }

    #[test]
    fn oracle_recovers_the_gene_graph() {
        let t = OracleTester::new(gene_graph()).unwrap();
        let out = learn(&t, 0.05, Variant::Essential).unwrap();
        assert_eq!(out.graph, gene_graph());
        assert!(out.tree.is_none());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn agrees_with_the_decomposition_learner_on_oracles() {
        let mut rng = StdRng::seed_from_u64(41);
        for round in 0..20 {
            let p = 4 + round % 3;
            let g = random_mvr(&mut rng, p, 0.3);
            let t = OracleTester::new(g.clone()).unwrap();
            let by_pc = learn(&t, 0.05, Variant::Essential).unwrap();
            let by_decomp =
                decomp::learn(&t, 0.05, decomp::TreeSource::Tests, Variant::Essential).unwrap();
            assert_eq!(by_pc.graph, by_decomp.graph, "learners disagree on {g:?}");
        }
    }

    #[test]
    fn chain_covariance_gives_an_undirected_path() {
        // data from x0 -> x1 -> x2: the pattern cannot orient anything
        let cov = vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 2.0], vec![1.0, 2.0, 3.0]];
        let stats = GaussianStats::from_covariance(names(3), 1000, &cov).unwrap();
        let t = GaussianTester::new(stats);
        let out = learn(&t, 0.05, Variant::Essential).unwrap();
        assert_eq!(out.graph.n_edges(), 2);
        assert_eq!(out.graph.marks(0, 1), Some((Mark::Tail, Mark::Tail)));
        assert_eq!(out.graph.marks(1, 2), Some((Mark::Tail, Mark::Tail)));
        assert_eq!(out.sepsets.get(0, 2), Some(&[1].into_iter().collect()));

        // the minimum-bidirected variant picks a concrete member
        let out = learn(&t, 0.05, Variant::MinimumBidirected).unwrap();
        assert!(out.graph.is_mvr_cg());
        assert_eq!(out.graph.n_directed(), 2);
        assert_eq!(out.graph.n_bidirected(), 0);
    }

    #[test]
    fn runs_are_deterministic() {
        let mut rng = StdRng::seed_from_u64(42);
        let g = random_mvr(&mut rng, 6, 0.35);
        let t = OracleTester::new(g).unwrap();
        let a = learn(&t, 0.05, Variant::Essential).unwrap();
        let b = learn(&t, 0.05, Variant::Essential).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.sepsets, b.sepsets);
    }
}
