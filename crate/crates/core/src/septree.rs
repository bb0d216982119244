//! Separation trees: trees whose nodes are vertex subsets covering the
//! whole variable set, where the separator on every tree edge (the
//! intersection of its two endpoint sets) m-separates the variables on one
//! side from those on the other.
//!
//! Three constructions are provided, all funnelling into the same
//! junction-tree pipeline (triangulate, enumerate maximal cliques, connect
//! by maximum-weight spanning tree):
//!
//! * [`tree_from_tester`] — from pairwise full-conditional independence
//!   tests against data,
//! * [`tree_from_graph`] — exact, from a known MVR chain graph,
//! * [`tree_from_hypergraph`] — from vertex clusters supplied directly.

use std::collections::VecDeque;

use crate::chordal::{CliqueTree, UndirectedGraph};
use crate::ci::{uig_from_tester, CiTester};
use crate::error::{Error, Result};
use crate::graph::{validate_names, MixedGraph, VertexSet};

/// One way a candidate tree fails to be a separation tree for a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Some vertices appear in no tree node.
    Coverage { missing: VertexSet },
    /// The separator of `edges()[edge]` does not m-separate the two sides
    /// of the tree it splits off.
    Separation { edge: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Coverage { missing } => {
                write!(f, "vertices {missing:?} appear in no tree node")
            }
            Violation::Separation { edge } => {
                write!(f, "separator of tree edge {edge} fails to m-separate its sides")
            }
        }
    }
}

/// A tree over vertex subsets ("nodes"), with each tree edge carrying the
/// intersection of its endpoints as separator. Nodes are kept in a
/// canonical order (sorted as element sequences) so equal trees compare
/// equal structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationTree {
    names: Vec<String>,
    nodes: Vec<VertexSet>,
    edges: Vec<(usize, usize, VertexSet)>,
}

impl SeparationTree {
    /// Builds a tree from node sets and connecting pairs. Separators are
    /// computed, not supplied. The pairs must form a spanning tree over
    /// the nodes (checked); whether it is a *separation* tree for any
    /// particular graph is the business of [`validate`].
    ///
    /// [`validate`]: SeparationTree::validate
    pub fn new(names: Vec<String>, nodes: Vec<VertexSet>, pairs: &[(usize, usize)]) -> Result<Self> {
        validate_names(&names)?;
        let p = names.len();
        for node in &nodes {
            if node.is_empty() {
                return Err(Error::Invalid("tree nodes must be non-empty".into()));
            }
            if let Some(&v) = node.iter().find(|&&v| v >= p) {
                return Err(Error::Invalid(format!("vertex index {v} out of range")));
            }
        }
        // canonical node order, then remap the connecting pairs
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
        let mut new_of_old = vec![0usize; nodes.len()];
        for (ni, &oi) in order.iter().enumerate() {
            new_of_old[oi] = ni;
        }
        let nodes: Vec<VertexSet> = order.iter().map(|&oi| nodes[oi].clone()).collect();

        if !nodes.is_empty() && pairs.len() + 1 != nodes.len() {
            return Err(Error::Invalid(format!(
                "{} nodes need {} connecting edges, got {}",
                nodes.len(),
                nodes.len() - 1,
                pairs.len()
            )));
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a >= nodes.len() || b >= nodes.len() || a == b {
                return Err(Error::Invalid(format!("bad tree edge ({a}, {b})")));
            }
            let (i, j) = (new_of_old[a].min(new_of_old[b]), new_of_old[a].max(new_of_old[b]));
            let sep: VertexSet = nodes[i].intersection(&nodes[j]).copied().collect();
            adj[i].push(j);
            adj[j].push(i);
            edges.push((i, j, sep));
        }
        edges.sort();
        // connectivity (edge count already matches a tree's)
        if !nodes.is_empty() {
            let mut seen = vec![false; nodes.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(i) = queue.pop_front() {
                for &j in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push_back(j);
                    }
                }
            }
            if count != nodes.len() {
                return Err(Error::Invalid("tree edges do not connect all nodes".into()));
            }
        }
        Ok(SeparationTree { names, nodes, edges })
    }

    fn from_clique_tree(names: Vec<String>, ct: CliqueTree) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = ct.edges.iter().map(|&(i, j, _)| (i, j)).collect();
        Self::new(names, ct.cliques, &pairs)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[VertexSet] {
        &self.nodes
    }

    /// Tree edges as `(node i, node j, separator)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize, VertexSet)] {
        &self.edges
    }

    /// Indices of the nodes containing vertex `v`, ascending.
    pub fn nodes_containing(&self, v: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].contains(&v))
            .collect()
    }

    /// Node indices on the same side as `side` after deleting edge `skip`.
    fn side_of(&self, side: usize, skip: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([side]);
        seen[side] = true;
        while let Some(i) = queue.pop_front() {
            for (e, &(a, b, _)) in self.edges.iter().enumerate() {
                if e == skip {
                    continue;
                }
                let j = match (a == i, b == i) {
                    (true, _) => b,
                    (_, true) => a,
                    _ => continue,
                };
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }

    /// Checks the two defining properties against a graph: the nodes
    /// jointly cover every vertex, and each edge separator m-separates
    /// the two sides it splits the tree into. Returns every violation
    /// found (empty means the tree is a separation tree for `g`).
    pub fn validate(&self, g: &MixedGraph) -> Result<Vec<Violation>> {
        if g.names() != self.names {
            return Err(Error::VertexMismatch(
                "tree and graph are over different variables".into(),
            ));
        }
        let mut violations = Vec::new();
        let covered: VertexSet = self.nodes.iter().flatten().copied().collect();
        let missing: VertexSet = (0..g.n_vertices()).filter(|v| !covered.contains(v)).collect();
        if !missing.is_empty() {
            violations.push(Violation::Coverage { missing });
        }
        for (e, (i, _, sep)) in self.edges.iter().enumerate() {
            let on_side = self.side_of(*i, e);
            let mut v1 = VertexSet::new();
            let mut v2 = VertexSet::new();
            for (k, node) in self.nodes.iter().enumerate() {
                if on_side[k] {
                    v1.extend(node);
                } else {
                    v2.extend(node);
                }
            }
            let x: VertexSet = v1.difference(sep).copied().collect();
            let y: VertexSet = v2.difference(sep).copied().collect();
            if x.is_empty() || y.is_empty() {
                continue;
            }
            if x.intersection(&y).next().is_some() || !g.m_separated(&x, &y, sep)? {
                violations.push(Violation::Separation { edge: e });
            }
        }
        Ok(violations)
    }
}

/// A set of vertex clusters over named variables, reduced so that no
/// cluster is contained in another. The clusters must jointly cover every
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    names: Vec<String>,
    edges: Vec<VertexSet>,
    dropped: usize,
}

impl Hypergraph {
    pub fn new(names: Vec<String>, edges: Vec<VertexSet>) -> Result<Self> {
        validate_names(&names)?;
        let p = names.len();
        if edges.is_empty() && p > 0 {
            return Err(Error::EmptyHypergraph);
        }
        let mut covered = VertexSet::new();
        for e in &edges {
            if e.is_empty() {
                return Err(Error::Invalid("hyperedges must be non-empty".into()));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= p) {
                return Err(Error::Invalid(format!("vertex index {v} out of range")));
            }
            covered.extend(e);
        }
        if covered.len() != p {
            let missing: Vec<&str> = (0..p)
                .filter(|v| !covered.contains(v))
                .map(|v| names[v].as_str())
                .collect();
            return Err(Error::Invalid(format!(
                "hyperedges cover no part of: {}",
                missing.join(", ")
            )));
        }
        // subsumption reduction, largest first so containers are kept
        let mut input = edges;
        input.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut kept: Vec<VertexSet> = Vec::new();
        let mut dropped = 0;
        for e in input {
            if kept.iter().any(|k| e.is_subset(k)) {
                dropped += 1;
            } else {
                kept.push(e);
            }
        }
        kept.sort();
        Ok(Hypergraph { names, edges: kept, dropped })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    /// How many input hyperedges were dropped as duplicates or subsets.
    pub fn dropped(&self) -> usize {
        self.dropped
    }
}

/// The clusters `component ∪ parents(component)`, one per chain component
/// of an MVR chain graph. A separation tree built from these is always
/// valid for the graph.
pub fn component_hypergraph(g: &MixedGraph) -> Result<Hypergraph> {
    let comps = g.chain_components()?;
    let edges = comps
        .into_iter()
        .map(|tau| {
            let mut h = tau.clone();
            for &v in &tau {
                h.extend(g.parents(v));
            }
            h
        })
        .collect();
    Hypergraph::new(g.names().to_vec(), edges)
}

fn tree_from_uig(uig: &UndirectedGraph) -> Result<SeparationTree> {
    let tri = uig.triangulate();
    let ct = tri.junction_tree()?;
    SeparationTree::from_clique_tree(uig.names().to_vec(), ct)
}

/// Builds a separation tree from data: pairwise tests of `u ⫫ v | rest`
/// give an undirected independence graph, whose triangulated junction
/// tree is returned.
pub fn tree_from_tester(tester: &(impl CiTester + ?Sized), alpha: f64) -> Result<SeparationTree> {
    tree_from_uig(&uig_from_tester(tester, alpha)?)
}

/// Builds a separation tree exactly from a known MVR chain graph. The
/// pairwise full-conditional independence graph of such a graph is its
/// augmented graph, so no tests are needed.
pub fn tree_from_graph(g: &MixedGraph) -> Result<SeparationTree> {
    if !g.is_mvr_cg() {
        return Err(Error::NotChainGraph(
            "separation trees are built for MVR chain graphs".into(),
        ));
    }
    tree_from_uig(&g.augmented())
}

/// Builds a separation tree from vertex clusters: each hyperedge is made
/// complete in an undirected graph, which then goes through the junction
/// tree pipeline.
pub fn tree_from_hypergraph(h: &Hypergraph) -> Result<SeparationTree> {
    let mut uig = UndirectedGraph::new(h.names().to_vec())?;
    for e in h.edges() {
        let vs: Vec<usize> = e.iter().copied().collect();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                uig.link(u, v);
            }
        }
    }
    tree_from_uig(&uig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::{GaussianStats, GaussianTester, OracleTester};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

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
    fn gene_graph_collapses_to_one_node() {
        let g = gene_graph();
        let h = component_hypergraph(&g).unwrap();
        assert_eq!(h.edges(), &[set(&[0, 1, 2, 3])]);
        assert_eq!(h.dropped(), 2); // {G1} and {G2} are subsumed

        let t = tree_from_graph(&g).unwrap();
        assert_eq!(t.nodes(), &[set(&[0, 1, 2, 3])]);
        assert!(t.edges().is_empty());
        assert_eq!(t, tree_from_hypergraph(&h).unwrap());
        assert!(t.validate(&g).unwrap().is_empty());
    }

    #[test]
    fn chain_graph_gives_a_two_node_tree() {
        let mut g = MixedGraph::with_names(&["a", "b", "c"]).unwrap();
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        let t = tree_from_graph(&g).unwrap();
        assert_eq!(t.nodes(), &[set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(t.edges(), &[(0, 1, set(&[1]))]);
        assert!(t.validate(&g).unwrap().is_empty());
        assert_eq!(t.nodes_containing(1), vec![0, 1]);
        assert_eq!(t.nodes_containing(0), vec![0]);
    }

    #[test]
    fn gaussian_data_gives_the_chain_tree() {
        // covariance of x0 -> x1 -> x2 with unit weights and noise
        let cov = vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 2.0], vec![1.0, 2.0, 3.0]];
        let stats = GaussianStats::from_covariance(names(3), 1000, &cov).unwrap();
        let t = tree_from_tester(&GaussianTester::new(stats), 0.05).unwrap();
        assert_eq!(t.nodes(), &[set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(t.edges(), &[(0, 1, set(&[1]))]);
    }

    #[test]
    fn hypergraph_reduction_and_checks() {
        let h = Hypergraph::new(
            names(4),
            vec![set(&[0, 1]), set(&[1]), set(&[0, 1, 2]), set(&[3])],
        )
        .unwrap();
        assert_eq!(h.edges(), &[set(&[0, 1, 2]), set(&[3])]);
        assert_eq!(h.dropped(), 2);

        assert!(matches!(Hypergraph::new(names(2), vec![]), Err(Error::EmptyHypergraph)));
        assert!(Hypergraph::new(names(3), vec![set(&[0, 1])]).is_err()); // x2 uncovered
        assert!(Hypergraph::new(names(2), vec![set(&[0]), set(&[])]).is_err());
        assert!(Hypergraph::new(names(2), vec![set(&[0, 5])]).is_err());
    }

    #[test]
    fn validate_reports_bad_trees() {
        let mut g = MixedGraph::with_names(&["a", "b", "c"]).unwrap();
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();

        // b -> c crosses the empty separator between {a,b} and {c}
        let t = SeparationTree::new(
            g.names().to_vec(),
            vec![set(&[0, 1]), set(&[2])],
            &[(0, 1)],
        )
        .unwrap();
        assert_eq!(t.validate(&g).unwrap(), vec![Violation::Separation { edge: 0 }]);

        // one node misses vertex c entirely
        let t = SeparationTree::new(g.names().to_vec(), vec![set(&[0, 1])], &[]).unwrap();
        assert_eq!(
            t.validate(&g).unwrap(),
            vec![Violation::Coverage { missing: set(&[2]) }]
        );

        let other = MixedGraph::with_names(&["x", "y", "z"]).unwrap();
        assert!(matches!(t.validate(&other), Err(Error::VertexMismatch(_))));
    }

    #[test]
    fn new_rejects_non_trees() {
        assert!(SeparationTree::new(names(2), vec![set(&[0]), set(&[1])], &[]).is_err());
        assert!(SeparationTree::new(
            names(3),
            vec![set(&[0]), set(&[1]), set(&[2])],
            &[(0, 1), (0, 1)]
        )
        .is_err());
        assert!(SeparationTree::new(names(2), vec![set(&[0]), set(&[1])], &[(0, 0)]).is_err());
        assert!(SeparationTree::new(names(1), vec![set(&[])], &[]).is_err());
    }

    #[test]
    fn node_order_is_canonical() {
        let a = SeparationTree::new(names(3), vec![set(&[1, 2]), set(&[0, 1])], &[(0, 1)]).unwrap();
        let b = SeparationTree::new(names(3), vec![set(&[0, 1]), set(&[1, 2])], &[(1, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.nodes()[0], set(&[0, 1]));
    }

    #[test]
    fn graph_and_hypergraph_routes_agree_and_validate() {
        let mut rng = StdRng::seed_from_u64(11);
        for round in 0..100 {
            let p = 3 + (round % 6);
            let g = random_mvr(&mut rng, p, 0.3);
            let t1 = tree_from_graph(&g).unwrap();
            let t2 = tree_from_hypergraph(&component_hypergraph(&g).unwrap()).unwrap();
            assert_eq!(t1, t2, "routes disagree on {g:?}");
            assert!(t1.validate(&g).unwrap().is_empty(), "violations for {g:?}");
            let t3 = tree_from_tester(&OracleTester::new(g.clone()).unwrap(), 0.5).unwrap();
            assert_eq!(t1, t3);
        }
    }

    #[test]
    fn every_boundary_fits_in_some_node() {
        // a vertex and its whole boundary always share a tree node, which
        // is what lets local learning recover each vertex's neighborhood
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..100 {
            let g = random_mvr(&mut rng, 8, 0.25);
            let t = tree_from_graph(&g).unwrap();
            for v in 0..g.n_vertices() {
                let mut want = g.boundary(v);
                want.insert(v);
                assert!(
                    t.nodes().iter().any(|node| want.is_subset(node)),
                    "no node holds {want:?} in {g:?}"
                );
            }
        }
    }

    #[test]
    fn disconnected_graphs_are_joined_by_empty_separators() {
        let mut g = MixedGraph::with_names(&["a", "b", "c", "d"]).unwrap();
        g.add_directed(0, 1).unwrap();
        g.add_bidirected(2, 3).unwrap();
        let t = tree_from_graph(&g).unwrap();
        assert_eq!(t.nodes(), &[set(&[0, 1]), set(&[2, 3])]);
        assert_eq!(t.edges(), &[(0, 1, set(&[]))]);
        assert!(t.validate(&g).unwrap().is_empty());
    }
}
