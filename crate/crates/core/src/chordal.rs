//! Undirected graphs and the chordal toolbox: vertex separation,
//! min-fill triangulation, chordality testing, maximal cliques, and
//! junction trees.
//!
//! Everything here is deterministic. Ties in the greedy min-fill order
//! and in maximum-cardinality search go to the smallest vertex index;
//! ties between candidate junction-tree edges go to the smaller clique
//! index pair.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{validate_names, MixedGraph, VertexSet};

/// Simple undirected graph over named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    names: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
}

/// Junction tree over the maximal cliques of a chordal graph. Tree edges
/// carry the separator, which always equals the intersection of its two
/// clique endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree {
    pub cliques: Vec<VertexSet>,
    pub edges: Vec<(usize, usize, VertexSet)>,
}

impl UndirectedGraph {
    pub fn new(names: Vec<String>) -> Result<Self> {
        validate_names(&names)?;
        let adj = vec![BTreeSet::new(); names.len()];
        Ok(UndirectedGraph { names, adj })
    }

    pub fn with_names(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|s| s.to_string()).collect())
    }

    /// Complete graph on the given names.
    pub fn complete(names: Vec<String>) -> Result<Self> {
        let mut g = Self::new(names)?;
        for u in 0..g.n_vertices() {
            for v in u + 1..g.n_vertices() {
                g.link(u, v);
            }
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Inserts an edge; answers whether it was new. Panics on self loops
    /// or out-of-range indices (internal use). See [`add_edge`] for the
    /// checked variant.
    ///
    /// [`add_edge`]: UndirectedGraph::add_edge
    pub(crate) fn link(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self loop");
        let new = self.adj[u].insert(v);
        self.adj[v].insert(u);
        new
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n_vertices() || v >= self.n_vertices() {
            return Err(Error::Invalid(format!("vertex index out of range ({u}, {v})")));
        }
        if u == v {
            return Err(Error::Invalid(format!("self loop at '{}'", self.names[u])));
        }
        Ok(self.link(u, v))
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let had = self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        had
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// View as a mixed graph whose edges are all undirected.
    pub fn to_mixed(&self) -> MixedGraph {
        let mut g = MixedGraph::new(self.names.clone()).expect("names already validated");
        for (u, v) in self.edges() {
            g.add_undirected(u, v).expect("valid edge");
        }
        g
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if let Some(&v) = s.iter().find(|&&v| v >= self.n_vertices()) {
            return Err(Error::Invalid(format!("vertex index {v} out of range")));
        }
        Ok(())
    }

    /// Vertex separation: no path from `X` to `Y` avoiding `Z`.
    pub fn u_separated(&self, x: &VertexSet, y: &VertexSet, z: &VertexSet) -> Result<bool> {
        self.check_set(x)?;
        self.check_set(y)?;
        self.check_set(z)?;
        if x.is_empty() || y.is_empty() {
            return Err(Error::OverlappingSets("X and Y must be non-empty".into()));
        }
        if x.intersection(y).next().is_some()
            || x.intersection(z).next().is_some()
            || y.intersection(z).next().is_some()
        {
            return Err(Error::OverlappingSets(
                "X, Y and Z must be pairwise disjoint".into(),
            ));
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut queue: VecDeque<usize> = x.iter().copied().collect();
        for &v in x {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            if y.contains(&v) {
                return Ok(false);
            }
            for &w in &self.adj[v] {
                if !seen[w] && !z.contains(&w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(true)
    }

    /// Greedy min-fill triangulation. At each step the remaining vertex
    /// whose elimination adds the fewest fill edges (smallest index on
    /// ties) is eliminated; fill edges accumulate into the result, so the
    /// output is a chordal supergraph of the input.
    pub fn triangulate(&self) -> UndirectedGraph {
        let p = self.n_vertices();
        let mut work = self.clone();
        let mut out = self.clone();
        let mut remaining: BTreeSet<usize> = (0..p).collect();
        while !remaining.is_empty() {
            let mut best = (usize::MAX, usize::MAX); // (fill count, vertex)
            for &v in &remaining {
                let nbrs: Vec<usize> = work.adj[v]
                    .iter()
                    .copied()
                    .filter(|w| remaining.contains(w))
                    .collect();
                let mut fill = 0;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if !work.has_edge(a, b) {
                            fill += 1;
                        }
                    }
                }
                if (fill, v) < best {
                    best = (fill, v);
                }
            }
            let v = best.1;
            let nbrs: Vec<usize> = work.adj[v]
                .iter()
                .copied()
                .filter(|w| remaining.contains(w))
                .collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !work.has_edge(a, b) {
                        work.link(a, b);
                        out.link(a, b);
                    }
                }
            }
            remaining.remove(&v);
        }
        out
    }

    /// Maximum-cardinality search pick order: repeatedly pick the
    /// unpicked vertex with the most picked neighbors, smallest index on
    /// ties.
    pub fn mcs_order(&self) -> Vec<usize> {
        let p = self.n_vertices();
        let mut weight = vec![0usize; p];
        let mut picked = vec![false; p];
        let mut order = Vec::with_capacity(p);
        for _ in 0..p {
            let v = (0..p)
                .filter(|&v| !picked[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .unwrap();
            picked[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !picked[w] {
                    weight[w] += 1;
                }
            }
        }
        order
    }

    /// Chordality via MCS: the graph is chordal iff for every vertex the
    /// already-picked neighbors minus the most recently picked one are all
    /// adjacent to that most recent one.
    pub fn is_chordal(&self) -> bool {
        let order = self.mcs_order();
        let mut pos = vec![0usize; self.n_vertices()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for (i, &v) in order.iter().enumerate() {
            let earlier: Vec<usize> = self.adj[v].iter().copied().filter(|&w| pos[w] < i).collect();
            if earlier.len() < 2 {
                continue;
            }
            let m = *earlier.iter().max_by_key(|&&w| pos[w]).unwrap();
            for &w in &earlier {
                if w != m && !self.has_edge(w, m) {
                    return false;
                }
            }
        }
        true
    }

    /// Maximal cliques of a chordal graph, each sorted, the list sorted
    /// lexicographically. Errors with [`Error::NotChordal`] otherwise.
    pub fn max_cliques(&self) -> Result<Vec<VertexSet>> {
        if !self.is_chordal() {
            return Err(Error::NotChordal);
        }
        let order = self.mcs_order();
        let mut pos = vec![0usize; self.n_vertices()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut cands: Vec<VertexSet> = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            let mut c: VertexSet = self.adj[v].iter().copied().filter(|&w| pos[w] < i).collect();
            c.insert(v);
            cands.push(c);
        }
        let mut keep: Vec<VertexSet> = Vec::new();
        for c in &cands {
            if !cands.iter().any(|d| d.len() > c.len() && c.is_subset(d)) {
                keep.push(c.clone());
            }
        }
        keep.sort();
        keep.dedup();
        Ok(keep)
    }

    /// Junction tree: maximum-weight spanning tree of the clique graph
    /// under separator size (Kruskal; ties by smaller clique index pair).
    /// Cliques with empty intersection across components are joined by
    /// empty separators, so the result is always a single tree.
    pub fn junction_tree(&self) -> Result<CliqueTree> {
        let cliques = self.max_cliques()?;
        let k = cliques.len();
        if k == 0 {
            return Ok(CliqueTree { cliques, edges: Vec::new() });
        }
        let mut cands: Vec<(usize, usize, usize)> = Vec::new(); // (weight, i, j)
        for i in 0..k {
            for j in i + 1..k {
                let w = cliques[i].intersection(&cliques[j]).count();
                cands.push((w, i, j));
            }
        }
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut edges = Vec::with_capacity(k.saturating_sub(1));
        for (_, i, j) in cands {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                let sep: VertexSet = cliques[i].intersection(&cliques[j]).copied().collect();
                edges.push((i, j, sep));
            }
        }
        edges.sort_by_key(|&(i, j, _)| (i, j));
        Ok(CliqueTree { cliques, edges })
    }
}
