//! Structure learning by separation-tree decomposition.
//!
//! The pipeline: build (or accept) a separation tree, learn a local
//! skeleton inside every tree node by exhaustive subset search, combine
//! the local results into one global skeleton, orient unshielded
//! colliders from the recorded separation sets, and close the result
//! under the pattern rules. An optional final step orients the remaining
//! undirected edges so that the returned graph realizes the pattern with
//! as few bidirected edges as possible.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::chordal::UndirectedGraph;
use crate::ci::CiTester;
use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, VertexSet};
use crate::septree::{tree_from_hypergraph, tree_from_tester, Hypergraph, SeparationTree};

/// Local searches over vertex pools larger than this put a warning in the
/// learn output: the subset search is exponential in the pool size.
pub const DENSE_POOL_LIMIT: usize = 20;

/// Separation sets recorded for removed pairs. Keys are unordered; the
/// first set recorded for a pair wins, later inserts are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepsetMap {
    inner: BTreeMap<(usize, usize), VertexSet>,
}

impl SepsetMap {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    /// Records `s` for the pair unless a set is already present; answers
    /// whether the insert happened.
    pub fn insert_first(&mut self, u: usize, v: usize, s: VertexSet) -> bool {
        match self.inner.entry(Self::key(u, v)) {
            Entry::Vacant(e) => {
                e.insert(s);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&VertexSet> {
        self.inner.get(&Self::key(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.inner.contains_key(&Self::key(u, v))
    }

    /// Pairs and their sets, ascending by `(min, max)` key.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &VertexSet)> {
        self.inner.iter()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }
}

/// Where the separation tree comes from.
#[derive(Clone, Copy, Debug)]
pub enum TreeSource<'a> {
    /// Build it from pairwise full-conditional independence tests.
    Tests,
    /// Build it from supplied vertex clusters.
    Hypergraph(&'a Hypergraph),
    /// Use this tree as given.
    Tree(&'a SeparationTree),
}

/// Which graph the learner returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// The pattern: skeleton, unshielded colliders, and every orientation
    /// the rules force. Undirected edges mean "directed or bidirected,
    /// depending on the class member".
    Essential,
    /// A concrete MVR chain graph realizing the pattern with the fewest
    /// bidirected edges.
    MinimumBidirected,
}

/// Everything a learner run produces.
#[derive(Clone, Debug)]
pub struct LearnOutput {
    pub graph: MixedGraph,
    pub sepsets: SepsetMap,
    /// The separation tree used, when the learner had one.
    pub tree: Option<SeparationTree>,
    /// Human-readable notes (dense search pools and the like).
    pub warnings: Vec<String>,
}

/// Searches subsets of `pool` in increasing cardinality (lexicographic
/// within each size) for one that separates `u` from `v`; answers the
/// first hit. Cardinalities the tester cannot support at its sample size
/// end the search empty-handed.
fn find_separator(
    tester: &(impl CiTester + ?Sized),
    u: usize,
    v: usize,
    pool: &VertexSet,
    alpha: f64,
) -> Result<Option<VertexSet>> {
    let pool: Vec<usize> = pool.iter().copied().collect();
    for k in 0..=pool.len() {
        for combo in pool.iter().copied().combinations(k) {
            let cond: VertexSet = combo.into_iter().collect();
            match tester.test(u, v, &cond, alpha) {
                Ok(r) if r.independent => return Ok(Some(cond)),
                Ok(_) => {}
                Err(Error::InsufficientSamples { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

/// Learns one skeleton per tree node: inside node `C`, the pair `(u, v)`
/// stays adjacent iff no `S ⊆ C \ {u, v}` separates it. Pairs already
/// separated in an earlier node are skipped — one separator certifies
/// global non-adjacency, so the combined result is unchanged.
///
/// Returns the kept pairs per node, the recorded separators, and
/// warnings for nodes whose search pool exceeds [`DENSE_POOL_LIMIT`].
pub fn local_skeletons(
    tester: &(impl CiTester + ?Sized),
    tree: &SeparationTree,
    alpha: f64,
) -> Result<(Vec<BTreeSet<(usize, usize)>>, SepsetMap, Vec<String>)> {
    if tree.names() != tester.names() {
        return Err(Error::VertexMismatch(
            "tree and tester are over different variables".into(),
        ));
    }
    let mut sepsets = SepsetMap::new();
    let mut warnings = Vec::new();
    let mut kept_all = Vec::with_capacity(tree.n_nodes());
    for (i, node) in tree.nodes().iter().enumerate() {
        if node.len() > DENSE_POOL_LIMIT {
            warnings.push(format!(
                "separation-tree node {i} spans {} vertices; the exhaustive local search is exponential and may be slow",
                node.len()
            ));
        }
        let vs: Vec<usize> = node.iter().copied().collect();
        let mut kept = BTreeSet::new();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                if sepsets.contains(u, v) {
                    continue;
                }
                let pool: VertexSet =
                    node.iter().copied().filter(|&w| w != u && w != v).collect();
                match find_separator(tester, u, v, &pool, alpha)? {
                    Some(s) => {
                        sepsets.insert_first(u, v, s);
                    }
                    None => {
                        kept.insert((u, v));
                    }
                }
            }
        }
        kept_all.push(kept);
    }
    Ok((kept_all, sepsets, warnings))
}

/// Combines local skeletons into the global one: vertices are adjacent
/// iff they share at least one tree node and every node containing both
/// kept the edge.
pub fn combine(
    tree: &SeparationTree,
    locals: &[BTreeSet<(usize, usize)>],
) -> Result<UndirectedGraph> {
    if locals.len() != tree.n_nodes() {
        return Err(Error::Invalid(format!(
            "{} local skeletons for {} tree nodes",
            locals.len(),
            tree.n_nodes()
        )));
    }
    let p = tree.names().len();
    let mut g = UndirectedGraph::new(tree.names().to_vec())?;
    for u in 0..p {
        for v in u + 1..p {
            let mut co_located = false;
            let mut kept_everywhere = true;
            for (i, node) in tree.nodes().iter().enumerate() {
                if node.contains(&u) && node.contains(&v) {
                    co_located = true;
                    if !locals[i].contains(&(u, v)) {
                        kept_everywhere = false;
                        break;
                    }
                }
            }
            if co_located && kept_everywhere {
                g.link(u, v);
            }
        }
    }
    Ok(g)
}

/// Turns the skeleton into a partially oriented graph by marking
/// unshielded colliders: for every recorded separation of `(u, v)` and
/// every common neighbor `w` outside the separator, arrowheads point at
/// `w` from both sides. Marks at the far ends are left alone.
pub fn orient_v_structures(skeleton: &UndirectedGraph, sepsets: &SepsetMap) -> MixedGraph {
    let mut g = skeleton.to_mixed();
    for (&(u, v), s) in sepsets.iter() {
        for &w in skeleton.neighbors(u).intersection(skeleton.neighbors(v)) {
            if !s.contains(&w) {
                g.add_arrowhead(u, w).expect("w adjacent to u");
                g.add_arrowhead(v, w).expect("w adjacent to v");
            }
        }
    }
    g
}

/// Closes the graph under the three orientation rules, sweeping them in
/// order and rescanning until none applies. Each application turns one
/// undirected edge into a directed one; nothing is ever downgraded.
///
/// 1. `u ∗→ v — v'` with `u, v'` non-adjacent forces `v → v'`.
/// 2. `u → v → w` with `u — w` forces `u → w`.
/// 3. `u — v₁ → w`, `u — v₂ → w`, `u — w` with `v₁, v₂` non-adjacent
///    forces `u → w`.
pub fn apply_rules(g: &mut MixedGraph) {
    loop {
        let changed = rule_one(g) | rule_two(g) | rule_three(g);
        if !changed {
            break;
        }
    }
}

fn rule_one(g: &mut MixedGraph) -> bool {
    let mut changed = false;
    let mut again = true;
    while again {
        again = false;
        'scan: for v in 0..g.n_vertices() {
            for u in g.boundary(v) {
                for v2 in g.undirected_neighbors(v) {
                    if v2 != u && !g.adjacent(u, v2) {
                        g.direct(v, v2).expect("edge v — v2 is undirected");
                        changed = true;
                        again = true;
                        break 'scan;
                    }
                }
            }
        }
    }
    changed
}

fn rule_two(g: &mut MixedGraph) -> bool {
    let mut changed = false;
    let mut again = true;
    while again {
        again = false;
        let undirected: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(_, _, mu, mv)| mu == Mark::Tail && mv == Mark::Tail)
            .map(|(u, v, _, _)| (u, v))
            .collect();
        'scan: for (u, w) in undirected {
            for (from, to) in [(u, w), (w, u)] {
                if g.children(from).intersection(&g.parents(to)).next().is_some() {
                    g.direct(from, to).expect("edge from — to is undirected");
                    changed = true;
                    again = true;
                    break 'scan;
                }
            }
        }
    }
    changed
}

fn rule_three(g: &mut MixedGraph) -> bool {
    let mut changed = false;
    let mut again = true;
    while again {
        again = false;
        let undirected: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(_, _, mu, mv)| mu == Mark::Tail && mv == Mark::Tail)
            .map(|(u, v, _, _)| (u, v))
            .collect();
        'scan: for (a, b) in undirected {
            for (from, to) in [(a, b), (b, a)] {
                let cands: Vec<usize> = g
                    .undirected_neighbors(from)
                    .intersection(&g.parents(to))
                    .copied()
                    .collect();
                for (i, &v1) in cands.iter().enumerate() {
                    for &v2 in &cands[i + 1..] {
                        if !g.adjacent(v1, v2) {
                            g.direct(from, to).expect("edge from — to is undirected");
                            changed = true;
                            again = true;
                            break 'scan;
                        }
                    }
                }
            }
        }
    }
    changed
}

/// Orients every undirected edge of a pattern into a directed one so the
/// result has as few bidirected edges as possible. The undirected part
/// must be chordal; its junction tree, walked breadth-first from the
/// clique holding the smallest vertex, ranks each vertex by the first
/// clique that contains it (ties by index), and edges run from lower to
/// higher rank. Directed and bidirected edges pass through untouched.
pub fn minimum_bidirected(pattern: &MixedGraph) -> Result<MixedGraph> {
    let p = pattern.n_vertices();
    let mut u_part = UndirectedGraph::new(pattern.names().to_vec())?;
    for (u, v, mu, mv) in pattern.edges() {
        if mu == Mark::Tail && mv == Mark::Tail {
            u_part.link(u, v);
        }
    }
    if !u_part.is_chordal() {
        return Err(Error::NotChordalUndirectedPart);
    }
    let ct = u_part.junction_tree()?;
    if ct.cliques.is_empty() {
        return Ok(pattern.clone());
    }
    let mut adjc = vec![Vec::new(); ct.cliques.len()];
    for &(i, j, _) in &ct.edges {
        adjc[i].push(j);
        adjc[j].push(i);
    }
    for l in &mut adjc {
        l.sort_unstable();
    }
    // breadth-first clique positions from the lexicographically first
    // clique, which holds the smallest vertex
    let mut pos = vec![usize::MAX; ct.cliques.len()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    pos[0] = 0;
    let mut next = 1;
    while let Some(i) = queue.pop_front() {
        for &j in &adjc[i] {
            if pos[j] == usize::MAX {
                pos[j] = next;
                next += 1;
                queue.push_back(j);
            }
        }
    }
    let mut first = vec![usize::MAX; p];
    for (ci, clique) in ct.cliques.iter().enumerate() {
        for &v in clique {
            first[v] = first[v].min(pos[ci]);
        }
    }
    let mut out = pattern.clone();
    for (u, v, mu, mv) in pattern.edges() {
        if mu == Mark::Tail && mv == Mark::Tail {
            if (first[u], u) < (first[v], v) {
                out.direct(u, v)?;
            } else {
                out.direct(v, u)?;
            }
        }
    }
    Ok(out)
}

/// Runs the whole decomposition pipeline and returns the learned graph
/// together with the tree, the separators, and any warnings.
pub fn learn(
    tester: &(impl CiTester + ?Sized),
    alpha: f64,
    source: TreeSource<'_>,
    variant: Variant,
) -> Result<LearnOutput> {
    let tree = match source {
        TreeSource::Tests => tree_from_tester(tester, alpha)?,
        TreeSource::Hypergraph(h) => {
            if h.names() != tester.names() {
                return Err(Error::VertexMismatch(
                    "hypergraph and tester are over different variables".into(),
                ));
            }
            tree_from_hypergraph(h)?
        }
        TreeSource::Tree(t) => {
            if t.names() != tester.names() {
                return Err(Error::VertexMismatch(
                    "tree and tester are over different variables".into(),
                ));
            }
            t.clone()
        }
    };
    let (locals, sepsets, warnings) = local_skeletons(tester, &tree, alpha)?;
    let skeleton = combine(&tree, &locals)?;
    let mut graph = orient_v_structures(&skeleton, &sepsets);
    apply_rules(&mut graph);
    if variant == Variant::MinimumBidirected {
        graph = minimum_bidirected(&graph)?;
    }
    Ok(LearnOutput {
        graph,
        sepsets,
        tree: Some(tree),
        warnings,
    })
}
