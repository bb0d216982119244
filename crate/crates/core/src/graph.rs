//! Mixed graphs with per-endpoint edge marks, and the m-separation
//! machinery for multivariate-regression chain graphs (MVR CGs).
//!
//! An edge stores one mark at each endpoint, either [`Mark::Tail`] or
//! [`Mark::Arrow`]:
//!
//! * directed `u -> v`: tail at `u`, arrow at `v`
//! * bidirected `u <-> v`: arrow at both ends
//! * undirected `u -- v`: tail at both ends
//!
//! At most one edge joins a pair of vertices. Learning code only ever
//! upgrades a tail to an arrowhead, never the reverse, so orientation is
//! monotone by construction.
//!
//! MVR CGs are the mixed graphs with no undirected edges and no partially
//! directed cycle (a cycle of three or more distinct vertices whose edges
//! are all forward `->` or `<->`, at least one of them directed). A
//! bidirected edge represents a hidden common cause `u <- H -> v`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::chordal::UndirectedGraph;
use crate::error::{Error, Result};

/// Sorted set of vertex indices.
pub type VertexSet = BTreeSet<usize>;

/// Edge mark at one endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Tail,
    Arrow,
}

/// Vertex names must be usable as bare tokens in the text formats:
/// non-empty, no whitespace, no `,` or `:`, not starting with `#`.
pub(crate) fn validate_names(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() {
            return Err(Error::Invalid("empty vertex name".into()));
        }
        if n.chars().any(|c| c.is_whitespace() || c == ',' || c == ':') {
            return Err(Error::Invalid(format!(
                "vertex name '{n}' contains whitespace, ',' or ':'"
            )));
        }
        if n.starts_with('#') {
            return Err(Error::Invalid(format!("vertex name '{n}' starts with '#'")));
        }
        if !seen.insert(n) {
            return Err(Error::Invalid(format!("duplicate vertex name '{n}'")));
        }
    }
    Ok(())
}

/// Mixed graph over a named vertex set, at most one edge per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    names: Vec<String>,
    /// `adj[u][v] = (mark at u, mark at v)`; stored symmetrically.
    adj: Vec<BTreeMap<usize, (Mark, Mark)>>,
}

/// Result of replacing every bidirected edge `u <-> v` with a fresh
/// latent common cause `u <- H_u_v -> v`.
#[derive(Clone, Debug)]
pub struct CanonicalDag {
    /// Directed-only graph; original vertices keep their indices, latents
    /// are appended after them.
    pub graph: MixedGraph,
    /// Indices of the added latent vertices in `graph`.
    pub latents: VertexSet,
}

/// Result of marginalizing a DAG over a latent subset.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Mixed graph over the observed vertices (re-indexed densely, names
    /// preserved). `u -> v` iff a directed path runs from `u` to `v`
    /// through latents only; `u <-> v` iff a latent trek joins them.
    pub graph: MixedGraph,
    /// Pairs for which both a directed path and a trek exist. The merged
    /// edge keeps arrowheads at both ends, but such a graph does not
    /// represent the marginal independence model; callers that need an
    /// MVR CG should reject and resample.
    pub conflicts: Vec<(usize, usize)>,
}

impl MixedGraph {
    pub fn new(names: Vec<String>) -> Result<Self> {
        validate_names(&names)?;
        let adj = vec![BTreeMap::new(); names.len()];
        Ok(MixedGraph { names, adj })
    }

    /// Convenience constructor from string slices.
    pub fn with_names(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|s| s.to_string()).collect())
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

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.names.len() {
            return Err(Error::Invalid(format!(
                "vertex index {v} out of range (graph has {} vertices)",
                self.names.len()
            )));
        }
        Ok(())
    }

    fn add_edge(&mut self, u: usize, v: usize, mu: Mark, mv: Mark) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Invalid(format!("self loop at '{}'", self.names[u])));
        }
        if self.adj[u].contains_key(&v) {
            return Err(Error::Invalid(format!(
                "duplicate edge between '{}' and '{}'",
                self.names[u], self.names[v]
            )));
        }
        self.adj[u].insert(v, (mu, mv));
        self.adj[v].insert(u, (mv, mu));
        Ok(())
    }

    /// Adds `u -> v`.
    pub fn add_directed(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge(u, v, Mark::Tail, Mark::Arrow)
    }

    /// Adds `u <-> v`.
    pub fn add_bidirected(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge(u, v, Mark::Arrow, Mark::Arrow)
    }

    /// Adds `u -- v`.
    pub fn add_undirected(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge(u, v, Mark::Tail, Mark::Tail)
    }

    /// Marks of the edge between `u` and `v`, as (mark at `u`, mark at `v`).
    pub fn marks(&self, u: usize, v: usize) -> Option<(Mark, Mark)> {
        self.adj.get(u).and_then(|m| m.get(&v).copied())
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.marks(u, v).is_some()
    }

    /// Upgrades the mark at `at` on the existing edge `from ~ at` to an
    /// arrowhead. Tails only ever become arrowheads; an existing arrowhead
    /// is left alone, so repeated application is harmless.
    pub fn add_arrowhead(&mut self, from: usize, at: usize) -> Result<()> {
        let (m_at, m_from) = self.marks(at, from).ok_or_else(|| {
            Error::Invalid(format!(
                "no edge between '{}' and '{}'",
                self.names.get(from).map(String::as_str).unwrap_or("?"),
                self.names.get(at).map(String::as_str).unwrap_or("?")
            ))
        })?;
        if m_at == Mark::Arrow {
            return Ok(());
        }
        self.adj[at].insert(from, (Mark::Arrow, m_from));
        self.adj[from].insert(at, (m_from, Mark::Arrow));
        Ok(())
    }

    /// Turns the existing undirected edge `from -- to` into `from -> to`.
    pub fn direct(&mut self, from: usize, to: usize) -> Result<()> {
        match self.marks(from, to) {
            Some((Mark::Tail, Mark::Tail)) => {
                self.adj[from].insert(to, (Mark::Tail, Mark::Arrow));
                self.adj[to].insert(from, (Mark::Arrow, Mark::Tail));
                Ok(())
            }
            Some(_) => Err(Error::Invalid(format!(
                "edge between '{}' and '{}' is not undirected",
                self.names[from], self.names[to]
            ))),
            None => Err(Error::Invalid(format!(
                "no edge between '{}' and '{}'",
                self.names[from], self.names[to]
            ))),
        }
    }

    /// All edges as `(u, v, mark at u, mark at v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Mark, Mark)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |(&v, _)| v > u)
                .map(move |(&v, &(mu, mv))| (u, v, mu, mv))
        })
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    pub fn n_directed(&self) -> usize {
        self.edges().filter(|&(_, _, a, b)| (a, b) == (Mark::Tail, Mark::Arrow) || (a, b) == (Mark::Arrow, Mark::Tail)).count()
    }

    pub fn n_bidirected(&self) -> usize {
        self.edges().filter(|&(_, _, a, b)| (a, b) == (Mark::Arrow, Mark::Arrow)).count()
    }

    pub fn n_undirected(&self) -> usize {
        self.edges().filter(|&(_, _, a, b)| (a, b) == (Mark::Tail, Mark::Tail)).count()
    }

    /// Vertices adjacent to `v` via any edge.
    pub fn adjacency(&self, v: usize) -> VertexSet {
        self.adj[v].keys().copied().collect()
    }

    /// `u` with `u -> v`.
    pub fn parents(&self, v: usize) -> VertexSet {
        self.adj[v]
            .iter()
            .filter(|(_, &(mv, mu))| mv == Mark::Arrow && mu == Mark::Tail)
            .map(|(&u, _)| u)
            .collect()
    }

    /// `w` with `v -> w`.
    pub fn children(&self, v: usize) -> VertexSet {
        self.adj[v]
            .iter()
            .filter(|(_, &(mv, mw))| mv == Mark::Tail && mw == Mark::Arrow)
            .map(|(&w, _)| w)
            .collect()
    }

    /// `u` with `u <-> v`.
    pub fn spouses(&self, v: usize) -> VertexSet {
        self.adj[v]
            .iter()
            .filter(|(_, &(mv, mu))| mv == Mark::Arrow && mu == Mark::Arrow)
            .map(|(&u, _)| u)
            .collect()
    }

    /// `u` with `u -- v`.
    pub fn undirected_neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
            .iter()
            .filter(|(_, &(mv, mu))| mv == Mark::Tail && mu == Mark::Tail)
            .map(|(&u, _)| u)
            .collect()
    }

    /// Boundary of `v`: parents plus bidirected neighbors.
    pub fn boundary(&self, v: usize) -> VertexSet {
        let mut b = self.parents(v);
        b.extend(self.spouses(v));
        b
    }

    /// True when the graph has no undirected edges and no partially
    /// directed cycle.
    pub fn is_mvr_cg(&self) -> bool {
        if self.n_undirected() > 0 {
            return false;
        }
        !self.has_partially_directed_cycle()
    }

    /// A partially directed cycle exists iff some directed edge `u -> v`
    /// admits a return route from `v` to `u` along edges traversable
    /// forward (`x -> y` or `x <-> y`). With one edge per pair, any such
    /// route plus the closing edge forms a cycle of three or more
    /// distinct vertices with at least one directed edge.
    pub fn has_partially_directed_cycle(&self) -> bool {
        let p = self.n_vertices();
        for u in 0..p {
            for (&v, &(mu, mv)) in &self.adj[u] {
                if (mu, mv) != (Mark::Tail, Mark::Arrow) {
                    continue;
                }
                // BFS from v over forward-traversable edges.
                let mut seen = vec![false; p];
                let mut queue = VecDeque::from([v]);
                seen[v] = true;
                while let Some(x) = queue.pop_front() {
                    if x == u {
                        return true;
                    }
                    for (&y, &(_, my)) in &self.adj[x] {
                        // arrowhead at y means x -> y or x <-> y
                        if my == Mark::Arrow && !seen[y] {
                            seen[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        false
    }

    /// Connected components of the bidirected part. Requires an MVR CG;
    /// singletons are components of their own.
    pub fn chain_components(&self) -> Result<Vec<VertexSet>> {
        if !self.is_mvr_cg() {
            return Err(Error::NotChainGraph(
                "chain components are only defined for MVR chain graphs".into(),
            ));
        }
        let p = self.n_vertices();
        let mut comp = vec![usize::MAX; p];
        let mut parts: Vec<VertexSet> = Vec::new();
        for s in 0..p {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = parts.len();
            let mut part = VertexSet::new();
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(x) = queue.pop_front() {
                part.insert(x);
                for y in self.spouses(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        queue.push_back(y);
                    }
                }
            }
            parts.push(part);
        }
        Ok(parts)
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        for &v in s {
            self.check_vertex(v)?;
        }
        Ok(())
    }

    /// `An(X)`: `X` together with every vertex that reaches some member of
    /// `X` by a path of directed edges. Bidirected edges never contribute.
    pub fn ancestors(&self, x: &VertexSet) -> Result<VertexSet> {
        self.check_set(x)?;
        let mut an = x.clone();
        let mut queue: VecDeque<usize> = x.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for u in self.parents(v) {
                if an.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        Ok(an)
    }

    /// Subgraph induced by `keep`, with vertices re-indexed densely in
    /// ascending order of their old indices. Returns the new graph and the
    /// old index of each new vertex.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(MixedGraph, Vec<usize>)> {
        self.check_set(keep)?;
        let old_of_new: Vec<usize> = keep.iter().copied().collect();
        let mut new_of_old = BTreeMap::new();
        for (ni, &oi) in old_of_new.iter().enumerate() {
            new_of_old.insert(oi, ni);
        }
        let names = old_of_new.iter().map(|&o| self.names[o].clone()).collect();
        let mut g = MixedGraph::new(names)?;
        for (u, v, mu, mv) in self.edges() {
            if let (Some(&nu), Some(&nv)) = (new_of_old.get(&u), new_of_old.get(&v)) {
                g.add_edge(nu, nv, mu, mv)?;
            }
        }
        Ok((g, old_of_new))
    }

    /// Skeleton: same vertices, every edge kept as undirected adjacency.
    pub fn skeleton(&self) -> UndirectedGraph {
        let mut u = UndirectedGraph::new(self.names.clone()).expect("names already validated");
        for (a, b, _, _) in self.edges() {
            u.link(a, b);
        }
        u
    }

    /// Augmented graph: `c -- d` iff a collider chain joins `c` and `d`
    /// (a chain whose every non-endpoint vertex has arrowheads on both
    /// sides). Single edges count, so adjacency is preserved.
    pub fn augmented(&self) -> UndirectedGraph {
        let p = self.n_vertices();
        let mut aug = UndirectedGraph::new(self.names.clone()).expect("names already validated");
        for s in 0..p {
            // State = (vertex, arrived-with-arrowhead). A vertex can be
            // crossed only when both its arrival and departure marks are
            // arrowheads; walk-reachability equals chain-reachability here
            // because loops through a repeated vertex can be spliced out
            // without breaking the collider property.
            let mut seen = vec![[false; 2]; p];
            let mut queue = VecDeque::new();
            for (&w, &(_, mw)) in &self.adj[s] {
                let f = usize::from(mw == Mark::Arrow);
                if !seen[w][f] {
                    seen[w][f] = true;
                    queue.push_back((w, mw == Mark::Arrow));
                }
            }
            while let Some((w, arrived_arrow)) = queue.pop_front() {
                if w != s {
                    aug.link(s, w);
                }
                if !arrived_arrow {
                    continue;
                }
                for (&x, &(mw, mx)) in &self.adj[w] {
                    if mw != Mark::Arrow {
                        continue;
                    }
                    let f = usize::from(mx == Mark::Arrow);
                    if !seen[x][f] {
                        seen[x][f] = true;
                        queue.push_back((x, mx == Mark::Arrow));
                    }
                }
            }
        }
        aug
    }

    fn check_sep_args(&self, x: &VertexSet, y: &VertexSet, z: &VertexSet) -> Result<()> {
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
        Ok(())
    }

    /// m-separation of `X` and `Y` given `Z`, decided via the augmented
    /// graph of the subgraph induced by `An(X ∪ Y ∪ Z)`: the sets are
    /// separated iff `Z` separates `X` from `Y` there.
    pub fn m_separated(&self, x: &VertexSet, y: &VertexSet, z: &VertexSet) -> Result<bool> {
        self.check_sep_args(x, y, z)?;
        let mut u: VertexSet = x.union(y).copied().collect();
        u.extend(z.iter().copied());
        let an = self.ancestors(&u)?;
        let (sub, old_of_new) = self.induced_subgraph(&an)?;
        let mut new_of_old = BTreeMap::new();
        for (ni, &oi) in old_of_new.iter().enumerate() {
            new_of_old.insert(oi, ni);
        }
        let tr = |s: &VertexSet| s.iter().map(|v| new_of_old[v]).collect::<VertexSet>();
        sub.augmented().u_separated(&tr(x), &tr(y), &tr(z))
    }

    /// m-separation decided definitionally: `X` and `Y` are separated
    /// given `Z` iff no chain between them is m-connecting (every
    /// non-collider off `Z`, every collider in `An(Z)`). Enumerates simple
    /// chains; exponential, intended for small graphs and cross-checks.
    pub fn m_separated_bruteforce(
        &self,
        x: &VertexSet,
        y: &VertexSet,
        z: &VertexSet,
    ) -> Result<bool> {
        self.check_sep_args(x, y, z)?;
        let anz = self.ancestors(z)?;
        let mut on_path = vec![false; self.n_vertices()];
        for &s in x {
            let mut path = vec![s];
            on_path[s] = true;
            let found = self.connecting_chain_dfs(&mut path, &mut on_path, y, z, &anz);
            on_path[s] = false;
            if found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn connecting_chain_dfs(
        &self,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        y: &VertexSet,
        z: &VertexSet,
        anz: &VertexSet,
    ) -> bool {
        let last = *path.last().unwrap();
        for (&next, &(m_last_out, _)) in &self.adj[last] {
            if on_path[next] {
                continue;
            }
            if path.len() >= 2 {
                // `last` becomes an interior vertex of the extended chain;
                // its status is now determined by its two incident marks.
                let prev = path[path.len() - 2];
                let m_last_in = self.adj[last][&prev].0;
                let collider = m_last_in == Mark::Arrow && m_last_out == Mark::Arrow;
                if collider {
                    if !anz.contains(&last) {
                        continue;
                    }
                } else if z.contains(&last) {
                    continue;
                }
            }
            if y.contains(&next) {
                return true;
            }
            path.push(next);
            on_path[next] = true;
            let found = self.connecting_chain_dfs(path, on_path, y, z, anz);
            path.pop();
            on_path[next] = false;
            if found {
                return true;
            }
        }
        false
    }

    /// Unshielded colliders: triples `(u, w, v)` with `u < v`, `u` and `v`
    /// non-adjacent, and arrowheads at `w` on both edges.
    pub fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for w in 0..self.n_vertices() {
            let nbrs: Vec<usize> = self.adj[w].keys().copied().collect();
            for (i, &u) in nbrs.iter().enumerate() {
                for &v in &nbrs[i + 1..] {
                    if self.adjacent(u, v) {
                        continue;
                    }
                    if self.adj[w][&u].0 == Mark::Arrow && self.adj[w][&v].0 == Mark::Arrow {
                        out.insert((u, w, v));
                    }
                }
            }
        }
        out
    }

    /// Topological order over directed edges, smallest index first among
    /// ready vertices. Errors if any edge is not directed or a cycle exists.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let p = self.n_vertices();
        for (u, v, mu, mv) in self.edges() {
            if !matches!((mu, mv), (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail)) {
                return Err(Error::NotAcyclic(format!(
                    "edge between '{}' and '{}' is not directed",
                    self.names[u], self.names[v]
                )));
            }
        }
        let mut indeg: Vec<usize> = (0..p).map(|v| self.parents(v).len()).collect();
        let mut ready: BTreeSet<usize> =
            (0..p).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(p);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for w in self.children(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() < p {
            let stuck = (0..p).find(|v| !order.contains(v)).unwrap();
            return Err(Error::CycleInDag(self.names[stuck].clone()));
        }
        Ok(order)
    }

    /// True when every edge is directed and the graph is acyclic.
    pub fn is_dag(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Replaces each bidirected edge with a latent common cause named
    /// `H_<u>_<v>` (suffixed with `_` on collision). Requires an MVR CG.
    pub fn canonical_dag(&self) -> Result<CanonicalDag> {
        if !self.is_mvr_cg() {
            return Err(Error::NotChainGraph(
                "canonical DAG requires an MVR chain graph".into(),
            ));
        }
        let p = self.n_vertices();
        let bidir: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(_, _, a, b)| (a, b) == (Mark::Arrow, Mark::Arrow))
            .map(|(u, v, _, _)| (u, v))
            .collect();
        let mut names = self.names.clone();
        for &(u, v) in &bidir {
            let mut h = format!("H_{}_{}", self.names[u], self.names[v]);
            while names.contains(&h) {
                h.push('_');
            }
            names.push(h);
        }
        let mut g = MixedGraph::new(names)?;
        for (u, v, mu, mv) in self.edges() {
            match (mu, mv) {
                (Mark::Tail, Mark::Arrow) => g.add_directed(u, v)?,
                (Mark::Arrow, Mark::Tail) => g.add_directed(v, u)?,
                (Mark::Arrow, Mark::Arrow) => {}
                (Mark::Tail, Mark::Tail) => unreachable!("MVR CG has no undirected edges"),
            }
        }
        let mut latents = VertexSet::new();
        for (k, &(u, v)) in bidir.iter().enumerate() {
            let h = p + k;
            g.add_directed(h, u)?;
            g.add_directed(h, v)?;
            latents.insert(h);
        }
        Ok(CanonicalDag { graph: g, latents })
    }

    /// Marginalizes a DAG over `latents`. See [`Projection`] for the edge
    /// semantics and the conflict report.
    pub fn latent_project(&self, latents: &VertexSet) -> Result<Projection> {
        self.check_set(latents)?;
        if !self.is_dag() {
            return Err(Error::NotAcyclic("latent projection requires a DAG".into()));
        }
        let p = self.n_vertices();
        let observed: Vec<usize> = (0..p).filter(|v| !latents.contains(v)).collect();
        if observed.is_empty() {
            return Err(Error::Invalid("no observed vertices remain".into()));
        }
        let mut new_of_old = BTreeMap::new();
        for (ni, &oi) in observed.iter().enumerate() {
            new_of_old.insert(oi, ni);
        }
        // Observed vertices reachable from each source's children by
        // directed paths whose interior stays latent.
        let reach_observed = |start: usize| -> VertexSet {
            let mut seen = vec![false; p];
            let mut out = VertexSet::new();
            let mut stack: Vec<usize> = self.children(start).into_iter().collect();
            while let Some(x) = stack.pop() {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                if latents.contains(&x) {
                    stack.extend(self.children(x));
                } else {
                    out.insert(x);
                }
            }
            out
        };
        let mut directed: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &o in &observed {
            for t in reach_observed(o) {
                directed.insert((new_of_old[&o], new_of_old[&t]));
            }
        }
        let mut bidirected: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &h in latents {
            let ro: Vec<usize> = reach_observed(h).into_iter().collect();
            for (i, &a) in ro.iter().enumerate() {
                for &b in &ro[i + 1..] {
                    bidirected.insert((new_of_old[&a], new_of_old[&b]));
                }
            }
        }
        let names = observed.iter().map(|&o| self.names[o].clone()).collect();
        let mut g = MixedGraph::new(names)?;
        let mut conflicts = Vec::new();
        let mut pairs: BTreeSet<(usize, usize)> = bidirected.clone();
        for &(a, b) in &directed {
            pairs.insert((a.min(b), a.max(b)));
        }
        for (a, b) in pairs {
            let bi = bidirected.contains(&(a, b));
            let d_ab = directed.contains(&(a, b));
            let d_ba = directed.contains(&(b, a));
            debug_assert!(!(d_ab && d_ba), "two-way directed reach inside a DAG");
            if bi && (d_ab || d_ba) {
                g.add_bidirected(a, b)?;
                conflicts.push((a, b));
            } else if bi {
                g.add_bidirected(a, b)?;
            } else if d_ab {
                g.add_directed(a, b)?;
            } else {
                g.add_directed(b, a)?;
            }
        }
        Ok(Projection { graph: g, conflicts })
    }
}
