//! Simulation stack: random MVR chain graphs via latent projection of
//! random DAGs, Gaussian data from linear structural equation models, and
//! categorical data from Bayesian networks.
//!
//! Everything takes an explicit RNG and draws in a fixed order, so a
//! seed pins down the entire run. [`seeded_rng`] is the conventional
//! entry point.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ci::{DiscreteData, GaussianStats};
use crate::error::{Error, Result};
use crate::graph::{MixedGraph, VertexSet};

/// How many projection attempts [`random_mvr_cg`] makes before giving up.
pub const MAX_RETRIES: usize = 1000;

/// The admissible latent fractions.
pub const LATENT_FRACTIONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

/// A deterministic, seedable RNG for the whole simulation stack.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of one simulated graph: `p` observed variables, an average
/// vertex degree, and the fraction of additional latent variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub p: usize,
    pub avg_degree: f64,
    pub latent_fraction: f64,
}

impl SimConfig {
    pub fn new(p: usize, avg_degree: f64, latent_fraction: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Invalid(format!("need at least 2 variables, got {p}")));
        }
        if !LATENT_FRACTIONS
            .iter()
            .any(|&k| (latent_fraction - k).abs() <= 1e-6)
        {
            return Err(Error::Invalid(format!(
                "latent fraction must be one of {LATENT_FRACTIONS:?}, got {latent_fraction}"
            )));
        }
        if p >= 40 && latent_fraction > 0.2 + 1e-6 {
            return Err(Error::Invalid(format!(
                "latent fraction is capped at 0.2 for {p} variables"
            )));
        }
        let cfg = SimConfig { p, avg_degree, latent_fraction };
        let total = cfg.total_vertices();
        if !(avg_degree >= 1.0 && avg_degree <= (total - 1) as f64) {
            return Err(Error::Invalid(format!(
                "average degree must lie in [1, {}], got {avg_degree}",
                total - 1
            )));
        }
        Ok(cfg)
    }

    /// Number of latent variables: `round(latent_fraction * p)`.
    pub fn n_latent(&self) -> usize {
        (self.latent_fraction * self.p as f64).round() as usize
    }

    pub fn total_vertices(&self) -> usize {
        self.p + self.n_latent()
    }
}

/// A random graph draw: the MVR chain graph over the observed variables
/// together with the DAG (observed + latent) that generated it.
#[derive(Clone, Debug)]
pub struct SimulatedGraph {
    /// Projected MVR chain graph over `x0 .. x{p-1}`.
    pub graph: MixedGraph,
    /// Generating DAG over observed (`x*`) and latent (`h*`) vertices.
    pub dag: MixedGraph,
    /// Indices of the latent vertices in `dag`.
    pub latents: VertexSet,
}

/// Draws a random MVR chain graph: an Erdős–Rényi DAG over
/// `p + round(k·p)` vertices (pair probability `degree/(total-1)`,
/// orientation from a random permutation), a uniform latent subset of the
/// requested size, and the latent projection of the two. Draws are
/// rejected while the projection has directed/bidirected conflicts or a
/// partially directed cycle; after [`MAX_RETRIES`] rejections the error
/// reports the attempt count.
pub fn random_mvr_cg(cfg: &SimConfig, rng: &mut impl Rng) -> Result<SimulatedGraph> {
    let total = cfg.total_vertices();
    let l = cfg.n_latent();
    let prob = cfg.avg_degree / (total - 1) as f64;
    for _ in 0..MAX_RETRIES {
        let mut perm: Vec<usize> = (0..total).collect();
        perm.shuffle(rng);
        let mut rank = vec![0usize; total];
        for (r, &v) in perm.iter().enumerate() {
            rank[v] = r;
        }
        let latents: VertexSet = rand::seq::index::sample(rng, total, l).into_iter().collect();
        let mut names = Vec::with_capacity(total);
        let (mut nx, mut nh) = (0, 0);
        for v in 0..total {
            if latents.contains(&v) {
                names.push(format!("h{nh}"));
                nh += 1;
            } else {
                names.push(format!("x{nx}"));
                nx += 1;
            }
        }
        let mut dag = MixedGraph::new(names).expect("generated names are valid");
        for u in 0..total {
            for v in u + 1..total {
                if rng.random_bool(prob) {
                    if rank[u] < rank[v] {
                        dag.add_directed(u, v).expect("fresh pair");
                    } else {
                        dag.add_directed(v, u).expect("fresh pair");
                    }
                }
            }
        }
        let proj = dag.latent_project(&latents)?;
        if proj.conflicts.is_empty() && proj.graph.is_mvr_cg() {
            return Ok(SimulatedGraph { graph: proj.graph, dag, latents });
        }
    }
    Err(Error::RetryExhausted(MAX_RETRIES))
}

/// Draws one weight per directed edge of a DAG: magnitude uniform on
/// `[0.5, 1.5]`, sign a fair coin. Keys are `(parent, child)`.
pub fn random_sem_weights(
    dag: &MixedGraph,
    rng: &mut impl Rng,
) -> Result<BTreeMap<(usize, usize), f64>> {
    let mut weights = BTreeMap::new();
    for (u, v, mu, mv) in dag.edges() {
        let (parent, child) = match (mu, mv) {
            (crate::graph::Mark::Tail, crate::graph::Mark::Arrow) => (u, v),
            (crate::graph::Mark::Arrow, crate::graph::Mark::Tail) => (v, u),
            _ => {
                return Err(Error::NotAcyclic(
                    "SEM weights need a purely directed graph".into(),
                ))
            }
        };
        let magnitude = 0.5 + rng.random::<f64>();
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        weights.insert((parent, child), sign * magnitude);
    }
    Ok(weights)
}

/// Samples `n` rows of the linear SEM `x_v = Σ_u w_(u,v) x_u + ε_v` with
/// standard normal noise, over every vertex of the DAG. Noise is drawn
/// in vertex order row by row; values are solved in topological order.
pub fn sample_linear_sem(
    dag: &MixedGraph,
    weights: &BTreeMap<(usize, usize), f64>,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<f64>>> {
    let order = dag.topological_order()?;
    let t = dag.n_vertices();
    for (u, v, mu, _) in dag.edges() {
        let key = if mu == crate::graph::Mark::Tail { (u, v) } else { (v, u) };
        if !weights.contains_key(&key) {
            return Err(Error::Invalid(format!(
                "no weight for edge ({}, {})",
                key.0, key.1
            )));
        }
    }
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x: Vec<f64> = (0..t).map(|_| rng.sample(StandardNormal)).collect();
        for &v in &order {
            for u in dag.parents(v) {
                let w = weights[&(u, v)];
                x[v] += w * x[u];
            }
        }
        rows.push(x);
    }
    Ok(rows)
}

/// Samples the SEM of a simulated graph and keeps the observed columns,
/// in the projected graph's variable order. Returns the covariance
/// summary alongside the raw rows.
pub fn sample_gaussian(
    sim: &SimulatedGraph,
    weights: &BTreeMap<(usize, usize), f64>,
    n: usize,
    rng: &mut impl Rng,
) -> Result<(GaussianStats<f64>, Vec<Vec<f64>>)> {
    let full = sample_linear_sem(&sim.dag, weights, n, rng)?;
    let observed: Vec<usize> = (0..sim.dag.n_vertices())
        .filter(|v| !sim.latents.contains(v))
        .collect();
    let rows: Vec<Vec<f64>> = full
        .iter()
        .map(|r| observed.iter().map(|&v| r[v]).collect())
        .collect();
    let stats = GaussianStats::from_rows(sim.graph.names().to_vec(), &rows)?;
    Ok((stats, rows))
}

/// A discrete Bayesian network: a DAG plus one conditional probability
/// table per node. CPT rows are indexed by the parent configuration with
/// the **last** parent varying fastest; each row holds one probability
/// per node state and must sum to 1 (up to 1e-6; rows are renormalized).
#[derive(Clone, Debug, PartialEq)]
pub struct BayesNet {
    names: Vec<String>,
    arities: Vec<u32>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Vec<Vec<f64>>>,
    order: Vec<usize>,
}

impl BayesNet {
    /// `cpts[v]` is a matrix: one row per parent configuration, one
    /// column per state of `v`.
    pub fn new(
        names: Vec<String>,
        arities: Vec<u32>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        crate::graph::validate_names(&names)?;
        let p = names.len();
        if arities.len() != p || parents.len() != p || cpts.len() != p {
            return Err(Error::Invalid(
                "arities, parents, and tables must cover every node".into(),
            ));
        }
        if let Some(i) = arities.iter().position(|&r| r < 2) {
            return Err(Error::InvalidCpt(
                names[i].clone(),
                "every node needs at least 2 states".into(),
            ));
        }
        let mut dag = MixedGraph::new(names.clone())?;
        for (v, ps) in parents.iter().enumerate() {
            for &u in ps {
                if u >= p {
                    return Err(Error::InvalidCpt(
                        names[v].clone(),
                        format!("parent index {u} out of range"),
                    ));
                }
                dag.add_directed(u, v)?;
            }
        }
        let order = dag.topological_order()?;
        let mut cpts = cpts;
        for v in 0..p {
            let expect_rows: usize = parents[v]
                .iter()
                .map(|&u| arities[u] as usize)
                .product();
            if cpts[v].len() != expect_rows {
                return Err(Error::InvalidCpt(
                    names[v].clone(),
                    format!("expected {expect_rows} rows, got {}", cpts[v].len()),
                ));
            }
            for row in &mut cpts[v] {
                if row.len() != arities[v] as usize {
                    return Err(Error::InvalidCpt(
                        names[v].clone(),
                        format!("expected {} probabilities per row, got {}", arities[v], row.len()),
                    ));
                }
                if row.iter().any(|&q| !(q >= 0.0) || !q.is_finite()) {
                    return Err(Error::InvalidCpt(
                        names[v].clone(),
                        "probabilities must be finite and non-negative".into(),
                    ));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidCpt(
                        names[v].clone(),
                        format!("row sums to {sum}, not 1"),
                    ));
                }
                for q in row.iter_mut() {
                    *q /= sum;
                }
            }
        }
        Ok(BayesNet { names, arities, parents, cpts, order })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn cpt(&self, v: usize) -> &[Vec<f64>] {
        &self.cpts[v]
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    /// The CPT row for `v` under the given parent values (one value per
    /// parent, in `parents(v)` order); the last parent varies fastest.
    pub fn row_index(&self, v: usize, parent_values: &[u32]) -> usize {
        let mut idx = 0;
        for (&u, &val) in self.parents[v].iter().zip(parent_values) {
            idx = idx * self.arities[u] as usize + val as usize;
        }
        idx
    }

    /// The network's DAG.
    pub fn dag(&self) -> MixedGraph {
        let mut g = MixedGraph::new(self.names.clone()).expect("names already validated");
        for (v, ps) in self.parents.iter().enumerate() {
            for &u in ps {
                g.add_directed(u, v).expect("validated in the constructor");
            }
        }
        g
    }

    /// Forward-samples `n` rows in topological order.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Result<DiscreteData> {
        let p = self.n_vars();
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = vec![0u32; p];
            for &v in &self.order {
                let vals: Vec<u32> = self.parents[v].iter().map(|&u| row[u]).collect();
                let table = &self.cpts[v][self.row_index(v, &vals)];
                let draw: f64 = rng.random();
                let mut acc = 0.0;
                let mut state = self.arities[v] - 1;
                for (s, &q) in table.iter().enumerate() {
                    acc += q;
                    if draw < acc {
                        state = s as u32;
                        break;
                    }
                }
                row[v] = state;
            }
            rows.push(row);
        }
        DiscreteData::from_rows(self.names.clone(), Some(self.arities.clone()), rows)
    }
}
