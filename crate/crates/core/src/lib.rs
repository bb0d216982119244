//! Structure learning for multivariate-regression chain graphs (MVR CGs).
//!
//! MVR CGs mix directed and bidirected edges; a bidirected edge stands for
//! a hidden common cause. This crate learns their structure from data by
//! decomposing the problem along an m-separation tree: a junction tree
//! built from pairwise full-conditional independence tests, inside whose
//! nodes small local skeleton searches run independently before being
//! combined, oriented, and closed under the pattern rules. A level-wise
//! PC-style learner over the full vertex set is included as a baseline,
//! along with an exact m-separation oracle, a simulation stack (random
//! MVR CGs, linear-SEM sampling, Bayesian-network forward sampling), and
//! structural metrics for benchmarking.

pub mod chordal;
pub mod ci;
pub mod decomp;
pub mod error;
pub mod format;
pub mod graph;
pub mod metrics;
pub mod numeric;
pub mod pc;
pub mod septree;
pub mod simulate;

pub use error::{Error, Result};
pub use graph::{CanonicalDag, Mark, MixedGraph, Projection, VertexSet};

/// Gaussian sufficient statistics over `f64` data.
pub type GaussianStats64 = ci::GaussianStats<f64>;
/// Fisher-z tester over `f64` data.
pub type GaussianTester64 = ci::GaussianTester<f64>;
